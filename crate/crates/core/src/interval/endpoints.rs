use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::BaseRelation;

/// Default coincidence tolerance in seconds.
pub const DEFAULT_EPS: f64 = 0.01;

/// A closed time interval in seconds relative to episode start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcreteInterval {
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("interval [{start}, {end}] collapses under tolerance {eps}")]
    DegenerateInterval { start: f64, end: f64, eps: f64 },
    #[error("tolerance must be finite and non-negative, got {0}")]
    InvalidTolerance(f64),
}

impl ConcreteInterval {
    pub fn new(start: f64, end: f64) -> ConcreteInterval {
        ConcreteInterval { start, end }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    fn check(&self, eps: f64) -> Result<(), IntervalError> {
        if !(self.start.is_finite() && self.end.is_finite()) || self.duration() <= 2.0 * eps {
            return Err(IntervalError::DegenerateInterval { start: self.start, end: self.end, eps });
        }
        Ok(())
    }
}

fn coarse_cmp(x: f64, y: f64, eps: f64) -> Ordering {
    if (x - y).abs() <= eps {
        Ordering::Equal
    } else if x < y {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Classifies the qualitative relation from `a` to `b`, treating endpoints
/// closer than `eps` as coincident.
///
/// Both intervals must be longer than `2 * eps`, otherwise their own start
/// and end would merge and the comparison would not be a total order.
pub fn relation_from_endpoints(
    a: &ConcreteInterval,
    b: &ConcreteInterval,
    eps: f64,
) -> Result<BaseRelation, IntervalError> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(IntervalError::InvalidTolerance(eps));
    }
    a.check(eps)?;
    b.check(eps)?;

    match coarse_cmp(a.end, b.start, eps) {
        Ordering::Less => return Ok(BaseRelation::Before),
        Ordering::Equal => return Ok(BaseRelation::Meets),
        Ordering::Greater => {}
    }
    match coarse_cmp(a.start, b.end, eps) {
        Ordering::Greater => return Ok(BaseRelation::After),
        Ordering::Equal => return Ok(BaseRelation::MetBy),
        Ordering::Less => {}
    }
    use Ordering::*;
    Ok(match (coarse_cmp(a.start, b.start, eps), coarse_cmp(a.end, b.end, eps)) {
        (Less, Less) => BaseRelation::Overlaps,
        (Less, Equal) => BaseRelation::FinishedBy,
        (Less, Greater) => BaseRelation::Contains,
        (Equal, Less) => BaseRelation::Starts,
        (Equal, Equal) => BaseRelation::Equals,
        (Equal, Greater) => BaseRelation::StartedBy,
        (Greater, Less) => BaseRelation::During,
        (Greater, Equal) => BaseRelation::Finishes,
        (Greater, Greater) => BaseRelation::OverlappedBy,
    })
}
