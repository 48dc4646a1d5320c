use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::EntityKind;

/// Selectional restriction on what a role or parameter may classify.
///
/// All predicates are over the ground branch: entity kind, ground type tag,
/// dispositions borne, and numeric region values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Restriction {
    KindIs(EntityKind),
    TypeTagIn(BTreeSet<String>),
    HasDisposition(String),
    RegionWithin { lo: f64, hi: f64, units: String },
    And(Vec<Restriction>),
    Or(Vec<Restriction>),
}

impl Restriction {
    pub fn type_tags<I, S>(tags: I) -> Restriction
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Restriction::TypeTagIn(tags.into_iter().map(Into::into).collect())
    }

    pub fn disposition(t: impl Into<String>) -> Restriction {
        Restriction::HasDisposition(t.into())
    }

    pub fn region(lo: f64, hi: f64, units: impl Into<String>) -> Restriction {
        Restriction::RegionWithin { lo, hi, units: units.into() }
    }

    /// Checks structural well-formedness: non-empty connectives and ordered,
    /// finite region bounds.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            Restriction::And(items) | Restriction::Or(items) => {
                if items.is_empty() {
                    return Err("empty and/or restriction".to_string());
                }
                items.iter().try_for_each(Restriction::validate)
            }
            Restriction::RegionWithin { lo, hi, .. } => {
                if !lo.is_finite() || !hi.is_finite() || lo > hi {
                    Err(format!("invalid region bounds [{lo}, {hi}]"))
                } else {
                    Ok(())
                }
            }
            Restriction::TypeTagIn(tags) if tags.is_empty() => Err("empty type tag set".to_string()),
            _ => Ok(()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Restriction::And(items) | Restriction::Or(items) => {
                1 + items.iter().map(Restriction::depth).max().unwrap_or(0)
            }
            _ => 1,
        }
    }

    /// Region leaves whose units tag is not `units`.
    pub(crate) fn foreign_units<'a>(&'a self, units: &str, out: &mut Vec<&'a str>) {
        match self {
            Restriction::RegionWithin { units: u, .. } if u != units => out.push(u),
            Restriction::And(items) | Restriction::Or(items) => {
                items.iter().for_each(|r| r.foreign_units(units, out))
            }
            _ => {}
        }
    }

    pub(crate) fn conjoin(mut parts: Vec<Restriction>) -> Option<Restriction> {
        match parts.len() {
            0 => None,
            1 => parts.pop(),
            _ => Some(Restriction::And(parts)),
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Restriction::KindIs(k) => write!(f, "kind={k:?}"),
            Restriction::TypeTagIn(tags) => {
                let tags: Vec<_> = tags.iter().map(String::as_str).collect();
                write!(f, "type in {{{}}}", tags.join(","))
            }
            Restriction::HasDisposition(d) => write!(f, "has {d}"),
            Restriction::RegionWithin { lo, hi, units } => write!(f, "within [{lo}, {hi}] {units}"),
            Restriction::And(items) | Restriction::Or(items) => {
                let op = if matches!(self, Restriction::And(_)) { " and " } else { " or " };
                f.write_str("(")?;
                for (k, r) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(op)?;
                    }
                    write!(f, "{r}")?;
                }
                f.write_str(")")
            }
        }
    }
}
