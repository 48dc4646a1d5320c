use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

include!(concat!(env!("OUT_DIR"), "/composition_table.rs"));

/// One of Allen's thirteen base relations between two intervals.
///
/// Read `a R b`: `Before` means `a` ends strictly before `b` starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseRelation {
    Before,
    After,
    Meets,
    MetBy,
    Overlaps,
    OverlappedBy,
    Starts,
    StartedBy,
    During,
    Contains,
    Finishes,
    FinishedBy,
    Equals,
}

impl BaseRelation {
    pub const ALL: [BaseRelation; 13] = [
        BaseRelation::Before,
        BaseRelation::After,
        BaseRelation::Meets,
        BaseRelation::MetBy,
        BaseRelation::Overlaps,
        BaseRelation::OverlappedBy,
        BaseRelation::Starts,
        BaseRelation::StartedBy,
        BaseRelation::During,
        BaseRelation::Contains,
        BaseRelation::Finishes,
        BaseRelation::FinishedBy,
        BaseRelation::Equals,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<BaseRelation> {
        Self::ALL.get(index).copied()
    }

    /// The relation that holds from `b` to `a` when `self` holds from `a` to `b`.
    pub fn converse(self) -> BaseRelation {
        match self {
            BaseRelation::Equals => BaseRelation::Equals,
            // Pairs sit at adjacent even/odd indices.
            other => Self::ALL[other.index() ^ 1],
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BaseRelation::Before => "b",
            BaseRelation::After => "bi",
            BaseRelation::Meets => "m",
            BaseRelation::MetBy => "mi",
            BaseRelation::Overlaps => "o",
            BaseRelation::OverlappedBy => "oi",
            BaseRelation::Starts => "s",
            BaseRelation::StartedBy => "si",
            BaseRelation::During => "d",
            BaseRelation::Contains => "di",
            BaseRelation::Finishes => "f",
            BaseRelation::FinishedBy => "fi",
            BaseRelation::Equals => "eq",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseRelation::Before => "before",
            BaseRelation::After => "after",
            BaseRelation::Meets => "meets",
            BaseRelation::MetBy => "metBy",
            BaseRelation::Overlaps => "overlaps",
            BaseRelation::OverlappedBy => "overlappedBy",
            BaseRelation::Starts => "starts",
            BaseRelation::StartedBy => "startedBy",
            BaseRelation::During => "during",
            BaseRelation::Contains => "contains",
            BaseRelation::Finishes => "finishes",
            BaseRelation::FinishedBy => "finishedBy",
            BaseRelation::Equals => "equals",
        }
    }
}

impl fmt::Display for BaseRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown interval relation `{0}`")]
pub struct UnknownRelation(pub String);

impl FromStr for BaseRelation {
    type Err = UnknownRelation;

    /// Accepts the short symbols, the long names, and the plan vocabulary
    /// spelling `overlapsWith`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "=" || s == "overlapsWith" {
            return Ok(if s == "=" { BaseRelation::Equals } else { BaseRelation::Overlaps });
        }
        BaseRelation::ALL
            .iter()
            .copied()
            .find(|r| r.symbol() == s || r.name() == s)
            .ok_or_else(|| UnknownRelation(s.to_string()))
    }
}

/// A disjunction of base relations stored as a 13-bit mask.
///
/// The empty set means the constraint cannot be met; the full set carries no
/// information.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RelationSet(u16);

impl RelationSet {
    const MASK: u16 = (1 << 13) - 1;

    pub const EMPTY: RelationSet = RelationSet(0);
    pub const FULL: RelationSet = RelationSet(Self::MASK);

    pub fn from_bits(bits: u16) -> RelationSet {
        RelationSet(bits & Self::MASK)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn singleton(r: BaseRelation) -> RelationSet {
        RelationSet(1 << r.index())
    }

    pub fn contains(self, r: BaseRelation) -> bool {
        self.0 & (1 << r.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_full(self) -> bool {
        self.0 == Self::MASK
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: RelationSet) -> RelationSet {
        RelationSet(self.0 | other.0)
    }

    pub fn intersection(self, other: RelationSet) -> RelationSet {
        RelationSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: RelationSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = BaseRelation> {
        BaseRelation::ALL.into_iter().filter(move |r| self.contains(*r))
    }

    pub fn converse(self) -> RelationSet {
        self.iter().map(BaseRelation::converse).collect()
    }

    /// Relational composition: every relation `a R c` possible when
    /// `a R1 b` and `b R2 c` for some `R1` in `self`, `R2` in `other`.
    pub fn compose(self, other: RelationSet) -> RelationSet {
        if self.is_empty() || other.is_empty() {
            return RelationSet::EMPTY;
        }
        let mut bits = 0u16;
        for r1 in self.iter() {
            let row = &COMPOSITION[r1.index()];
            for r2 in other.iter() {
                bits |= row[r2.index()];
                if bits == Self::MASK {
                    return RelationSet::FULL;
                }
            }
        }
        RelationSet(bits)
    }
}

impl From<BaseRelation> for RelationSet {
    fn from(r: BaseRelation) -> Self {
        RelationSet::singleton(r)
    }
}

impl FromIterator<BaseRelation> for RelationSet {
    fn from_iter<I: IntoIterator<Item = BaseRelation>>(iter: I) -> Self {
        RelationSet(iter.into_iter().fold(0, |acc, r| acc | (1 << r.index())))
    }
}

impl<const N: usize> From<[BaseRelation; N]> for RelationSet {
    fn from(rs: [BaseRelation; N]) -> Self {
        rs.into_iter().collect()
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        for (k, r) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(r.symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for RelationSet {
    type Err = UnknownRelation;

    /// Parses a comma-separated list of relation symbols or names; `*`
    /// denotes the full set.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.trim() == "*" {
            return Ok(RelationSet::FULL);
        }
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(BaseRelation::from_str)
            .collect()
    }
}

impl Serialize for RelationSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(BaseRelation::symbol))
    }
}

impl<'de> Deserialize<'de> for RelationSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(deserializer)?;
        names
            .iter()
            .map(|n| n.parse::<BaseRelation>())
            .collect::<Result<RelationSet, _>>()
            .map_err(serde::de::Error::custom)
    }
}
