//! Two-branch concept model.
//!
//! The ground branch holds physical entities (objects, actions, processes,
//! states, qualities, regions, situations). The descriptive branch holds
//! concepts (tasks, roles, parameters, descriptions). The only edges between
//! the branches are classifications, where a concept classifies an entity.

mod restriction;
mod store;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use restriction::Restriction;
pub use store::{Ontology, OntologyBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConceptKind {
    Task,
    ProcessType,
    StateType,
    Role,
    Parameter,
    AffordanceDescr,
    DesignDescr,
    PlanDescr,
    ConfigurationDescr,
    ProcessFlowDescr,
}

impl ConceptKind {
    pub fn is_event_type(self) -> bool {
        matches!(self, ConceptKind::Task | ConceptKind::ProcessType | ConceptKind::StateType)
    }

    pub fn is_description(self) -> bool {
        matches!(
            self,
            ConceptKind::AffordanceDescr
                | ConceptKind::DesignDescr
                | ConceptKind::PlanDescr
                | ConceptKind::ConfigurationDescr
                | ConceptKind::ProcessFlowDescr
        )
    }

    /// Parent links must stay within one family. Description kinds form a
    /// single family; every other kind is its own.
    pub fn same_family(self, other: ConceptKind) -> bool {
        self == other || (self.is_description() && other.is_description())
    }

    /// Ground kinds this concept kind may classify.
    pub fn classifiable(self) -> &'static [EntityKind] {
        match self {
            ConceptKind::Task => &[EntityKind::Action],
            ConceptKind::ProcessType => &[EntityKind::Process, EntityKind::Action],
            ConceptKind::StateType => &[EntityKind::State],
            ConceptKind::Role => &[EntityKind::Object],
            ConceptKind::Parameter => &[EntityKind::Region, EntityKind::Quality],
            _ => &[],
        }
    }

    pub fn may_carry_restriction(self) -> bool {
        matches!(self, ConceptKind::Role | ConceptKind::Parameter)
    }
}

impl fmt::Display for ConceptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A node of the descriptive branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Concept {
    pub id: String,
    pub name: String,
    pub kind: ConceptKind,
    #[serde(default)]
    pub parents: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<Restriction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    Object,
    Action,
    Process,
    State,
    Quality,
    Region,
    Situation,
}

impl EntityKind {
    pub fn is_event(self) -> bool {
        matches!(self, EntityKind::Action | EntityKind::Process | EntityKind::State)
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A numeric value with a units tag, e.g. `0.3 m/s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub units: String,
}

impl Quantity {
    pub fn new(value: f64, units: impl Into<String>) -> Quantity {
        Quantity { value, units: units.into() }
    }
}

/// A node of the ground branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Entity {
    pub id: String,
    pub name: String,
    pub kind: EntityKind,
    /// Single ground type label, e.g. `Pot` or `Contact`.
    pub type_tag: String,
    /// Disposition and quality ids; only objects carry these.
    pub qualities: BTreeSet<String>,
    /// Only events carry participants.
    pub participants: BTreeSet<String>,
    /// Value of a region or quality.
    pub value: Option<Quantity>,
}

impl Entity {
    pub fn new(id: impl Into<String>, kind: EntityKind, type_tag: impl Into<String>) -> Entity {
        let id = id.into();
        Entity {
            name: id.clone(),
            id,
            kind,
            type_tag: type_tag.into(),
            qualities: BTreeSet::new(),
            participants: BTreeSet::new(),
            value: None,
        }
    }

    pub fn object(id: impl Into<String>, type_tag: impl Into<String>) -> Entity {
        Entity::new(id, EntityKind::Object, type_tag)
    }

    pub fn region(id: impl Into<String>, value: Quantity) -> Entity {
        let mut e = Entity::new(id, EntityKind::Region, "Region");
        e.value = Some(value);
        e
    }

    pub fn with_participants<I, S>(mut self, participants: I) -> Entity
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.participants = participants.into_iter().map(Into::into).collect();
        self
    }
}

/// Object quality enabling participation in events that realize an affordance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Disposition {
    pub id: String,
    pub bearer: String,
    #[serde(rename = "type")]
    pub disposition_type: String,
    pub affordance: String,
}

/// Roles of an affordance: its bearer, trigger, and optional background.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AffordanceSpec {
    pub concept: String,
    pub bearer_role: String,
    pub trigger_role: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background_role: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub concept: String,
    pub entity: String,
    pub during: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesignAspect {
    Functional,
    Structural,
    Aesthetic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DesignSpec {
    pub concept: String,
    pub aspect: DesignAspect,
    pub quality_restriction: Restriction,
}

/// Result of asking whether a concept may classify an entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(String),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OntologyError {
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("id `{0}` is already in use")]
    DuplicateId(String),
    #[error("parent link {child} -> {parent} would close a cycle")]
    CycleError { child: String, parent: String },
    #[error("`{child}` ({child_kind}) cannot have parent `{parent}` ({parent_kind})")]
    KindMismatch { child: String, child_kind: ConceptKind, parent: String, parent_kind: ConceptKind },
    #[error("classification must link a concept to an entity, got `{concept}` -> `{entity}`")]
    BranchViolation { concept: String, entity: String },
    #[error("invalid restriction on `{id}`: {reason}")]
    InvalidRestriction { id: String, reason: String },
    #[error("invalid entity `{id}`: {reason}")]
    InvalidEntity { id: String, reason: String },
    #[error("invalid record `{id}`: {reason}")]
    InvalidRecord { id: String, reason: String },
    #[error("{0:?} designs are not supported; only functional designs are")]
    UnsupportedAspect(DesignAspect),
    #[error("`{concept}` cannot classify `{entity}`: {reason}")]
    ClassificationRejected { concept: String, entity: String, reason: String },
}
