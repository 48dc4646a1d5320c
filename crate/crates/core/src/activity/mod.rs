//! Plans, configurations and process flows, and the situations they describe.
//!
//! A [`Plan`] describes actions, a [`Configuration`] describes states, and a
//! [`ProcessFlow`] describes processes. Plans and process flows share a phase
//! structure that compiles into an interval constraint network.

mod compile;
mod situation;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::RelationSet;
use crate::ontology::{ConceptKind, Restriction};

pub use compile::{compile_constraints, phase_relation, succedence_relation};
pub use situation::{check_goal, interpretation_square_violations, BrokenEdge, GoalStatus, Situation, StateAssertion};
pub use validate::{validate_description, ValidationIssue};

/// A task, process type or state type used inside a description, together
/// with the roles and parameters it uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EventTypeRef {
    pub id: String,
    pub concept: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub uses_roles: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub uses_parameters: Vec<String>,
}

impl EventTypeRef {
    pub fn new(id: impl Into<String>, concept: impl Into<String>) -> EventTypeRef {
        EventTypeRef { id: id.into(), concept: concept.into(), uses_roles: Vec::new(), uses_parameters: Vec::new() }
    }

    pub fn with_roles<I: IntoIterator<Item = S>, S: Into<String>>(mut self, roles: I) -> EventTypeRef {
        self.uses_roles = roles.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_parameters<I: IntoIterator<Item = S>, S: Into<String>>(mut self, params: I) -> EventTypeRef {
        self.uses_parameters = params.into_iter().map(Into::into).collect();
        self
    }

    fn uses(&self, role: &str) -> bool {
        self.uses_roles.iter().chain(&self.uses_parameters).any(|r| r == role)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseConstraint {
    pub left: String,
    pub relation: RelationSet,
    pub right: String,
}

impl PhaseConstraint {
    pub fn new(left: impl Into<String>, relation: impl Into<RelationSet>, right: impl Into<String>) -> Self {
        PhaseConstraint { left: left.into(), relation: relation.into(), right: right.into() }
    }
}

/// A role or parameter as used by one phase.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub phase: String,
    pub role: String,
}

impl Slot {
    pub fn new(phase: impl Into<String>, role: impl Into<String>) -> Slot {
        Slot { phase: phase.into(), role: role.into() }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.phase, self.role)
    }
}

/// Identity constraint: every slot is grounded by the same entity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Binding {
    pub id: String,
    pub slots: Vec<Slot>,
}

/// The earlier task enables the later one; temporally it precedes or meets it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalSuccedence {
    pub id: String,
    pub earlier: String,
    pub later: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<Restriction>,
}

/// A state type that must hold between the entities grounding `roles`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DesiredState {
    pub state_type: String,
    pub roles: Vec<Slot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Goal {
    pub id: String,
    #[serde(default)]
    pub desired: Vec<DesiredState>,
}

/// Phases of a plan or process flow and the constraints between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseStructure {
    pub defines: EventTypeRef,
    #[serde(default)]
    pub phases: Vec<EventTypeRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<PhaseConstraint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bindings: Vec<Binding>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub succedences: Vec<ConditionalSuccedence>,
}

impl PhaseStructure {
    pub fn new(defines: EventTypeRef) -> PhaseStructure {
        PhaseStructure {
            defines,
            phases: Vec::new(),
            constraints: Vec::new(),
            bindings: Vec::new(),
            succedences: Vec::new(),
        }
    }

    /// The defined event type followed by every phase.
    pub fn event_types(&self) -> impl Iterator<Item = &EventTypeRef> {
        std::iter::once(&self.defines).chain(&self.phases)
    }

    pub fn event_type(&self, id: &str) -> Option<&EventTypeRef> {
        self.event_types().find(|e| e.id == id)
    }

    pub fn phase(&self, id: &str) -> Option<&EventTypeRef> {
        self.phases.iter().find(|p| p.id == id)
    }

    pub fn resolves(&self, slot: &Slot) -> bool {
        self.event_type(&slot.phase).is_some_and(|e| e.uses(&slot.role))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub id: String,
    pub concept: String,
    #[serde(flatten)]
    pub structure: PhaseStructure,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<Goal>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessFlow {
    pub id: String,
    pub concept: String,
    #[serde(flatten)]
    pub structure: PhaseStructure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SpatialRelation {
    Contact,
    Support,
    Containment,
}

/// One constraint of a configuration, over the entities grounding its roles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ConfigurationConstraint {
    Region { role: String, restriction: Restriction },
    Relation { relation: SpatialRelation, left: String, right: String },
}

/// An observed spatial relation between two entities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpatialFact {
    pub relation: SpatialRelation,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub id: String,
    pub concept: String,
    /// The state type this configuration describes.
    pub describes: String,
    #[serde(default)]
    pub constraints: Vec<ConfigurationConstraint>,
}

impl Configuration {
    fn roles(&self) -> impl Iterator<Item = &str> {
        self.constraints.iter().flat_map(|c| match c {
            ConfigurationConstraint::Region { role, .. } => vec![role.as_str()],
            ConfigurationConstraint::Relation { left, right, .. } => vec![left.as_str(), right.as_str()],
        })
    }

    /// True iff every constraint holds under `grounding` (role -> entity)
    /// given the observed spatial facts.
    pub fn satisfied_by(
        &self,
        grounding: &BTreeMap<String, String>,
        facts: &[SpatialFact],
        store: &crate::ontology::Ontology,
    ) -> bool {
        self.constraints.iter().all(|c| match c {
            ConfigurationConstraint::Region { role, restriction } => grounding
                .get(role)
                .is_some_and(|e| store.satisfies_restriction(e, restriction).unwrap_or(false)),
            ConfigurationConstraint::Relation { relation, left, right } => {
                match (grounding.get(left), grounding.get(right)) {
                    (Some(l), Some(r)) => facts.iter().any(|f| f.relation == *relation && &f.left == l && &f.right == r),
                    _ => false,
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Description {
    Plan(Plan),
    Configuration(Configuration),
    ProcessFlow(ProcessFlow),
}

impl Description {
    pub fn id(&self) -> &str {
        match self {
            Description::Plan(p) => &p.id,
            Description::Configuration(c) => &c.id,
            Description::ProcessFlow(f) => &f.id,
        }
    }

    pub fn concept(&self) -> &str {
        match self {
            Description::Plan(p) => &p.concept,
            Description::Configuration(c) => &c.concept,
            Description::ProcessFlow(f) => &f.concept,
        }
    }

    /// Kind the description concept must have.
    pub fn descr_kind(&self) -> ConceptKind {
        match self {
            Description::Plan(_) => ConceptKind::PlanDescr,
            Description::Configuration(_) => ConceptKind::ConfigurationDescr,
            Description::ProcessFlow(_) => ConceptKind::ProcessFlowDescr,
        }
    }

    pub fn structure(&self) -> Option<&PhaseStructure> {
        match self {
            Description::Plan(p) => Some(&p.structure),
            Description::ProcessFlow(f) => Some(&f.structure),
            Description::Configuration(_) => None,
        }
    }

    pub fn bindings(&self) -> &[Binding] {
        self.structure().map(|s| s.bindings.as_slice()).unwrap_or(&[])
    }

    /// Concept ids of every event type this description defines.
    pub fn defined_event_types(&self) -> Vec<&str> {
        match self {
            Description::Configuration(c) => vec![c.describes.as_str()],
            other => other.structure().unwrap().event_types().map(|e| e.concept.as_str()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("grounding lacks slot {0}")]
    MissingSlot(Slot),
    #[error("`{owner}` references undeclared phase `{phase}`")]
    UnknownPhase { owner: String, phase: String },
    #[error("phases `{left}` and `{right}` cannot be temporally related")]
    TemporallyInconsistent { left: String, right: String },
}

/// Checks every binding of `description` against a slot grounding: all
/// slots of a binding must map to the same entity.
pub fn check_bindings(description: &Description, grounding: &BTreeMap<Slot, String>) -> Result<bool, ModelError> {
    for binding in description.bindings() {
        let mut first: Option<&String> = None;
        for slot in &binding.slots {
            let entity = grounding.get(slot).ok_or_else(|| ModelError::MissingSlot(slot.clone()))?;
            match first {
                None => first = Some(entity),
                Some(f) if f != entity => return Ok(false),
                Some(_) => {}
            }
        }
    }
    Ok(true)
}
