//! Descriptive-to-ground questions: which scene objects can play a task's
//! roles, what a force-dynamic configuration leads to, and whether a
//! parameter value meets its restriction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::activity::EventTypeRef;
use crate::ontology::{ConceptKind, EntityKind, Ontology, OntologyError, Quantity, Restriction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroundingError {
    #[error("unknown role `{0}`")]
    UnknownRole(String),
    #[error("`{0}` is not a parameter")]
    NotAParameter(String),
    #[error("`{0}` is not an object in the store")]
    NotAnObject(String),
    #[error("units `{found}` do not match restriction units `{expected}`")]
    UnitMismatch { expected: String, found: String },
    #[error("agonist and antagonist must differ, both are `{0}`")]
    SameParticipant(String),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Objects available in an episode. Their dispositions and qualities live in
/// the store the scene was checked against.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Scene {
    objects: BTreeSet<String>,
}

impl Scene {
    pub fn new<I, S>(objects: I, store: &Ontology) -> Result<Scene, GroundingError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let objects: BTreeSet<String> = objects.into_iter().map(Into::into).collect();
        for id in &objects {
            if !store.entity(id).is_ok_and(|e| e.kind == EntityKind::Object) {
                return Err(GroundingError::NotAnObject(id.clone()));
            }
        }
        Ok(Scene { objects })
    }

    pub fn objects(&self) -> &BTreeSet<String> {
        &self.objects
    }

    pub fn contains(&self, id: &str) -> bool {
        self.objects.contains(id)
    }
}

/// Candidate objects for each role the task uses.
///
/// A role restricted by an affordance role (bearer, trigger or background)
/// inherits that role's restriction through subsumption, so the candidates
/// already honor the affordance structure.
pub fn select_objects(
    task: &EventTypeRef,
    scene: &Scene,
    store: &Ontology,
) -> Result<BTreeMap<String, BTreeSet<String>>, GroundingError> {
    let mut out = BTreeMap::new();
    for role in &task.uses_roles {
        if !store.concept(role).is_ok_and(|c| c.kind == ConceptKind::Role) {
            return Err(GroundingError::UnknownRole(role.clone()));
        }
        let mut candidates = BTreeSet::new();
        for obj in scene.objects() {
            if store.check_classification(role, obj)?.is_accepted() {
                candidates.insert(obj.clone());
            }
        }
        out.insert(role.clone(), candidates);
    }
    Ok(out)
}

/// Objects that could take part in an affordance, by role.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AffordanceCandidates {
    /// Objects accepted by the bearer role that also bear a disposition
    /// realizing this affordance.
    pub bearers: BTreeSet<String>,
    pub triggers: BTreeSet<String>,
    pub backgrounds: BTreeSet<String>,
}

pub fn affordance_candidates(
    affordance: &str,
    scene: &Scene,
    store: &Ontology,
) -> Result<AffordanceCandidates, GroundingError> {
    let spec = store
        .affordances()
        .find(|a| a.concept == affordance)
        .ok_or_else(|| OntologyError::UnknownId(affordance.to_string()))?;
    let accepted = |role: &str| -> Result<BTreeSet<String>, GroundingError> {
        let mut set = BTreeSet::new();
        for obj in scene.objects() {
            if store.check_classification(role, obj)?.is_accepted() {
                set.insert(obj.clone());
            }
        }
        Ok(set)
    };
    let realizes = |obj: &String| store.dispositions().any(|d| &d.bearer == obj && d.affordance == affordance);
    Ok(AffordanceCandidates {
        bearers: accepted(&spec.bearer_role)?.into_iter().filter(realizes).collect(),
        triggers: accepted(&spec.trigger_role)?,
        backgrounds: match &spec.background_role {
            Some(r) => accepted(r)?,
            None => BTreeSet::new(),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tendency {
    TowardMotion,
    TowardRest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stronger {
    Agonist,
    Antagonist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForceOutcome {
    Motion,
    Rest,
}

impl fmt::Display for ForceOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForceOutcome::Motion => "Motion",
            ForceOutcome::Rest => "Rest",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unrecognized value `{0}`")]
pub struct UnknownForceTerm(String);

impl FromStr for Tendency {
    type Err = UnknownForceTerm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "motion" | "towardmotion" => Ok(Tendency::TowardMotion),
            "rest" | "towardrest" => Ok(Tendency::TowardRest),
            _ => Err(UnknownForceTerm(s.to_string())),
        }
    }
}

impl FromStr for Stronger {
    type Err = UnknownForceTerm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "agonist" => Ok(Stronger::Agonist),
            "antagonist" => Ok(Stronger::Antagonist),
            _ => Err(UnknownForceTerm(s.to_string())),
        }
    }
}

/// A force-dynamic expression. By convention the manipulated object is the
/// agonist and the opposing force (a hand, gravity, friction) the antagonist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForceExpression {
    agonist: String,
    antagonist: String,
    pub tendency: Tendency,
    pub stronger: Stronger,
}

impl ForceExpression {
    pub fn new(
        agonist: impl Into<String>,
        antagonist: impl Into<String>,
        tendency: Tendency,
        stronger: Stronger,
    ) -> Result<ForceExpression, GroundingError> {
        let (agonist, antagonist) = (agonist.into(), antagonist.into());
        if agonist == antagonist {
            return Err(GroundingError::SameParticipant(agonist));
        }
        Ok(ForceExpression { agonist, antagonist, tendency, stronger })
    }

    pub fn agonist(&self) -> &str {
        &self.agonist
    }

    pub fn antagonist(&self) -> &str {
        &self.antagonist
    }
}

/// The agonist's tendency is realized iff the agonist is the stronger
/// entity; otherwise the antagonist imposes the opposite.
pub fn resolve_forces(tendency: Tendency, stronger: Stronger) -> ForceOutcome {
    let realized = match tendency {
        Tendency::TowardMotion => ForceOutcome::Motion,
        Tendency::TowardRest => ForceOutcome::Rest,
    };
    match (stronger, realized) {
        (Stronger::Agonist, r) => r,
        (Stronger::Antagonist, ForceOutcome::Motion) => ForceOutcome::Rest,
        (Stronger::Antagonist, ForceOutcome::Rest) => ForceOutcome::Motion,
    }
}

pub fn force_outcome(expr: &ForceExpression) -> ForceOutcome {
    resolve_forces(expr.tendency, expr.stronger)
}

/// Knowledge pre-condition on a parameter value. Units must match every
/// region bound of the parameter's restriction exactly.
pub fn check_parameter(parameter: &str, value: &Quantity, store: &Ontology) -> Result<bool, GroundingError> {
    if !store.concept(parameter).is_ok_and(|c| c.kind == ConceptKind::Parameter) {
        return Err(GroundingError::NotAParameter(parameter.to_string()));
    }
    let Some(restriction) = store.effective_restriction(parameter)? else {
        return Ok(true);
    };
    if let Some(expected) = restriction.foreign_units_of(&value.units) {
        return Err(GroundingError::UnitMismatch { expected, found: value.units.clone() });
    }
    Ok(restriction.holds_for_value(value))
}

impl Restriction {
    fn foreign_units_of(&self, units: &str) -> Option<String> {
        let mut out = Vec::new();
        self.foreign_units(units, &mut out);
        out.first().map(|u| u.to_string())
    }

    /// Evaluates the restriction against a bare region value.
    pub fn holds_for_value(&self, value: &Quantity) -> bool {
        match self {
            Restriction::KindIs(k) => *k == EntityKind::Region,
            Restriction::TypeTagIn(tags) => tags.contains("Region"),
            Restriction::HasDisposition(_) => false,
            Restriction::RegionWithin { lo, hi, units } => {
                units == &value.units && *lo <= value.value && value.value <= *hi
            }
            Restriction::And(items) => items.iter().all(|r| r.holds_for_value(value)),
            Restriction::Or(items) => items.iter().any(|r| r.holds_for_value(value)),
        }
    }
}
