use std::collections::BTreeSet;
use std::fmt;

use crate::ontology::{ConceptKind, Ontology};

use super::{compile_constraints, Description, ModelError, PhaseStructure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    UnknownConcept { owner: String, concept: String },
    WrongKind { owner: String, concept: String, expected: &'static str, found: ConceptKind },
    DuplicatePhase { owner: String, phase: String },
    UnknownPhase { owner: String, phase: String },
    EmptyRelation { left: String, right: String },
    BindingTooSmall { binding: String },
    UnknownSlot { binding: String, slot: String },
    SuccedenceLoop { succedence: String },
    InvalidRestriction { owner: String, reason: String },
    TemporallyInconsistent { left: String, right: String },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::UnknownConcept { owner, concept } => {
                write!(f, "UnknownConcept: {owner} references unknown concept {concept}")
            }
            ValidationIssue::WrongKind { owner, concept, expected, found } => {
                write!(f, "WrongKind: {owner} expects {concept} to be {expected}, found {found}")
            }
            ValidationIssue::DuplicatePhase { owner, phase } => write!(f, "DuplicatePhase: {owner} declares {phase} twice"),
            ValidationIssue::UnknownPhase { owner, phase } => {
                write!(f, "UnknownPhase: {owner} references undeclared phase {phase}")
            }
            ValidationIssue::EmptyRelation { left, right } => write!(f, "EmptyRelation: {left} -> {right}"),
            ValidationIssue::BindingTooSmall { binding } => write!(f, "BindingTooSmall: {binding} needs at least 2 slots"),
            ValidationIssue::UnknownSlot { binding, slot } => write!(f, "UnknownSlot: {binding} binds unresolved slot {slot}"),
            ValidationIssue::SuccedenceLoop { succedence } => {
                write!(f, "SuccedenceLoop: {succedence} links a task to itself")
            }
            ValidationIssue::InvalidRestriction { owner, reason } => {
                write!(f, "InvalidRestriction: {owner}: {reason}")
            }
            ValidationIssue::TemporallyInconsistent { left, right } => {
                write!(f, "TemporallyInconsistent: no consistent ordering for {left} and {right}")
            }
        }
    }
}

struct Checker<'a> {
    store: &'a Ontology,
    owner: &'a str,
    issues: Vec<ValidationIssue>,
}

impl Checker<'_> {
    fn expect(&mut self, concept: &str, expected: &'static str, ok: impl Fn(ConceptKind) -> bool) {
        match self.store.concept(concept) {
            Err(_) => self.issues.push(ValidationIssue::UnknownConcept {
                owner: self.owner.to_string(),
                concept: concept.to_string(),
            }),
            Ok(c) if !ok(c.kind) => self.issues.push(ValidationIssue::WrongKind {
                owner: self.owner.to_string(),
                concept: concept.to_string(),
                expected,
                found: c.kind,
            }),
            Ok(_) => {}
        }
    }

    fn phase_structure(&mut self, s: &PhaseStructure, defines: (&'static str, fn(ConceptKind) -> bool), phases: (&'static str, fn(ConceptKind) -> bool)) {
        self.expect(&s.defines.concept, defines.0, defines.1);
        let mut seen = BTreeSet::new();
        for e in s.event_types() {
            if !seen.insert(e.id.as_str()) {
                self.issues.push(ValidationIssue::DuplicatePhase { owner: self.owner.to_string(), phase: e.id.clone() });
            }
        }
        for p in &s.phases {
            self.expect(&p.concept, phases.0, phases.1);
        }
        for e in s.event_types() {
            for r in &e.uses_roles {
                self.expect(r, "Role", |k| k == ConceptKind::Role);
            }
            for p in &e.uses_parameters {
                self.expect(p, "Parameter", |k| k == ConceptKind::Parameter);
            }
        }

        let phase_ref = |issues: &mut Vec<ValidationIssue>, id: &str| {
            if !seen.contains(id) {
                issues.push(ValidationIssue::UnknownPhase { owner: self.owner.to_string(), phase: id.to_string() });
            }
        };
        for c in &s.constraints {
            phase_ref(&mut self.issues, &c.left);
            phase_ref(&mut self.issues, &c.right);
            if c.relation.is_empty() {
                self.issues.push(ValidationIssue::EmptyRelation { left: c.left.clone(), right: c.right.clone() });
            }
        }
        for sc in &s.succedences {
            phase_ref(&mut self.issues, &sc.earlier);
            phase_ref(&mut self.issues, &sc.later);
            if sc.earlier == sc.later {
                self.issues.push(ValidationIssue::SuccedenceLoop { succedence: sc.id.clone() });
            }
            if let Some(Err(reason)) = sc.condition.as_ref().map(|c| c.validate()) {
                self.issues.push(ValidationIssue::InvalidRestriction { owner: sc.id.clone(), reason });
            }
        }
        for b in &s.bindings {
            if b.slots.len() < 2 {
                self.issues.push(ValidationIssue::BindingTooSmall { binding: b.id.clone() });
            }
            for slot in &b.slots {
                if !s.resolves(slot) {
                    self.issues.push(ValidationIssue::UnknownSlot { binding: b.id.clone(), slot: slot.to_string() });
                }
            }
        }
    }
}

fn is_task(k: ConceptKind) -> bool {
    k == ConceptKind::Task
}

fn is_process(k: ConceptKind) -> bool {
    k == ConceptKind::ProcessType
}

fn is_event_type(k: ConceptKind) -> bool {
    k.is_event_type()
}

fn is_process_or_state(k: ConceptKind) -> bool {
    matches!(k, ConceptKind::ProcessType | ConceptKind::StateType)
}

/// Lists every problem with a description. An empty list means all
/// references resolve with the right kinds and the compiled temporal network
/// is consistent.
pub fn validate_description(description: &Description, store: &Ontology) -> Vec<ValidationIssue> {
    let mut ck = Checker { store, owner: description.id(), issues: Vec::new() };
    let descr_kind = description.descr_kind();
    let expected = match descr_kind {
        ConceptKind::PlanDescr => "PlanDescr",
        ConceptKind::ProcessFlowDescr => "ProcessFlowDescr",
        _ => "ConfigurationDescr",
    };
    ck.expect(description.concept(), expected, |k| k == descr_kind);

    match description {
        Description::Plan(p) => {
            ck.phase_structure(&p.structure, ("Task", is_task), ("event type", is_event_type));
            if let Some(goal) = &p.goal {
                for d in &goal.desired {
                    ck.expect(&d.state_type, "StateType", |k| k == ConceptKind::StateType);
                    for slot in &d.roles {
                        if !p.structure.resolves(slot) {
                            ck.issues.push(ValidationIssue::UnknownSlot { binding: goal.id.clone(), slot: slot.to_string() });
                        }
                    }
                }
            }
        }
        Description::ProcessFlow(f) => {
            ck.phase_structure(&f.structure, ("ProcessType", is_process), ("ProcessType or StateType", is_process_or_state));
        }
        Description::Configuration(c) => {
            ck.expect(&c.describes, "StateType", |k| k == ConceptKind::StateType);
            for role in c.roles() {
                ck.expect(role, "Role", |k| k == ConceptKind::Role);
            }
            for con in &c.constraints {
                if let super::ConfigurationConstraint::Region { restriction, .. } = con {
                    if let Err(reason) = restriction.validate() {
                        ck.issues.push(ValidationIssue::InvalidRestriction { owner: c.id.clone(), reason });
                    }
                }
            }
        }
    }

    let mut issues = ck.issues;
    if issues.is_empty() {
        match compile_constraints(description) {
            Ok(_) => {}
            Err(ModelError::TemporallyInconsistent { left, right }) => {
                issues.push(ValidationIssue::TemporallyInconsistent { left, right })
            }
            Err(ModelError::UnknownPhase { owner, phase }) => issues.push(ValidationIssue::UnknownPhase { owner, phase }),
            Err(ModelError::MissingSlot(_)) => unreachable!("compilation does not look at slots"),
        }
    }
    issues
}
