use std::collections::{BTreeMap, BTreeSet};

use crate::ontology::Ontology;

use super::{Description, Goal, Slot};

/// A state holding among participants, e.g. `Contact(water, bowl)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateAssertion {
    pub state_type: String,
    pub participants: Vec<String>,
}

/// A setting that includes events and may satisfy a description.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Situation {
    pub id: String,
    pub included_events: BTreeSet<String>,
    pub satisfies: Option<String>,
    /// Set when this situation is the execution of a plan.
    pub plan_execution: bool,
    /// States that hold once execution has finished.
    pub terminal_states: Vec<StateAssertion>,
    pub role_grounding: BTreeMap<Slot, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalStatus {
    Achieved,
    /// State types of the unmet desired states.
    NotAchieved(Vec<String>),
}

/// A goal is achieved iff every desired state has a terminal state of the
/// same type (or a subtype) whose participants are the entities grounding
/// the desired state's slots, position by position.
pub fn check_goal(goal: &Goal, situation: &Situation, store: &Ontology) -> GoalStatus {
    let missing: Vec<String> = goal
        .desired
        .iter()
        .filter(|want| {
            let grounded: Option<Vec<&String>> = want.roles.iter().map(|s| situation.role_grounding.get(s)).collect();
            let Some(grounded) = grounded else { return true };
            !situation.terminal_states.iter().any(|have| {
                store.is_subsumed_by(&have.state_type, &want.state_type).unwrap_or(false)
                    && have.participants.len() == grounded.len()
                    && have.participants.iter().zip(&grounded).all(|(p, g)| p == *g)
            })
        })
        .map(|want| want.state_type.clone())
        .collect();
    if missing.is_empty() {
        GoalStatus::Achieved
    } else {
        GoalStatus::NotAchieved(missing)
    }
}

/// A broken edge of the situation / description / event type / event square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrokenEdge {
    pub edge: &'static str,
    pub from: String,
    pub to: String,
}

/// Walks the stored situations and reports every edge that fails to close
/// the square: a situation satisfies a known description, a plan execution
/// satisfies a plan, event types defined by a satisfied description classify
/// only events, and each such event has a situation as its setting.
pub fn interpretation_square_violations(
    situations: &[Situation],
    descriptions: &[Description],
    store: &Ontology,
) -> Vec<BrokenEdge> {
    let mut broken = Vec::new();
    let settled: BTreeSet<&String> = situations.iter().flat_map(|s| &s.included_events).collect();

    for sit in situations {
        for ev in &sit.included_events {
            if !store.entity(ev).is_ok_and(|e| e.kind.is_event()) {
                broken.push(BrokenEdge { edge: "includesEvent", from: sit.id.clone(), to: ev.clone() });
            }
        }
        let Some(did) = &sit.satisfies else {
            if sit.plan_execution {
                broken.push(BrokenEdge { edge: "satisfies", from: sit.id.clone(), to: String::new() });
            }
            continue;
        };
        let Some(descr) = descriptions.iter().find(|d| d.id() == did) else {
            broken.push(BrokenEdge { edge: "satisfies", from: sit.id.clone(), to: did.clone() });
            continue;
        };
        if sit.plan_execution && !matches!(descr, Description::Plan(_)) {
            broken.push(BrokenEdge { edge: "satisfies", from: sit.id.clone(), to: did.clone() });
        }
        for et in descr.defined_event_types() {
            for cl in store.classifications().iter().filter(|c| c.concept == et) {
                match store.entity(&cl.entity) {
                    Ok(e) if e.kind.is_event() => {
                        if !settled.contains(&e.id) {
                            broken.push(BrokenEdge { edge: "hasSetting", from: e.id.clone(), to: String::new() });
                        }
                    }
                    _ => broken.push(BrokenEdge { edge: "classifies", from: et.to_string(), to: cl.entity.clone() }),
                }
            }
        }
    }
    broken
}
