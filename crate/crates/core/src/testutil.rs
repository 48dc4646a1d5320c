//! Shared fixtures for unit tests: the pouring setup used across modules.

use crate::activity::{Binding, Description, EventTypeRef, PhaseConstraint, PhaseStructure, Plan, Slot};
use crate::interval::BaseRelation;
use crate::ontology::{Concept, ConceptKind, Disposition, Entity, Ontology, OntologyBuilder, Restriction};

pub fn concept(id: &str, kind: ConceptKind, parents: &[&str], restriction: Option<Restriction>) -> Concept {
    Concept {
        id: id.to_string(),
        name: id.to_string(),
        kind,
        parents: parents.iter().map(|p| p.to_string()).collect(),
        restriction,
    }
}

pub fn pouring_builder() -> OntologyBuilder {
    use ConceptKind::*;
    let containment = || Some(Restriction::disposition("Containment"));
    let mut b = Ontology::builder();
    for c in [
        concept("PhysicalTask", Task, &[], None),
        concept("Pouring", Task, &["PhysicalTask"], None),
        concept("Motion", ProcessType, &[], None),
        concept("Approaching", ProcessType, &["Motion"], None),
        concept("Tilting", ProcessType, &["Motion"], None),
        concept("Contact", StateType, &[], None),
        concept("Patient", Role, &[], None),
        concept("Source", Role, &[], containment()),
        concept("Destination", Role, &[], containment()),
        concept("Speed", Parameter, &[], Some(Restriction::region(0.0, 0.5, "m/s"))),
        concept("PouringPlan", PlanDescr, &[], None),
        concept("ContainmentAffordance", AffordanceDescr, &[], None),
        concept("CuttingAffordance", AffordanceDescr, &[], None),
    ] {
        b.insert_concept(c).unwrap();
    }
    for (id, tag) in [("pot", "Pot"), ("cup", "Cup"), ("knife", "Knife"), ("water", "Water")] {
        b.add_entity(Entity::object(id, tag)).unwrap();
    }
    for (bearer, ty, aff) in [
        ("pot", "Containment", "ContainmentAffordance"),
        ("cup", "Containment", "ContainmentAffordance"),
        ("knife", "Cutting", "CuttingAffordance"),
    ] {
        b.add_disposition(Disposition {
            id: format!("{bearer}_{ty}"),
            bearer: bearer.to_string(),
            disposition_type: ty.to_string(),
            affordance: aff.to_string(),
        })
        .unwrap();
    }
    b
}

pub fn pouring_store() -> Ontology {
    pouring_builder().freeze()
}

pub fn pouring_plan() -> Description {
    let mut s = PhaseStructure::new(
        EventTypeRef::new("Pouring_0", "Pouring").with_roles(["Patient", "Source", "Destination"]),
    );
    s.phases = vec![
        EventTypeRef::new("Approaching_0", "Approaching").with_roles(["Destination"]),
        EventTypeRef::new("Tilting_0", "Tilting").with_roles(["Patient"]),
    ];
    s.constraints = vec![
        PhaseConstraint::new("Pouring_0", BaseRelation::StartedBy, "Approaching_0"),
        PhaseConstraint::new("Approaching_0", BaseRelation::Overlaps, "Tilting_0"),
    ];
    s.bindings = vec![Binding {
        id: "Binding_1".to_string(),
        slots: vec![Slot::new("Pouring_0", "Source"), Slot::new("Tilting_0", "Patient")],
    }];
    Description::Plan(Plan { id: "PouringPlan_0".to_string(), concept: "PouringPlan".to_string(), structure: s, goal: None })
}
