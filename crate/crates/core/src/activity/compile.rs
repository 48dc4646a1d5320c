use crate::interval::{BaseRelation, Consistency, ConstraintNetwork, RelationSet};

use super::{Description, ModelError};

/// Label from a phase to the event its description defines: the phase lies
/// within the whole, possibly sharing endpoints.
pub fn phase_relation() -> RelationSet {
    RelationSet::from([BaseRelation::Starts, BaseRelation::During, BaseRelation::Finishes, BaseRelation::Equals])
}

/// Label from the earlier to the later task of a conditional succedence.
pub fn succedence_relation() -> RelationSet {
    RelationSet::from([BaseRelation::Before, BaseRelation::Meets])
}

/// Builds and propagates the temporal network of a description.
///
/// There is one variable per phase plus one for the defined event, all named
/// by their event-type ids. Configurations yield a single variable for the
/// described state.
pub fn compile_constraints(description: &Description) -> Result<ConstraintNetwork, ModelError> {
    let mut net = ConstraintNetwork::new();
    let Some(structure) = description.structure() else {
        if let Description::Configuration(c) = description {
            net.add_variable(c.describes.clone());
        }
        net.propagate();
        return Ok(net);
    };

    let whole = net.add_variable(structure.defines.id.clone());
    for phase in &structure.phases {
        let v = net.add_variable(phase.id.clone());
        net.constrain(v, whole, phase_relation());
    }

    let owner = description.id();
    let var = |net: &ConstraintNetwork, id: &str| {
        net.variable(id).ok_or_else(|| ModelError::UnknownPhase { owner: owner.to_string(), phase: id.to_string() })
    };
    for c in &structure.constraints {
        let (l, r) = (var(&net, &c.left)?, var(&net, &c.right)?);
        net.constrain(l, r, c.relation);
    }
    for s in &structure.succedences {
        let (l, r) = (var(&net, &s.earlier)?, var(&net, &s.later)?);
        net.constrain(l, r, succedence_relation());
    }

    match net.propagate() {
        Consistency::Consistent => Ok(net),
        Consistency::Inconsistent { left, right } => Err(ModelError::TemporallyInconsistent {
            left: net.name(left).to_string(),
            right: net.name(right).to_string(),
        }),
    }
}
