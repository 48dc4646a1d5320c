//! Allen's interval algebra: base relations, relation sets with composition,
//! qualitative extraction from timestamps, and path-consistency propagation.

mod endpoints;
mod network;
mod relation;

pub use endpoints::{relation_from_endpoints, ConcreteInterval, IntervalError, DEFAULT_EPS};
pub use network::{Consistency, ConstraintNetwork, NetworkError, VarId};
pub use relation::{BaseRelation, RelationSet, UnknownRelation};
