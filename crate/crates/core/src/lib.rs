//! Knowledge representation and activity interpretation toolkit.
//!
//! * [`ontology`]: two-branch concept store with classification checking.
//! * [`interval`]: Allen interval algebra and path-consistency propagation.
//! * [`activity`]: plans, configurations, process flows and their compiled
//!   temporal networks.
//! * [`parser`]: tokenizes episode logs and parses them against a plan library.
//! * [`grounding`]: dispositional object selection, force dynamics and
//!   parameter checks.
//! * [`formats`]: on-disk library and episode documents.
//! * [`cli`]: the batch command-line front end.

pub mod activity;
pub mod cli;
pub mod formats;
pub mod grounding;
pub mod interval;
pub mod ontology;
pub mod parser;
#[cfg(test)]
mod testutil;
