use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use super::{BaseRelation, RelationSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("unknown interval variable `{0}`")]
    UnknownVariable(String),
    #[error("network was modified after the last propagation")]
    StaleNetwork,
    #[error("network is inconsistent between `{0}` and `{1}`")]
    Inconsistent(String, String),
}

/// Outcome of path-consistency propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    /// The first pair whose label became empty.
    Inconsistent { left: VarId, right: VarId },
}

impl Consistency {
    pub fn is_consistent(self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Dirty,
    Consistent,
    Inconsistent(VarId, VarId),
}

/// Qualitative constraint network over interval variables.
///
/// Labels are kept converse-closed: `label(j, i)` is always the converse of
/// `label(i, j)`, and `label(i, i)` is `{eq}`.
#[derive(Debug, Clone)]
pub struct ConstraintNetwork {
    names: Vec<String>,
    index: BTreeMap<String, VarId>,
    labels: Vec<RelationSet>,
    state: State,
}

impl Default for ConstraintNetwork {
    fn default() -> Self {
        Self::new()
    }
}

impl PartialEq for ConstraintNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.labels == other.labels
    }
}

impl ConstraintNetwork {
    pub fn new() -> ConstraintNetwork {
        ConstraintNetwork { names: Vec::new(), index: BTreeMap::new(), labels: Vec::new(), state: State::Consistent }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, var: VarId) -> &str {
        &self.names[var.0]
    }

    pub fn variable(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    /// Adds a variable, or returns the existing one with this name.
    pub fn add_variable(&mut self, name: impl Into<String>) -> VarId {
        let name = name.into();
        if let Some(v) = self.index.get(&name) {
            return *v;
        }
        let n = self.names.len();
        let mut labels = vec![RelationSet::FULL; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                labels[i * (n + 1) + j] = self.labels[i * n + j];
            }
        }
        labels[n * (n + 1) + n] = RelationSet::singleton(BaseRelation::Equals);
        self.labels = labels;
        let id = VarId(n);
        self.names.push(name.clone());
        self.index.insert(name, id);
        self.state = State::Dirty;
        id
    }

    fn at(&self, i: VarId, j: VarId) -> RelationSet {
        self.labels[i.0 * self.names.len() + j.0]
    }

    fn set(&mut self, i: VarId, j: VarId, rel: RelationSet) {
        let n = self.names.len();
        self.labels[i.0 * n + j.0] = rel;
        self.labels[j.0 * n + i.0] = rel.converse();
    }

    /// Raw current label, whether or not the network has been propagated.
    pub fn label(&self, i: VarId, j: VarId) -> RelationSet {
        self.at(i, j)
    }

    /// Intersects the label of `(i, j)` with `rel` (and `(j, i)` with its
    /// converse).
    pub fn constrain(&mut self, i: VarId, j: VarId, rel: RelationSet) {
        let next = self.at(i, j).intersection(rel);
        if i == j {
            let n = self.names.len();
            self.labels[i.0 * n + i.0] = next;
        } else {
            self.set(i, j, next);
        }
        self.state = State::Dirty;
    }

    /// Enforces path consistency with a work queue of revised pairs.
    ///
    /// After a `Consistent` result, `label(i, j) ⊆ label(i, k) ∘ label(k, j)`
    /// holds for every triple.
    pub fn propagate(&mut self) -> Consistency {
        let n = self.names.len();
        for i in 0..n {
            for j in 0..n {
                if self.labels[i * n + j].is_empty() {
                    return self.fail(VarId(i.min(j)), VarId(i.max(j)));
                }
            }
        }

        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        let mut queued = vec![false; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                queue.push_back((i, j));
                queued[i * n + j] = true;
            }
        }

        while let Some((i, j)) = queue.pop_front() {
            queued[i * n + j] = false;
            let (vi, vj) = (VarId(i), VarId(j));
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let vk = VarId(k);
                // i -> k through j
                let ik = self.at(vi, vk);
                let refined = ik.intersection(self.at(vi, vj).compose(self.at(vj, vk)));
                if refined != ik {
                    if refined.is_empty() {
                        return self.fail(VarId(i.min(k)), VarId(i.max(k)));
                    }
                    self.set(vi, vk, refined);
                    let key = (i.min(k), i.max(k));
                    if !queued[key.0 * n + key.1] {
                        queued[key.0 * n + key.1] = true;
                        queue.push_back(key);
                    }
                }
                // k -> j through i
                let kj = self.at(vk, vj);
                let refined = kj.intersection(self.at(vk, vi).compose(self.at(vi, vj)));
                if refined != kj {
                    if refined.is_empty() {
                        return self.fail(VarId(k.min(j)), VarId(k.max(j)));
                    }
                    self.set(vk, vj, refined);
                    let key = (k.min(j), k.max(j));
                    if !queued[key.0 * n + key.1] {
                        queued[key.0 * n + key.1] = true;
                        queue.push_back(key);
                    }
                }
            }
        }
        self.state = State::Consistent;
        Consistency::Consistent
    }

    fn fail(&mut self, left: VarId, right: VarId) -> Consistency {
        self.state = State::Inconsistent(left, right);
        Consistency::Inconsistent { left, right }
    }

    pub fn is_propagated(&self) -> bool {
        self.state == State::Consistent
    }

    /// Propagated label between two variables.
    pub fn query(&self, i: VarId, j: VarId) -> Result<RelationSet, NetworkError> {
        if i.0 >= self.len() || j.0 >= self.len() {
            let bad = if i.0 >= self.len() { i } else { j };
            return Err(NetworkError::UnknownVariable(format!("#{}", bad.0)));
        }
        match self.state {
            State::Consistent => Ok(self.at(i, j)),
            State::Dirty => Err(NetworkError::StaleNetwork),
            State::Inconsistent(a, b) => {
                Err(NetworkError::Inconsistent(self.name(a).to_string(), self.name(b).to_string()))
            }
        }
    }

    pub fn query_by_name(&self, a: &str, b: &str) -> Result<RelationSet, NetworkError> {
        let i = self.variable(a).ok_or_else(|| NetworkError::UnknownVariable(a.to_string()))?;
        let j = self.variable(b).ok_or_else(|| NetworkError::UnknownVariable(b.to_string()))?;
        self.query(i, j)
    }
}
