use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::activity::{compile_constraints, Description, EventTypeRef, ModelError, PhaseStructure, Slot};
use crate::interval::{relation_from_endpoints, BaseRelation, RelationSet};
use crate::ontology::Ontology;

use super::{Episode, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("dangling reference to `{0}`")]
    DanglingReference(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Ordering key of an interpretation: higher coverage first, then more
/// phases, then earlier first grounded token, then plan id.
#[derive(Debug, Clone, PartialEq)]
pub struct RankKey {
    pub coverage: f64,
    pub phases: usize,
    pub earliest_start: f64,
    pub plan: String,
}

impl RankKey {
    fn cmp(&self, other: &RankKey) -> Ordering {
        other
            .coverage
            .total_cmp(&self.coverage)
            .then(other.phases.cmp(&self.phases))
            .then(self.earliest_start.total_cmp(&other.earliest_start))
            .then_with(|| self.plan.cmp(&other.plan))
    }
}

/// One way a plan explains part of an episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    pub plan: String,
    /// Phase id -> token id; injective.
    pub phase_grounding: BTreeMap<String, String>,
    /// Role slot -> entity id, from token participants and bindings.
    pub role_grounding: BTreeMap<Slot, String>,
    /// Fraction of episode tokens grounded by some phase.
    pub coverage: f64,
    pub score: RankKey,
}

/// Sorts interpretations by their rank key. Ties on the key fall back to the
/// phase grounding so the order never depends on input order.
pub fn rank(mut interps: Vec<Interpretation>) -> Vec<Interpretation> {
    interps.sort_by(|a, b| a.score.cmp(&b.score).then_with(|| a.phase_grounding.cmp(&b.phase_grounding)));
    interps
}

struct CompiledPlan<'a> {
    id: &'a str,
    structure: &'a PhaseStructure,
    /// `labels[i][j]`: propagated relation from phase `i` to phase `j`.
    labels: Vec<Vec<RelationSet>>,
}

/// Parser over a fixed plan library and frozen store.
///
/// Plans and process flows take part; configurations do not, as they
/// describe states rather than event sequences. Plans without phases never
/// match.
pub struct ActivityParser<'a> {
    plans: Vec<CompiledPlan<'a>>,
    store: &'a Ontology,
    eps: f64,
}

fn phase_labels(description: &Description, structure: &PhaseStructure) -> Result<Vec<Vec<RelationSet>>, ModelError> {
    let net = compile_constraints(description)?;
    let vars: Vec<_> = structure.phases.iter().map(|p| net.variable(&p.id).expect("phase variable")).collect();
    Ok(vars
        .iter()
        .map(|&i| vars.iter().map(|&j| net.query(i, j).expect("propagated network")).collect())
        .collect())
}

/// Slots grounded directly by a token: the k-th role of the phase is played
/// by the k-th participant.
fn positional_slots<'t>(phase: &'t EventTypeRef, token: &'t Token) -> impl Iterator<Item = (Slot, &'t String)> + 't {
    phase.uses_roles.iter().zip(&token.participants).map(|(role, who)| (Slot::new(phase.id.clone(), role.clone()), who))
}

fn accepted(store: &Ontology, role: &str, entity: &str) -> bool {
    store.check_classification(role, entity).is_ok_and(|v| v.is_accepted())
}

impl<'a> ActivityParser<'a> {
    pub fn new(library: &'a [Description], store: &'a Ontology, eps: f64) -> Result<ActivityParser<'a>, ModelError> {
        let mut plans = Vec::new();
        for d in library {
            let Some(structure) = d.structure() else { continue };
            plans.push(CompiledPlan { id: d.id(), structure, labels: phase_labels(d, structure)? });
        }
        Ok(ActivityParser { plans, store, eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Every interpretation of every plan in the library, ranked.
    pub fn parse(&self, episode: &Episode) -> Vec<Interpretation> {
        let tokens = &episode.tokens;
        let relations: Vec<Vec<Option<BaseRelation>>> = tokens
            .iter()
            .map(|a| tokens.iter().map(|b| relation_from_endpoints(&a.interval, &b.interval, self.eps).ok()).collect())
            .collect();
        let mut out = Vec::new();
        for plan in &self.plans {
            if plan.structure.phases.is_empty() {
                continue;
            }
            let mut search = Search::new(self.store, plan, tokens, &relations);
            search.run(0, &mut out);
        }
        rank(out)
    }

    /// Parses independent episodes on separate threads.
    pub fn parse_all(&self, episodes: &[Episode]) -> Vec<Vec<Interpretation>> {
        std::thread::scope(|scope| {
            let handles: Vec<_> = episodes.iter().map(|ep| scope.spawn(move || self.parse(ep))).collect();
            handles.into_iter().map(|h| h.join().expect("parser thread panicked")).collect()
        })
    }
}

struct Search<'s> {
    store: &'s Ontology,
    plan: &'s CompiledPlan<'s>,
    tokens: &'s [Token],
    relations: &'s [Vec<Option<BaseRelation>>],
    /// `candidates[p]`: tokens passing the type and role filters for phase `p`.
    candidates: Vec<Vec<usize>>,
    assigned: Vec<usize>,
    used: Vec<bool>,
}

impl<'s> Search<'s> {
    fn new(
        store: &'s Ontology,
        plan: &'s CompiledPlan<'s>,
        tokens: &'s [Token],
        relations: &'s [Vec<Option<BaseRelation>>],
    ) -> Search<'s> {
        let candidates = plan
            .structure
            .phases
            .iter()
            .map(|phase| {
                (0..tokens.len())
                    .filter(|&t| store.tag_classified_by(&tokens[t].type_tag, &phase.concept))
                    .filter(|&t| positional_slots(phase, &tokens[t]).all(|(slot, who)| accepted(store, &slot.role, who)))
                    .collect()
            })
            .collect();
        Search { store, plan, tokens, relations, candidates, assigned: Vec::new(), used: vec![false; tokens.len()] }
    }

    fn temporally_fits(&self, phase: usize, token: usize) -> bool {
        self.assigned.iter().enumerate().all(|(prev, &t)| {
            let label = self.plan.labels[prev][phase];
            label.is_full() || self.relations[t][token].is_some_and(|r| label.contains(r))
        })
    }

    fn run(&mut self, phase: usize, out: &mut Vec<Interpretation>) {
        if phase == self.plan.structure.phases.len() {
            if let Some(i) = self.finish() {
                out.push(i);
            }
            return;
        }
        for k in 0..self.candidates[phase].len() {
            let t = self.candidates[phase][k];
            if self.used[t] || !self.temporally_fits(phase, t) {
                continue;
            }
            self.used[t] = true;
            self.assigned.push(t);
            self.run(phase + 1, out);
            self.assigned.pop();
            self.used[t] = false;
        }
    }

    fn finish(&self) -> Option<Interpretation> {
        let structure = self.plan.structure;
        let mut roles: BTreeMap<Slot, String> = BTreeMap::new();
        for (phase, &t) in structure.phases.iter().zip(&self.assigned) {
            for (slot, who) in positional_slots(phase, &self.tokens[t]) {
                roles.insert(slot, who.clone());
            }
        }

        // Bindings propagate groundings to unobserved slots until fixpoint.
        let mut filled: BTreeSet<Slot> = BTreeSet::new();
        loop {
            let mut changed = false;
            for b in &structure.bindings {
                let known: BTreeSet<&String> = b.slots.iter().filter_map(|s| roles.get(s)).collect();
                if known.len() > 1 {
                    return None;
                }
                let Some(&who) = known.iter().next() else { continue };
                let who = who.clone();
                for s in &b.slots {
                    if !roles.contains_key(s) {
                        roles.insert(s.clone(), who.clone());
                        filled.insert(s.clone());
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if !filled.iter().all(|s| accepted(self.store, &s.role, &roles[s])) {
            return None;
        }

        let phase_grounding = structure
            .phases
            .iter()
            .zip(&self.assigned)
            .map(|(p, &t)| (p.id.clone(), self.tokens[t].id.clone()))
            .collect();
        let coverage = self.assigned.len() as f64 / self.tokens.len() as f64;
        let earliest_start =
            self.assigned.iter().map(|&t| self.tokens[t].interval.start).fold(f64::INFINITY, f64::min);
        Some(Interpretation {
            plan: self.plan.id.to_string(),
            phase_grounding,
            role_grounding: roles,
            coverage,
            score: RankKey { coverage, phases: self.assigned.len(), earliest_start, plan: self.plan.id.to_string() },
        })
    }
}

/// Re-checks an interpretation from scratch: phase types, pairwise temporal
/// labels, role groundings against token participants and restrictions,
/// bindings, and coverage.
pub fn verify_interpretation(
    interp: &Interpretation,
    episode: &Episode,
    library: &[Description],
    store: &Ontology,
    eps: f64,
) -> Result<bool, ParseError> {
    let dangling = |id: &str| ParseError::DanglingReference(id.to_string());
    let description = library.iter().find(|d| d.id() == interp.plan).ok_or_else(|| dangling(&interp.plan))?;
    let structure = description.structure().ok_or_else(|| dangling(&interp.plan))?;

    let mut grounded: Vec<(&EventTypeRef, &Token)> = Vec::new();
    for (phase_id, token_id) in &interp.phase_grounding {
        let phase = structure.phase(phase_id).ok_or_else(|| dangling(phase_id))?;
        let token = episode.token(token_id).ok_or_else(|| dangling(token_id))?;
        grounded.push((phase, token));
    }
    if grounded.len() != structure.phases.len() || structure.phases.is_empty() {
        return Ok(false);
    }
    let distinct: BTreeSet<&String> = interp.phase_grounding.values().collect();
    if distinct.len() != grounded.len() {
        return Ok(false);
    }

    // (a) types
    if !grounded.iter().all(|(p, t)| store.tag_classified_by(&t.type_tag, &p.concept)) {
        return Ok(false);
    }

    // (b) temporal labels
    let net = compile_constraints(description)?;
    for (pa, ta) in &grounded {
        for (pb, tb) in &grounded {
            if pa.id == pb.id {
                continue;
            }
            let label = net.query_by_name(&pa.id, &pb.id).map_err(|_| dangling(&pa.id))?;
            if label.is_full() {
                continue;
            }
            match relation_from_endpoints(&ta.interval, &tb.interval, eps) {
                Ok(r) if label.contains(r) => {}
                _ => return Ok(false),
            }
        }
    }

    // Role groundings agree with participants; anything else must come
    // from a binding.
    let mut observed = BTreeSet::new();
    for (p, t) in &grounded {
        for (role, who) in p.uses_roles.iter().zip(&t.participants) {
            let slot = Slot::new(p.id.clone(), role.clone());
            if interp.role_grounding.get(&slot) != Some(who) {
                return Ok(false);
            }
            observed.insert(slot);
        }
    }
    for slot in interp.role_grounding.keys() {
        let bound = structure.bindings.iter().any(|b| b.slots.contains(slot));
        if !structure.resolves(slot) || !(observed.contains(slot) || bound) {
            return Ok(false);
        }
    }

    // (c) bindings
    for b in &structure.bindings {
        let values: Vec<Option<&String>> = b.slots.iter().map(|s| interp.role_grounding.get(s)).collect();
        let known: BTreeSet<&String> = values.iter().flatten().copied().collect();
        if known.len() > 1 || (known.len() == 1 && values.iter().any(Option::is_none)) {
            return Ok(false);
        }
    }

    // (d) restrictions
    for (slot, entity) in &interp.role_grounding {
        if !accepted(store, &slot.role, entity) {
            return Ok(false);
        }
    }

    let coverage = grounded.len() as f64 / episode.tokens.len() as f64;
    Ok((coverage - interp.coverage).abs() < 1e-12)
}
