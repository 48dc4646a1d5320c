//! Independent oracles and random case generators shared by the integration
//! tests and the acceptance runner. Nothing here calls into the code under
//! test for the property being checked.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use soma_kit::activity::{
    Binding, ConditionalSuccedence, Description, EventTypeRef, PhaseConstraint, PhaseStructure, Plan, Slot,
};
use soma_kit::grounding::Scene;
use soma_kit::interval::{BaseRelation, ConcreteInterval, RelationSet};
use soma_kit::ontology::{Concept, ConceptKind, Disposition, Entity, EntityKind, Ontology, Restriction};
use soma_kit::parser::{tokenize, Episode, RawEvent, Token, TokenClass};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

// ---------------------------------------------------------------------------
// Interval relations straight from the definitions.

/// Every base relation whose textbook definition holds for `a` vs `b`.
/// For proper intervals exactly one entry is expected.
pub fn definitions_holding(a: (f64, f64), b: (f64, f64)) -> Vec<BaseRelation> {
    use BaseRelation::*;
    let ((as_, ae), (bs, be)) = (a, b);
    let mut out = Vec::new();
    let mut check = |cond: bool, r| {
        if cond {
            out.push(r)
        }
    };
    check(ae < bs, Before);
    check(be < as_, After);
    check(ae == bs, Meets);
    check(be == as_, MetBy);
    check(as_ < bs && bs < ae && ae < be, Overlaps);
    check(bs < as_ && as_ < be && be < ae, OverlappedBy);
    check(as_ == bs && ae < be, Starts);
    check(as_ == bs && be < ae, StartedBy);
    check(bs < as_ && ae < be, During);
    check(as_ < bs && be < ae, Contains);
    check(ae == be && bs < as_, Finishes);
    check(ae == be && as_ < bs, FinishedBy);
    check(as_ == bs && ae == be, Equals);
    out
}

pub fn classify(a: (f64, f64), b: (f64, f64)) -> BaseRelation {
    let found = definitions_holding(a, b);
    assert_eq!(found.len(), 1, "{a:?} vs {b:?} matched {found:?}");
    found[0]
}

/// All ordered set partitions of `n` labelled points, as a rank per point.
pub fn ordered_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, ranks: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(ranks.clone());
            return;
        }
        // Join an existing block or open a new one; block ids are compacted
        // to an order afterwards by permuting.
        for b in 0..=blocks {
            ranks.push(b);
            go(i + 1, n, ranks, blocks.max(b + 1), out);
            ranks.pop();
        }
    }
    let mut set_partitions = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut set_partitions);
    let mut out = Vec::new();
    for p in set_partitions {
        let k = p.iter().max().map_or(0, |m| m + 1);
        for perm in permutations(k) {
            out.push(p.iter().map(|&b| perm[b]).collect());
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Composition table from every arrangement of three intervals' endpoints.
pub fn composition_oracle() -> BTreeMap<(BaseRelation, BaseRelation), RelationSet> {
    let mut table: BTreeMap<(BaseRelation, BaseRelation), RelationSet> = BTreeMap::new();
    for r in ordered_partitions(6) {
        let f = |i: usize| r[i] as f64;
        let (a, b, c) = ((f(0), f(1)), (f(2), f(3)), (f(4), f(5)));
        if !(a.0 < a.1 && b.0 < b.1 && c.0 < c.1) {
            continue;
        }
        let entry = table.entry((classify(a, b), classify(b, c))).or_insert(RelationSet::EMPTY);
        *entry = entry.union(classify(a, c).into());
    }
    table
}

/// Endpoint signature of a base relation: sign of (a.s-b.s, a.s-b.e, a.e-b.s, a.e-b.e).
pub fn signature(r: BaseRelation) -> [i8; 4] {
    type Pair = ((f64, f64), (f64, f64));
    let canon: BTreeMap<BaseRelation, Pair> = [
        ((0.0, 1.0), (2.0, 3.0)),
        ((2.0, 3.0), (0.0, 1.0)),
        ((0.0, 1.0), (1.0, 2.0)),
        ((1.0, 2.0), (0.0, 1.0)),
        ((0.0, 2.0), (1.0, 3.0)),
        ((1.0, 3.0), (0.0, 2.0)),
        ((0.0, 1.0), (0.0, 2.0)),
        ((0.0, 2.0), (0.0, 1.0)),
        ((1.0, 2.0), (0.0, 3.0)),
        ((0.0, 3.0), (1.0, 2.0)),
        ((1.0, 2.0), (0.0, 2.0)),
        ((0.0, 2.0), (1.0, 2.0)),
        ((0.0, 1.0), (0.0, 1.0)),
    ]
    .into_iter()
    .map(|(a, b)| (classify(a, b), (a, b)))
    .collect();
    let ((as_, ae), (bs, be)) = canon[&r];
    let s = |x: f64, y: f64| (x - y).signum() as i8 * (x != y) as i8;
    [s(as_, bs), s(as_, be), s(ae, bs), s(ae, be)]
}

/// Random convex relation: a conjunction of convex point relations over the
/// four endpoint pairs. Never empty.
pub fn random_convex(rng: &mut impl Rng) -> RelationSet {
    // Allowed signs per point relation: <, <=, =, >=, >, any.
    const OPS: [&[i8]; 6] = [&[-1], &[-1, 0], &[0], &[0, 1], &[1], &[-1, 0, 1]];
    loop {
        let ops: Vec<&[i8]> = (0..4).map(|_| OPS[rng.gen_range(0..OPS.len())]).collect();
        let set: RelationSet =
            BaseRelation::ALL.iter().copied().filter(|&r| (0..4).all(|k| ops[k].contains(&signature(r)[k]))).collect();
        if !set.is_empty() {
            return set;
        }
    }
}

/// A network over `n` variables: `labels[i][j]`, with `labels[j][i]` the
/// converse and the diagonal `eq`.
#[derive(Debug, Clone)]
pub struct RandomNetwork {
    pub n: usize,
    pub labels: Vec<Vec<RelationSet>>,
}

pub fn random_network(rng: &mut impl Rng) -> RandomNetwork {
    let n = rng.gen_range(2..=5);
    let mut labels = vec![vec![RelationSet::FULL; n]; n];
    // Half the networks are labelled around a hidden realization so both
    // outcomes are well represented.
    let hidden: Option<Vec<(f64, f64)>> = rng.gen_bool(0.5).then(|| {
        (0..n)
            .map(|_| {
                let s = rng.gen_range(0..8) as f64;
                (s, s + rng.gen_range(1..5) as f64)
            })
            .collect()
    });
    for i in 0..n {
        labels[i][i] = BaseRelation::Equals.into();
        for j in i + 1..n {
            if rng.gen_bool(0.25) {
                continue;
            }
            let mut l = if rng.gen_bool(0.4) {
                BaseRelation::ALL[rng.gen_range(0..13)].into()
            } else {
                random_convex(rng)
            };
            if let Some(h) = &hidden {
                let truth = classify(h[i], h[j]);
                while !l.contains(truth) {
                    l = random_convex(rng);
                }
            }
            labels[i][j] = l;
            labels[j][i] = l.converse();
        }
    }
    RandomNetwork { n, labels }
}

/// Some assignment of intervals satisfying every label, by backtracking
/// over the distinct positions each new endpoint can take relative to the
/// endpoints already placed.
pub fn realize(net: &RandomNetwork) -> Option<Vec<(f64, f64)>> {
    fn positions(placed: &[(f64, f64)]) -> Vec<f64> {
        let mut pts: Vec<f64> = placed.iter().flat_map(|&(s, e)| [s, e]).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        if pts.is_empty() {
            return vec![0.0];
        }
        let mut out = vec![pts[0] - 1.0];
        for w in pts.windows(2) {
            out.push(w[0]);
            out.push((w[0] + w[1]) / 2.0);
        }
        let last = *pts.last().unwrap();
        out.push(last);
        out.push(last + 1.0);
        out
    }
    fn go(net: &RandomNetwork, placed: &mut Vec<(f64, f64)>) -> bool {
        let k = placed.len();
        if k == net.n {
            return true;
        }
        let starts = positions(placed);
        for &s in &starts {
            // Ends may land on existing points, gaps, or beyond the new start.
            let mut with_start = placed.clone();
            with_start.push((s, s));
            let ends = positions(&with_start);
            for &e in ends.iter().filter(|&&e| e > s) {
                let iv = (s, e);
                if (0..k).all(|j| net.labels[j][k].contains(classify(placed[j], iv))) {
                    placed.push(iv);
                    if go(net, placed) {
                        return true;
                    }
                    placed.pop();
                }
            }
        }
        false
    }
    let mut placed = Vec::new();
    go(net, &mut placed).then_some(placed)
}

// ---------------------------------------------------------------------------
// Ontology oracles.

/// Ancestors by repeated scans over the full concept list.
pub fn ancestors_by_scan(store: &Ontology, id: &str) -> BTreeSet<String> {
    let mut set: BTreeSet<String> = [id.to_string()].into();
    loop {
        let before = set.len();
        for c in store.concepts() {
            if set.contains(&c.id) {
                set.extend(c.parents.iter().cloned());
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Restriction evaluation that finds dispositions by scanning the entity's
/// quality ids.
pub fn holds(store: &Ontology, e: &Entity, r: &Restriction) -> bool {
    match r {
        Restriction::KindIs(k) => e.kind == *k,
        Restriction::TypeTagIn(tags) => tags.iter().any(|t| *t == e.type_tag),
        Restriction::HasDisposition(t) => {
            e.qualities.iter().filter_map(|q| store.disposition(q)).any(|d| d.disposition_type == *t)
        }
        Restriction::RegionWithin { lo, hi, units } => {
            e.value.as_ref().is_some_and(|q| q.units == *units && q.value >= *lo && q.value <= *hi)
        }
        Restriction::And(rs) => rs.iter().all(|r| holds(store, e, r)),
        Restriction::Or(rs) => rs.iter().any(|r| holds(store, e, r)),
    }
}

/// Whether a role may be played by an object: the object must satisfy the
/// restriction of the role and of every role above it.
pub fn role_accepts(store: &Ontology, role: &str, entity: &str) -> bool {
    let Ok(e) = store.entity(entity) else { return false };
    if e.kind != EntityKind::Object {
        return false;
    }
    ancestors_by_scan(store, role)
        .iter()
        .filter_map(|a| store.concept(a).ok().and_then(|c| c.restriction.as_ref()))
        .all(|r| holds(store, e, r))
}

/// Event type matching: some concept labelled `tag` lies below `concept`.
pub fn tag_below(store: &Ontology, tag: &str, concept: &str) -> bool {
    store
        .concepts()
        .filter(|c| c.id == tag || c.name == tag)
        .any(|c| ancestors_by_scan(store, &c.id).contains(concept))
}

// ---------------------------------------------------------------------------
// Parser oracle.

pub type InterpKey = (String, BTreeMap<String, String>, BTreeMap<Slot, String>);

/// Token relation with the same tolerance rules as the tokenizer contract:
/// intervals no longer than `2 eps` relate to nothing; endpoints within
/// `eps` coincide. Timestamps in generated cases sit on a 0.5 grid, far
/// from any tolerance boundary, so exact comparison after rounding is safe.
pub fn token_relation(a: &ConcreteInterval, b: &ConcreteInterval, eps: f64) -> Option<BaseRelation> {
    if a.end - a.start <= 2.0 * eps || b.end - b.start <= 2.0 * eps {
        return None;
    }
    let snap = |x: f64| (x / eps).round() * eps;
    Some(classify((snap(a.start), snap(a.end)), (snap(b.start), snap(b.end))))
}

fn injective_maps(phases: usize, tokens: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, phases: usize, tokens: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == phases {
            out.push(cur.clone());
            return;
        }
        for t in 0..tokens {
            if !cur.contains(&t) {
                cur.push(t);
                go(k + 1, phases, tokens, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, phases, tokens, &mut Vec::new(), &mut out);
    out
}

/// Every interpretation by exhaustive enumeration of phase-to-token maps.
/// `labels` gives the compiled phase-to-phase relation of each plan.
pub fn parse_oracle(
    episode: &Episode,
    plans: &[(&Description, Vec<Vec<RelationSet>>)],
    store: &Ontology,
    eps: f64,
) -> BTreeSet<InterpKey> {
    let mut out = BTreeSet::new();
    for (d, labels) in plans {
        let s = d.structure().unwrap();
        if s.phases.is_empty() {
            continue;
        }
        'map: for m in injective_maps(s.phases.len(), episode.tokens.len()) {
            let tok = |p: usize| &episode.tokens[m[p]];
            for (p, ph) in s.phases.iter().enumerate() {
                if !tag_below(store, &tok(p).type_tag, &ph.concept) {
                    continue 'map;
                }
            }
            for (p, row) in labels.iter().enumerate() {
                for (q, &l) in row.iter().enumerate() {
                    if p != q && !l.is_full() && !token_relation(&tok(p).interval, &tok(q).interval, eps).is_some_and(|r| l.contains(r)) {
                        continue 'map;
                    }
                }
            }
            let mut roles: BTreeMap<Slot, String> = BTreeMap::new();
            for (p, ph) in s.phases.iter().enumerate() {
                for (k, role) in ph.uses_roles.iter().enumerate() {
                    if let Some(who) = tok(p).participants.get(k) {
                        roles.insert(Slot::new(ph.id.clone(), role.clone()), who.clone());
                    }
                }
            }
            // Bindings: all bound slots share one entity; unobserved slots
            // take it over. Repeat until nothing changes.
            loop {
                let before = roles.clone();
                for b in &s.bindings {
                    let vals: BTreeSet<String> = b.slots.iter().filter_map(|x| roles.get(x).cloned()).collect();
                    if vals.len() > 1 {
                        continue 'map;
                    }
                    if let Some(v) = vals.into_iter().next() {
                        for x in &b.slots {
                            roles.insert(x.clone(), v.clone());
                        }
                    }
                }
                if roles == before {
                    break;
                }
            }
            if !roles.iter().all(|(slot, who)| role_accepts(store, &slot.role, who)) {
                continue;
            }
            let phase_grounding = s.phases.iter().enumerate().map(|(p, ph)| (ph.id.clone(), tok(p).id.clone())).collect();
            out.insert((d.id().to_string(), phase_grounding, roles));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Random parser cases.

pub const OBJECTS: [(&str, &str, Option<&str>); 5] = [
    ("pot", "Pot", Some("Containment")),
    ("cup", "Cup", Some("Containment")),
    ("knife", "Knife", Some("Cutting")),
    ("board", "Board", Some("Support")),
    ("gripper", "Gripper", None),
];

pub const EVENT_TYPES: [&str; 6] = ["Approaching", "Tilting", "Grasping", "Sawing", "Lifting", "Contact"];

fn concept(id: &str, kind: ConceptKind, parents: &[&str], restriction: Option<Restriction>) -> Concept {
    Concept {
        id: id.into(),
        name: id.into(),
        kind,
        parents: parents.iter().map(|p| p.to_string()).collect(),
        restriction,
    }
}

/// Fixed taxonomy and objects for generated parser cases.
pub fn case_store() -> Ontology {
    use ConceptKind::*;
    let mut b = Ontology::builder();
    for c in [
        concept("Task", Task, &[], None),
        concept("Motion", ProcessType, &[], None),
        concept("Approaching", ProcessType, &["Motion"], None),
        concept("Tilting", ProcessType, &["Motion"], None),
        concept("Grasping", ProcessType, &["Motion"], None),
        concept("Sawing", ProcessType, &["Motion"], None),
        concept("Lifting", ProcessType, &["Motion"], None),
        concept("Contact", StateType, &[], None),
        concept("Patient", Role, &[], None),
        concept("Container", Role, &[], Some(Restriction::disposition("Containment"))),
        concept("Source", Role, &["Container"], None),
        concept("Tool", Role, &[], Some(Restriction::disposition("Cutting"))),
        concept("Holder", Role, &[], Some(Restriction::type_tags(["Gripper", "Board"]))),
        concept("GeneratedPlan", PlanDescr, &[], None),
        concept("Affordance", AffordanceDescr, &[], None),
    ] {
        b.insert_concept(c).unwrap();
    }
    for (id, tag, disp) in OBJECTS {
        b.add_entity(Entity::object(id, tag)).unwrap();
        if let Some(d) = disp {
            b.add_disposition(Disposition {
                id: format!("{id}_{d}"),
                bearer: id.into(),
                disposition_type: d.into(),
                affordance: "Affordance".into(),
            })
            .unwrap();
        }
    }
    b.freeze()
}

pub const ROLES: [&str; 5] = ["Patient", "Container", "Source", "Tool", "Holder"];
pub const PHASE_CONCEPTS: [&str; 7] = ["Motion", "Approaching", "Tilting", "Grasping", "Sawing", "Lifting", "Contact"];

pub fn random_episode(rng: &mut impl Rng, store: &Ontology, eps: f64) -> Episode {
    let n = rng.gen_range(0..=8);
    let events: Vec<RawEvent> = (0..n)
        .map(|_| {
            let ty = *EVENT_TYPES.choose(rng).unwrap();
            let class = if ty == "Contact" { TokenClass::ContactEvent } else { TokenClass::MotionEvent };
            let start = rng.gen_range(0..16) as f64 * 0.5;
            let len = if class == TokenClass::ContactEvent && rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(1..8) as f64 * 0.5 };
            let k = rng.gen_range(1..=2);
            let who: Vec<&str> = OBJECTS.choose_multiple(rng, k).map(|o| o.0).collect();
            RawEvent::new(class, ty, who, start, start + len)
        })
        .collect();
    Episode {
        id: "generated".into(),
        tokens: tokenize(&events, eps).unwrap(),
        scene: Scene::new(OBJECTS.iter().map(|o| o.0), store).unwrap(),
    }
}

/// A plan of 1 to 4 phases. Constraints are often copied from the episode's
/// actual token relations so that matches are common.
pub fn random_plan(rng: &mut impl Rng, id: &str, tokens: &[Token], eps: f64) -> Description {
    let n = rng.gen_range(1..=4);
    let mut s = PhaseStructure::new(EventTypeRef::new(format!("{id}_task"), "Task"));
    let picks: Vec<Option<&Token>> = (0..n).map(|_| tokens.choose(rng).filter(|_| rng.gen_bool(0.7))).collect();
    for (p, pick) in picks.iter().enumerate() {
        let concept = match pick {
            Some(t) if rng.gen_bool(0.7) => t.type_tag.clone(),
            Some(_) if rng.gen_bool(0.5) => "Motion".to_string(),
            _ => PHASE_CONCEPTS.choose(rng).unwrap().to_string(),
        };
        let nroles = rng.gen_range(0..=2);
        let roles: Vec<&str> = ROLES.choose_multiple(rng, nroles).copied().collect();
        s.phases.push(EventTypeRef::new(format!("P{p}"), concept).with_roles(roles));
    }
    for p in 0..n {
        for q in p + 1..n {
            if rng.gen_bool(0.4) {
                continue;
            }
            let truth = match (picks[p], picks[q]) {
                (Some(a), Some(b)) => token_relation(&a.interval, &b.interval, eps),
                _ => None,
            };
            let rel: RelationSet = match truth {
                Some(r) if rng.gen_bool(0.7) => {
                    let extra = BaseRelation::ALL[rng.gen_range(0..13)];
                    if rng.gen_bool(0.5) { r.into() } else { RelationSet::from([r, extra]) }
                }
                _ => random_convex(rng),
            };
            s.constraints.push(PhaseConstraint::new(format!("P{p}"), rel, format!("P{q}")));
        }
    }
    if n >= 2 && rng.gen_bool(0.2) {
        s.succedences.push(ConditionalSuccedence { id: format!("{id}_next"), earlier: "P0".into(), later: "P1".into(), condition: None });
    }
    let slots: Vec<Slot> = s.phases.iter().flat_map(|ph| ph.uses_roles.iter().map(|r| Slot::new(ph.id.clone(), r.clone()))).collect();
    if slots.len() >= 2 && rng.gen_bool(0.5) {
        let pair: Vec<Slot> = slots.choose_multiple(rng, 2).cloned().collect();
        s.bindings.push(Binding { id: format!("{id}_b0"), slots: pair });
    }
    if rng.gen_bool(0.3) {
        // Bind a task-level slot to a phase slot so groundings propagate.
        let role = *ROLES.choose(rng).unwrap();
        s.defines.uses_roles.push(role.to_string());
        if let Some(slot) = slots.choose(rng) {
            s.bindings.push(Binding { id: format!("{id}_b1"), slots: vec![Slot::new(s.defines.id.clone(), role), slot.clone()] });
        }
    }
    Description::Plan(Plan { id: id.into(), concept: "GeneratedPlan".into(), structure: s, goal: None })
}

/// Relation labels between phases as stated, closed under converse, full
/// elsewhere; the oracle re-derives the network by its own propagation.
pub fn oracle_labels(d: &Description) -> Option<Vec<Vec<RelationSet>>> {
    let s = d.structure().unwrap();
    let ids: Vec<&str> = s.event_types().map(|e| e.id.as_str()).collect();
    let n = ids.len();
    let idx = |id: &str| ids.iter().position(|x| *x == id).unwrap();
    let mut l = vec![vec![RelationSet::FULL; n]; n];
    for (i, row) in l.iter_mut().enumerate() {
        row[i] = BaseRelation::Equals.into();
    }
    let put = |l: &mut Vec<Vec<RelationSet>>, i: usize, j: usize, r: RelationSet| {
        l[i][j] = l[i][j].intersection(r);
        l[j][i] = l[j][i].intersection(r.converse());
    };
    use BaseRelation::*;
    let phase_of_whole = RelationSet::from([Starts, During, Finishes, Equals]);
    for p in 1..n {
        put(&mut l, p, 0, phase_of_whole);
    }
    for c in &s.constraints {
        put(&mut l, idx(&c.left), idx(&c.right), c.relation);
    }
    for c in &s.succedences {
        put(&mut l, idx(&c.earlier), idx(&c.later), RelationSet::from([Before, Meets]));
    }
    // Plain fixpoint iteration over all triangles, composing by the oracle
    // table.
    let table = composition_oracle();
    let compose = |a: RelationSet, b: RelationSet| {
        let mut out = RelationSet::EMPTY;
        for x in a.iter() {
            for y in b.iter() {
                out = out.union(table[&(x, y)]);
            }
        }
        out
    };
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t = l[i][j].intersection(compose(l[i][k], l[k][j]));
                    if t != l[i][j] {
                        l[i][j] = t;
                        changed = true;
                    }
                }
                if l[i][j].is_empty() {
                    return None;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Drop the defined task: only phase-to-phase labels matter.
    Some(l[1..].iter().map(|row| row[1..].to_vec()).collect())
}

// ---------------------------------------------------------------------------
// Selection oracle.

pub struct SelectionCase {
    pub store: Ontology,
    pub scene: Scene,
    pub task: EventTypeRef,
}

const DISPOSITIONS: [&str; 4] = ["Containment", "Cutting", "Support", "Grip"];
const TAGS: [&str; 5] = ["Pot", "Cup", "Knife", "Board", "Sponge"];

fn random_leaf(rng: &mut impl Rng) -> Restriction {
    match rng.gen_range(0..3) {
        0 => Restriction::disposition(*DISPOSITIONS.choose(rng).unwrap()),
        1 => {
            let k = rng.gen_range(1..=2);
            Restriction::type_tags(TAGS.choose_multiple(rng, k).copied())
        }
        _ => Restriction::KindIs(EntityKind::Object),
    }
}

fn random_restriction(rng: &mut impl Rng, depth: usize) -> Restriction {
    if depth == 0 || rng.gen_bool(0.5) {
        return random_leaf(rng);
    }
    let k = rng.gen_range(1..=3);
    let items = (0..k).map(|_| random_restriction(rng, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        Restriction::And(items)
    } else {
        Restriction::Or(items)
    }
}

pub fn random_selection_case(rng: &mut impl Rng) -> SelectionCase {
    let mut b = Ontology::builder();
    b.insert_concept(concept("Affordance", ConceptKind::AffordanceDescr, &[], None)).unwrap();
    b.insert_concept(concept("Bearer", ConceptKind::Role, &[], None)).unwrap();
    b.insert_concept(concept("Trigger", ConceptKind::Role, &[], None)).unwrap();
    let nroles = rng.gen_range(1..=4);
    let mut roles: Vec<String> = Vec::new();
    for r in 0..nroles {
        let id = format!("Role{r}");
        let restriction = rng.gen_bool(0.8).then(|| random_restriction(rng, 3));
        let parents: Vec<&str> = if r > 0 && rng.gen_bool(0.3) { vec![roles[0].as_str()] } else { vec![] };
        b.insert_concept(concept(&id, ConceptKind::Role, &parents, restriction)).unwrap();
        roles.push(id);
    }
    let nobj = rng.gen_range(0..=6);
    let mut objects = Vec::new();
    for o in 0..nobj {
        let id = format!("obj{o}");
        b.add_entity(Entity::object(id.clone(), *TAGS.choose(rng).unwrap())).unwrap();
        for d in DISPOSITIONS {
            if rng.gen_bool(0.35) {
                b.add_disposition(Disposition {
                    id: format!("{id}_{d}"),
                    bearer: id.clone(),
                    disposition_type: d.into(),
                    affordance: "Affordance".into(),
                })
                .unwrap();
            }
        }
        objects.push(id);
    }
    let store = b.freeze();
    let scene = Scene::new(objects, &store).unwrap();
    let task = EventTypeRef::new("T", "Task").with_roles(roles);
    SelectionCase { store, scene, task }
}

pub fn selection_oracle(case: &SelectionCase) -> BTreeMap<String, BTreeSet<String>> {
    case.task
        .uses_roles
        .iter()
        .map(|r| {
            let objs = case.scene.objects().iter().filter(|o| role_accepts(&case.store, r, o)).cloned().collect();
            (r.clone(), objs)
        })
        .collect()
}
