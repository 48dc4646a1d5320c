use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::Deref;

use super::{
    AffordanceSpec, Classification, Concept, ConceptKind, DesignAspect, DesignSpec, Disposition, Entity,
    EntityKind, OntologyError, Quantity, Restriction, Verdict,
};

type Result<T> = std::result::Result<T, OntologyError>;

/// Frozen concept store. All queries are pure; the store is `Send + Sync`
/// and may be shared between readers.
#[derive(Debug, Clone, Default)]
pub struct Ontology {
    concepts: BTreeMap<String, Concept>,
    by_name: BTreeMap<String, BTreeSet<String>>,
    entities: BTreeMap<String, Entity>,
    dispositions: BTreeMap<String, Disposition>,
    disposition_index: BTreeMap<String, BTreeSet<String>>,
    affordances: BTreeMap<String, AffordanceSpec>,
    designs: BTreeMap<String, DesignSpec>,
    classifications: Vec<Classification>,
}

/// Mutable build phase of an [`Ontology`].
#[derive(Debug, Clone, Default)]
pub struct OntologyBuilder {
    store: Ontology,
    fresh: BTreeMap<String, usize>,
}

impl Deref for OntologyBuilder {
    type Target = Ontology;

    fn deref(&self) -> &Ontology {
        &self.store
    }
}

impl Ontology {
    pub fn builder() -> OntologyBuilder {
        OntologyBuilder::default()
    }

    /// Reopens a copy of this store for extension (e.g. adding a scene).
    pub fn extend(&self) -> OntologyBuilder {
        OntologyBuilder { store: self.clone(), fresh: BTreeMap::new() }
    }

    pub fn concept(&self, id: &str) -> Result<&Concept> {
        self.concepts.get(id).ok_or_else(|| OntologyError::UnknownId(id.to_string()))
    }

    pub fn entity(&self, id: &str) -> Result<&Entity> {
        self.entities.get(id).ok_or_else(|| OntologyError::UnknownId(id.to_string()))
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.concepts.contains_key(id)
            || self.entities.contains_key(id)
            || self.dispositions.contains_key(id)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn dispositions(&self) -> impl Iterator<Item = &Disposition> {
        self.dispositions.values()
    }

    pub fn disposition(&self, id: &str) -> Option<&Disposition> {
        self.dispositions.get(id)
    }

    pub fn affordances(&self) -> impl Iterator<Item = &AffordanceSpec> {
        self.affordances.values()
    }

    pub fn designs(&self) -> impl Iterator<Item = &DesignSpec> {
        self.designs.values()
    }

    pub fn classifications(&self) -> &[Classification] {
        &self.classifications
    }

    /// Concepts whose id or name equals `label`.
    pub fn concepts_named<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Concept> + 'a {
        let by_id = self.concepts.get(label);
        let by_name = self
            .by_name
            .get(label)
            .into_iter()
            .flatten()
            .filter(move |id| id.as_str() != label)
            .filter_map(|id| self.concepts.get(id));
        by_id.into_iter().chain(by_name)
    }

    /// Reflexive-transitive closure of the parent relation from `id`.
    pub fn ancestors(&self, id: &str) -> Result<BTreeSet<String>> {
        self.concept(id)?;
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([id.to_string()]);
        while let Some(cur) = queue.pop_front() {
            if !seen.insert(cur.clone()) {
                continue;
            }
            if let Some(c) = self.concepts.get(&cur) {
                queue.extend(c.parents.iter().cloned());
            }
        }
        Ok(seen)
    }

    /// True iff `b` is reachable from `a` over parent links (reflexive).
    pub fn is_subsumed_by(&self, a: &str, b: &str) -> Result<bool> {
        self.concept(b)?;
        Ok(self.ancestors(a)?.contains(b))
    }

    /// True iff some concept labelled `tag` (by id or name) is subsumed by
    /// `concept`. Used to match observed type tags against event types.
    pub fn tag_classified_by(&self, tag: &str, concept: &str) -> bool {
        self.concepts_named(tag)
            .any(|c| self.is_subsumed_by(&c.id, concept).unwrap_or(false))
    }

    /// Conjunction of the restrictions of `id` and all its ancestors.
    pub fn effective_restriction(&self, id: &str) -> Result<Option<Restriction>> {
        let parts = self
            .ancestors(id)?
            .iter()
            .filter_map(|a| self.concepts.get(a).and_then(|c| c.restriction.clone()))
            .collect();
        Ok(Restriction::conjoin(parts))
    }

    /// Disposition types borne by an object, by direct index lookup.
    pub fn disposition_types(&self, entity: &str) -> BTreeSet<&str> {
        self.disposition_index.get(entity).into_iter().flatten().map(String::as_str).collect()
    }

    pub fn satisfies_restriction(&self, entity: &str, r: &Restriction) -> Result<bool> {
        let e = self.entity(entity)?;
        Ok(self.eval(e, r))
    }

    fn eval(&self, e: &Entity, r: &Restriction) -> bool {
        match r {
            Restriction::KindIs(k) => e.kind == *k,
            Restriction::TypeTagIn(tags) => tags.contains(&e.type_tag),
            Restriction::HasDisposition(t) => self.disposition_index.get(&e.id).is_some_and(|ts| ts.contains(t)),
            Restriction::RegionWithin { lo, hi, units } => match &e.value {
                Some(Quantity { value, units: u }) => u == units && *lo <= *value && *value <= *hi,
                None => false,
            },
            Restriction::And(items) => items.iter().all(|r| self.eval(e, r)),
            Restriction::Or(items) => items.iter().any(|r| self.eval(e, r)),
        }
    }

    fn explain(&self, e: &Entity, r: &Restriction) -> String {
        match r {
            Restriction::KindIs(k) => format!("kind {} is not {k}", e.kind),
            Restriction::TypeTagIn(_) => format!("type {} not allowed by {r}", e.type_tag),
            Restriction::HasDisposition(t) => format!("missing disposition {t}"),
            Restriction::RegionWithin { lo, hi, units } => match &e.value {
                Some(q) if &q.units != units => format!("units {} do not match {units}", q.units),
                Some(q) => format!("value {} outside [{lo}, {hi}]", q.value),
                None => "no region value".to_string(),
            },
            Restriction::And(items) => items
                .iter()
                .find(|r| !self.eval(e, r))
                .map(|r| self.explain(e, r))
                .unwrap_or_default(),
            Restriction::Or(items) => format!("none of {} alternatives hold", items.len()),
        }
    }

    fn branch_check(&self, concept: &str, entity: &str) -> Result<(&Concept, &Entity)> {
        let violation = || OntologyError::BranchViolation { concept: concept.to_string(), entity: entity.to_string() };
        let c = match self.concepts.get(concept) {
            Some(c) => c,
            None if self.entities.contains_key(concept) => return Err(violation()),
            None => return Err(OntologyError::UnknownId(concept.to_string())),
        };
        let e = match self.entities.get(entity) {
            Some(e) => e,
            None if self.concepts.contains_key(entity) => return Err(violation()),
            None => return Err(OntologyError::UnknownId(entity.to_string())),
        };
        Ok((c, e))
    }

    /// Whether `concept` may classify `entity`: the entity must be of a kind
    /// the concept classifies and satisfy the concept's effective restriction.
    pub fn check_classification(&self, concept: &str, entity: &str) -> Result<Verdict> {
        let (c, e) = self.branch_check(concept, entity)?;
        if !c.kind.classifiable().contains(&e.kind) {
            return Ok(Verdict::Rejected(format!("{} concepts do not classify {} entities", c.kind, e.kind)));
        }
        match self.effective_restriction(concept)? {
            Some(r) if !self.eval(e, &r) => Ok(Verdict::Rejected(self.explain(e, &r))),
            _ => Ok(Verdict::Accepted),
        }
    }

    /// Functional design matching: the object is described by the design iff
    /// it satisfies the design's quality restriction.
    pub fn design_describes(&self, design: &DesignSpec, object: &str) -> Result<bool> {
        if design.aspect != DesignAspect::Functional {
            return Err(OntologyError::UnsupportedAspect(design.aspect));
        }
        self.satisfies_restriction(object, &design.quality_restriction)
    }

    /// Stored classifications that break the branch rule or a restriction.
    pub fn classification_violations(&self) -> Vec<(Classification, String)> {
        self.classifications
            .iter()
            .filter_map(|cl| match self.check_classification(&cl.concept, &cl.entity) {
                Ok(Verdict::Accepted) => None,
                Ok(Verdict::Rejected(reason)) => Some((cl.clone(), reason)),
                Err(err) => Some((cl.clone(), err.to_string())),
            })
            .collect()
    }

    /// Kahn topological order of the concept taxonomy (children first), or
    /// `None` if the parent links contain a cycle.
    pub fn topological_order(&self) -> Option<Vec<String>> {
        let mut pending: BTreeMap<&str, usize> = self.concepts.keys().map(|k| (k.as_str(), 0)).collect();
        for c in self.concepts.values() {
            for p in &c.parents {
                if let Some(n) = pending.get_mut(p.as_str()) {
                    *n += 1;
                }
            }
        }
        let mut ready: VecDeque<&str> = pending.iter().filter(|(_, n)| **n == 0).map(|(k, _)| *k).collect();
        let mut order = Vec::with_capacity(self.concepts.len());
        while let Some(id) = ready.pop_front() {
            order.push(id.to_string());
            for p in &self.concepts[id].parents {
                if let Some(n) = pending.get_mut(p.as_str()) {
                    *n -= 1;
                    if *n == 0 {
                        ready.push_back(p);
                    }
                }
            }
        }
        (order.len() == self.concepts.len()).then_some(order)
    }
}

impl OntologyBuilder {
    pub fn new() -> OntologyBuilder {
        OntologyBuilder::default()
    }

    pub fn freeze(self) -> Ontology {
        self.store
    }

    fn fresh_id(&mut self, name: &str) -> String {
        loop {
            let n = self.fresh.entry(name.to_string()).or_insert(0);
            let id = format!("{name}_{n}");
            *n += 1;
            if !self.store.contains_id(&id) {
                return id;
            }
        }
    }

    /// Adds a concept under a fresh id derived from its name (`Pouring_0`).
    pub fn add_concept(
        &mut self,
        name: &str,
        kind: ConceptKind,
        parents: &[&str],
        restriction: Option<Restriction>,
    ) -> Result<String> {
        for p in parents {
            self.check_parent_kind(name, kind, p)?;
        }
        let id = self.fresh_id(name);
        self.insert_concept(Concept {
            id: id.clone(),
            name: name.to_string(),
            kind,
            parents: parents.iter().map(|p| p.to_string()).collect(),
            restriction,
        })?;
        Ok(id)
    }

    fn check_parent_kind(&self, child: &str, kind: ConceptKind, parent: &str) -> Result<()> {
        let p = self.store.concept(parent)?;
        if !kind.same_family(p.kind) {
            return Err(OntologyError::KindMismatch {
                child: child.to_string(),
                child_kind: kind,
                parent: parent.to_string(),
                parent_kind: p.kind,
            });
        }
        Ok(())
    }

    /// Inserts a concept under its own id. Parents must already exist; on
    /// any error the store is left unchanged.
    pub fn insert_concept(&mut self, mut concept: Concept) -> Result<()> {
        let parents = std::mem::take(&mut concept.parents);
        let id = concept.id.clone();
        self.insert_unlinked(concept)?;
        for p in &parents {
            if let Err(e) = self.add_parent(&id, p) {
                self.remove_concept(&id);
                return Err(e);
            }
        }
        Ok(())
    }

    fn remove_concept(&mut self, id: &str) {
        if let Some(c) = self.store.concepts.remove(id) {
            if let Some(ids) = self.store.by_name.get_mut(&c.name) {
                ids.remove(id);
            }
        }
    }

    /// Inserts a concept without parent links; used when loading documents
    /// whose parents may appear later.
    pub fn insert_unlinked(&mut self, mut concept: Concept) -> Result<()> {
        if self.store.contains_id(&concept.id) {
            return Err(OntologyError::DuplicateId(concept.id));
        }
        if let Some(r) = &concept.restriction {
            if !concept.kind.may_carry_restriction() {
                return Err(OntologyError::InvalidRestriction {
                    id: concept.id,
                    reason: format!("{} concepts cannot carry restrictions", concept.kind),
                });
            }
            r.validate().map_err(|reason| OntologyError::InvalidRestriction { id: concept.id.clone(), reason })?;
        }
        concept.parents.clear();
        self.store.by_name.entry(concept.name.clone()).or_default().insert(concept.id.clone());
        self.store.concepts.insert(concept.id.clone(), concept);
        Ok(())
    }

    /// Adds a parent edge, rejecting kind mismatches and cycles.
    pub fn add_parent(&mut self, child: &str, parent: &str) -> Result<()> {
        let kind = self.store.concept(child)?.kind;
        self.check_parent_kind(child, kind, parent)?;
        let cycle = || OntologyError::CycleError { child: child.to_string(), parent: parent.to_string() };
        if child == parent {
            return Err(cycle());
        }
        let inserted = self.store.concepts.get_mut(child).unwrap().parents.insert(parent.to_string());
        if inserted && self.store.topological_order().is_none() {
            self.store.concepts.get_mut(child).unwrap().parents.remove(parent);
            return Err(cycle());
        }
        Ok(())
    }

    pub fn add_entity(&mut self, entity: Entity) -> Result<()> {
        if self.store.contains_id(&entity.id) {
            return Err(OntologyError::DuplicateId(entity.id));
        }
        let invalid = |reason: &str| OntologyError::InvalidEntity { id: entity.id.clone(), reason: reason.to_string() };
        if !entity.qualities.is_empty() && entity.kind != EntityKind::Object {
            return Err(invalid("only objects carry qualities"));
        }
        if !entity.participants.is_empty() && !entity.kind.is_event() {
            return Err(invalid("only events carry participants"));
        }
        for q in &entity.qualities {
            let ok = self.store.entities.get(q).is_some_and(|e| matches!(e.kind, EntityKind::Quality | EntityKind::Region))
                || self.store.dispositions.get(q).is_some_and(|d| d.bearer == entity.id);
            if !ok {
                return Err(OntologyError::UnknownId(q.clone()));
            }
        }
        if let Some(p) = entity.participants.iter().find(|p| !self.store.entities.contains_key(*p)) {
            return Err(OntologyError::UnknownId(p.clone()));
        }
        self.store.entities.insert(entity.id.clone(), entity);
        Ok(())
    }

    /// Records a disposition and adds it to the bearer's qualities.
    pub fn add_disposition(&mut self, disposition: Disposition) -> Result<()> {
        if self.store.contains_id(&disposition.id) {
            return Err(OntologyError::DuplicateId(disposition.id));
        }
        let bearer = self.store.entity(&disposition.bearer)?;
        if bearer.kind != EntityKind::Object {
            return Err(OntologyError::InvalidRecord {
                id: disposition.id,
                reason: format!("bearer `{}` is not an object", disposition.bearer),
            });
        }
        let affordance = self.store.concept(&disposition.affordance)?;
        if affordance.kind != ConceptKind::AffordanceDescr {
            return Err(OntologyError::InvalidRecord {
                id: disposition.id,
                reason: format!("`{}` is not an affordance", disposition.affordance),
            });
        }
        self.store.entities.get_mut(&disposition.bearer).unwrap().qualities.insert(disposition.id.clone());
        self.store
            .disposition_index
            .entry(disposition.bearer.clone())
            .or_default()
            .insert(disposition.disposition_type.clone());
        self.store.dispositions.insert(disposition.id.clone(), disposition);
        Ok(())
    }

    pub fn add_affordance(&mut self, spec: AffordanceSpec) -> Result<()> {
        let invalid = |reason: String| OntologyError::InvalidRecord { id: spec.concept.clone(), reason };
        if self.store.concept(&spec.concept)?.kind != ConceptKind::AffordanceDescr {
            return Err(invalid("not an affordance concept".to_string()));
        }
        let roles = [Some(&spec.bearer_role), Some(&spec.trigger_role), spec.background_role.as_ref()];
        for role in roles.into_iter().flatten() {
            if self.store.concept(role)?.kind != ConceptKind::Role {
                return Err(invalid(format!("`{role}` is not a role")));
            }
        }
        if spec.bearer_role == spec.trigger_role {
            return Err(invalid("bearer and trigger roles must differ".to_string()));
        }
        if self.store.affordances.contains_key(&spec.concept) {
            return Err(OntologyError::DuplicateId(spec.concept));
        }
        self.store.affordances.insert(spec.concept.clone(), spec);
        Ok(())
    }

    pub fn add_design(&mut self, spec: DesignSpec) -> Result<()> {
        if spec.aspect != DesignAspect::Functional {
            return Err(OntologyError::UnsupportedAspect(spec.aspect));
        }
        if self.store.concept(&spec.concept)?.kind != ConceptKind::DesignDescr {
            return Err(OntologyError::InvalidRecord { id: spec.concept, reason: "not a design concept".to_string() });
        }
        spec.quality_restriction
            .validate()
            .map_err(|reason| OntologyError::InvalidRestriction { id: spec.concept.clone(), reason })?;
        if self.store.designs.contains_key(&spec.concept) {
            return Err(OntologyError::DuplicateId(spec.concept));
        }
        self.store.designs.insert(spec.concept.clone(), spec);
        Ok(())
    }

    /// Records that `concept` classifies `entity`; rejected classifications
    /// are not stored.
    pub fn classify(&mut self, concept: &str, entity: &str, during: Option<&str>) -> Result<()> {
        match self.store.check_classification(concept, entity)? {
            Verdict::Accepted => {
                self.store.classifications.push(Classification {
                    concept: concept.to_string(),
                    entity: entity.to_string(),
                    during: during.map(str::to_string),
                });
                Ok(())
            }
            Verdict::Rejected(reason) => Err(OntologyError::ClassificationRejected {
                concept: concept.to_string(),
                entity: entity.to_string(),
                reason,
            }),
        }
    }
}
