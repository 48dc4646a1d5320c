use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::activity::{validate_description, Description};
use crate::ontology::{AffordanceSpec, Concept, DesignSpec, Ontology};

use super::{peek_version, read, FormatError, FORMAT_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LibraryDocument {
    pub version: String,
    #[serde(default)]
    pub concepts: Vec<Concept>,
    #[serde(default)]
    pub descriptions: Vec<Description>,
    #[serde(default)]
    pub affordances: Vec<AffordanceSpec>,
    #[serde(default)]
    pub designs: Vec<DesignSpec>,
}

impl LibraryDocument {
    /// Same document with every list sorted by id, for structural comparison.
    pub fn normalized(&self) -> LibraryDocument {
        let mut d = self.clone();
        d.concepts.sort_by(|a, b| a.id.cmp(&b.id));
        d.descriptions.sort_by(|a, b| a.id().cmp(b.id()));
        d.affordances.sort_by(|a, b| a.concept.cmp(&b.concept));
        d.designs.sort_by(|a, b| a.concept.cmp(&b.concept));
        d
    }
}

pub fn load_library(path: impl AsRef<Path>) -> Result<(Ontology, Vec<Description>), FormatError> {
    parse_library(&read(path.as_ref())?)
}

pub fn parse_library(text: &str) -> Result<(Ontology, Vec<Description>), FormatError> {
    peek_version(text)?;
    let doc: LibraryDocument = serde_json::from_str(text)?;
    library_from_document(doc)
}

/// Builds the store and checks every description, collecting all issues.
///
/// Concepts are inserted first without parents so documents may list them
/// in any order; parent links are added in a second pass.
pub fn library_from_document(doc: LibraryDocument) -> Result<(Ontology, Vec<Description>), FormatError> {
    super::check_version(&doc.version)?;
    let mut issues = Vec::new();
    let mut b = Ontology::builder();
    for c in &doc.concepts {
        if let Err(e) = b.insert_unlinked(c.clone()) {
            issues.push(e.to_string());
        }
    }
    for c in &doc.concepts {
        for p in &c.parents {
            if let Err(e) = b.add_parent(&c.id, p) {
                issues.push(e.to_string());
            }
        }
    }
    for a in &doc.affordances {
        if let Err(e) = b.add_affordance(a.clone()) {
            issues.push(e.to_string());
        }
    }
    for d in &doc.designs {
        if let Err(e) = b.add_design(d.clone()) {
            issues.push(e.to_string());
        }
    }
    let store = b.freeze();

    let mut seen = BTreeSet::new();
    for d in &doc.descriptions {
        if !seen.insert(d.id()) || store.contains_id(d.id()) {
            issues.push(format!("id `{}` is already in use", d.id()));
        }
        issues.extend(validate_description(d, &store).iter().map(ToString::to_string));
    }
    if issues.is_empty() {
        Ok((store, doc.descriptions))
    } else {
        Err(FormatError::ValidationFailed(issues))
    }
}

/// Serializable document for a loaded library.
pub fn to_document(store: &Ontology, descriptions: &[Description]) -> LibraryDocument {
    LibraryDocument {
        version: FORMAT_VERSION.to_string(),
        concepts: store.concepts().cloned().collect(),
        descriptions: descriptions.to_vec(),
        affordances: store.affordances().cloned().collect(),
        designs: store.designs().cloned().collect(),
    }
}
