use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::grounding::Scene;
use crate::ontology::{Disposition, Entity, EntityKind, Ontology, Quantity};
use crate::parser::{tokenize, Episode, RawEvent};

use super::{peek_version, read, FormatError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpisodeDocument {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub scene: SceneRecord,
    #[serde(default)]
    pub events: Vec<RawEvent>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneRecord {
    #[serde(default)]
    pub objects: Vec<ObjectRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "type")]
    pub type_tag: String,
    #[serde(default)]
    pub dispositions: Vec<DispositionRecord>,
    #[serde(default)]
    pub qualities: Vec<QualityRecord>,
}

/// Disposition borne by the enclosing object. The id defaults to
/// `{object}_{type}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispositionRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(rename = "type")]
    pub disposition_type: String,
    pub affordance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QualityRecord {
    pub id: String,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub type_tag: Option<String>,
    pub value: f64,
    pub units: String,
}

/// Loads and tokenizes an episode. Scene objects are added to a copy of
/// `store`, which is returned alongside the episode.
pub fn load_episode(path: impl AsRef<Path>, eps: f64, store: &Ontology) -> Result<(Episode, Ontology), FormatError> {
    let path = path.as_ref();
    let fallback = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let fallback = fallback.strip_suffix(".ep").unwrap_or(&fallback).to_string();
    let (mut episode, store) = parse_episode(&read(path)?, eps, store)?;
    if episode.id.is_empty() {
        episode.id = fallback;
    }
    Ok((episode, store))
}

pub fn parse_episode(text: &str, eps: f64, store: &Ontology) -> Result<(Episode, Ontology), FormatError> {
    peek_version(text)?;
    let doc: EpisodeDocument = serde_json::from_str(text)?;
    episode_from_document(&doc, eps, store)
}

pub fn episode_from_document(
    doc: &EpisodeDocument,
    eps: f64,
    store: &Ontology,
) -> Result<(Episode, Ontology), FormatError> {
    super::check_version(&doc.version)?;
    let mut issues = Vec::new();
    let mut b = store.extend();
    for obj in &doc.scene.objects {
        let mut entity = Entity::object(obj.id.clone(), obj.type_tag.clone());
        if let Some(name) = &obj.name {
            entity.name = name.clone();
        }
        for q in &obj.qualities {
            let mut quality = Entity::new(q.id.clone(), EntityKind::Quality, q.type_tag.clone().unwrap_or_else(|| "Quality".into()));
            quality.value = Some(Quantity::new(q.value, q.units.clone()));
            match b.add_entity(quality) {
                Ok(()) => {
                    entity.qualities.insert(q.id.clone());
                }
                Err(e) => issues.push(e.to_string()),
            }
        }
        if let Err(e) = b.add_entity(entity) {
            issues.push(e.to_string());
            continue;
        }
        for d in &obj.dispositions {
            let disposition = Disposition {
                id: d.id.clone().unwrap_or_else(|| format!("{}_{}", obj.id, d.disposition_type)),
                bearer: obj.id.clone(),
                disposition_type: d.disposition_type.clone(),
                affordance: d.affordance.clone(),
            };
            if let Err(e) = b.add_disposition(disposition) {
                issues.push(e.to_string());
            }
        }
    }
    let scene_ids: Vec<&str> = doc.scene.objects.iter().map(|o| o.id.as_str()).collect();
    for (i, e) in doc.events.iter().enumerate() {
        for p in &e.participants {
            if !scene_ids.contains(&p.as_str()) {
                issues.push(format!("event {i} ({}) names `{p}`, which is not a scene object", e.event_type));
            }
        }
    }
    if !issues.is_empty() {
        return Err(FormatError::ValidationFailed(issues));
    }
    let store = b.freeze();
    let tokens = tokenize(&doc.events, eps)?;
    let scene = Scene::new(scene_ids, &store).map_err(|e| FormatError::ValidationFailed(vec![e.to_string()]))?;
    Ok((Episode { id: doc.id.clone().unwrap_or_default(), tokens, scene }, store))
}
