//! On-disk documents. Libraries and episodes are JSON files tagged with a
//! format version; both load into the in-memory model or fail with every
//! problem found.

mod episode;
mod library;

use std::path::Path;

use thiserror::Error;

pub use episode::{
    episode_from_document, load_episode, parse_episode, DispositionRecord, EpisodeDocument, ObjectRecord, QualityRecord,
    SceneRecord,
};
pub use library::{library_from_document, load_library, parse_library, to_document, LibraryDocument};

pub const FORMAT_VERSION: &str = "soma-kit/1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported format version `{found}`, expected `{FORMAT_VERSION}`")]
    VersionMismatch { found: String },
    #[error("{} validation issue(s)", .0.len())]
    ValidationFailed(Vec<String>),
    #[error(transparent)]
    Tokenize(#[from] crate::parser::TokenizeError),
}

impl FormatError {
    /// Documents that parse but describe something invalid are validation
    /// failures; unreadable or malformed files are not.
    pub fn is_validation(&self) -> bool {
        matches!(self, FormatError::ValidationFailed(_) | FormatError::Tokenize(_))
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> FormatError {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep only the message.
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        FormatError::Parse { line: e.line(), column: e.column(), message }
    }
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

fn check_version(found: &str) -> Result<(), FormatError> {
    if found == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::VersionMismatch { found: found.to_string() })
    }
}

/// Reads only the `version` field so a mismatch is reported before any
/// schema error from a newer layout.
fn peek_version(text: &str) -> Result<(), FormatError> {
    #[derive(serde::Deserialize)]
    struct Header {
        version: String,
    }
    let header: Header = serde_json::from_str(text)?;
    check_version(&header.version)
}
