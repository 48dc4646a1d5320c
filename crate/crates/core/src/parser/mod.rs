//! Activity parsing: episode logs become token streams, which are parsed
//! against a library of plans used as a grammar.

mod parse;
mod tokenize;

use crate::grounding::Scene;

pub use parse::{rank, verify_interpretation, ActivityParser, Interpretation, ParseError, RankKey};
pub use tokenize::{tokenize, RawEvent, Token, TokenClass, TokenizeError};

/// A tokenized observation log together with the objects present.
#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub id: String,
    /// Sorted by interval start; ids unique.
    pub tokens: Vec<Token>,
    pub scene: Scene,
}

impl Episode {
    pub fn token(&self, id: &str) -> Option<&Token> {
        self.tokens.iter().find(|t| t.id == id)
    }
}
