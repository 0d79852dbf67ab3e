use thiserror::Error;

use crate::parser::ParseError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("resource limit exceeded: more than {limit} {what}")]
    ResourceLimit { what: &'static str, limit: usize },
    /// A computed definition failed verification. Signals a bug, never a user error.
    #[error("internal soundness violation: {0}")]
    InternalSoundness(String),
    #[error("no interpolant can be extracted from this proof: {0}")]
    NotExtractable(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
