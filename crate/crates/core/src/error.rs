use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::words::Colour;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("colour {0} is not in the colour family")]
    ColourOutsideFamily(Colour),

    #[error("objective is not well formed: {0}")]
    InvalidObjective(String),

    #[error("Parity(d) needs an even d, got {0}")]
    OddParityBound(u64),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("colour index {0} occurs in both factors of a lexicographic product")]
    OverlappingColours(Ordinal),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("unsupported objective shape for exact checking: {0} (use the bounded check instead)")]
    UnsupportedObjective(String),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("universal graph unsuitable for lifting: {0}")]
    UnsuitableUniversal(String),

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
