use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid corner (vertex {vertex}, slot {slot})")]
    InvalidCorner { vertex: usize, slot: usize },

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("guard violation: {0}")]
    Guard(String),

    #[error("tree is not planted")]
    NotPlanted,

    #[error("invalid structure: {0}")]
    Structure(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn guard(msg: impl Into<String>) -> Error {
    Error::Guard(msg.into())
}

pub(crate) fn structure(msg: impl Into<String>) -> Error {
    Error::Structure(msg.into())
}
