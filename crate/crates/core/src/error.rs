use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph is not connected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown method {0:?} (expected pcon_core, pcon_de, asc_sweep, trw, ppr or hk)")]
    UnknownMethod(String),

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("no candidate set with vol(S) <= m")]
    NoCandidate,

    #[error("oracle refused: n = {0} exceeds the enumeration cap of 20")]
    OracleTooLarge(usize),

    #[error("bad cache file: {0}")]
    BadCache(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("config: {0}")]
    Config(#[from] toml::de::Error),
}

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
