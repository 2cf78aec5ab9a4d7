use thiserror::Error;

use crate::awareness::Violation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("{what} needs {size} evaluations, above the cap of {cap} (set REFLEX_MAX_ENUM to raise it)")]
    Size { what: &'static str, size: u128, cap: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownName { kind: &'static str, name: String, known: String },

    #[error("theta label `{0}` has no payoff variant in the game")]
    UnknownTheta(String),

    #[error("invalid belief graph: {}", format_violations(.0))]
    InvalidGraph(Vec<Violation>),

    #[error("invalid belief tree: {0}")]
    InvalidTree(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("candidate set is empty; the puzzle has terminated")]
    Terminated,

    #[error("unsupported utility family: {0}")]
    UnsupportedFamily(String),

    #[error("empty data: {0}")]
    EmptyData(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter { name, reason: reason.into() }
    }

    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), message: message.into() }
    }

    /// True for errors raised by an enumeration cap rather than by bad input.
    pub fn is_size_error(&self) -> bool {
        matches!(self, Error::Size { .. })
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
