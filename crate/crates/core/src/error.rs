use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants fall into three families that callers (notably the CLI) map to
/// distinct exit codes: bad input, exhausted resources, and broken internal
/// invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("position has {found} jars but the rules expect {expected}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: String, reason: String },

    #[error("invalid permissible set {set}: {reason}")]
    InvalidSet { set: String, reason: String },

    #[error("invalid rule set: {0}")]
    InvalidRules(String),

    #[error("unknown game preset `{0}`")]
    UnknownPreset(String),

    #[error("preset `{name}` cannot be built with {jars} jars: {reason}")]
    IncompatibleJarCount {
        name: String,
        jars: usize,
        reason: String,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("count overflow: {0}")]
    Overflow(String),

    #[error("resource limit exceeded: {what} needs more than {limit} entries")]
    ResourceLimit { what: String, limit: usize },

    #[error("engine invariant violated (this is a bug): {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }

    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
