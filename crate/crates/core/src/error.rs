//! Crate-wide error type.
//!
//! Everything fallible in the library reports through [`enum@Error`]; the
//! CLI maps the variants onto process exit codes.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input text that does not match the ontology grammar.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Two axioms ended up with the same identifier.
    #[error("duplicate axiom id `{id}`")]
    DuplicateId { id: String },

    /// Syntactically valid input outside the supported fragment
    /// (e.g. assertion forms such as `(inst ...)` or `(rel ...)`).
    #[error("unsupported construct at line {line}, column {column}: {message}")]
    UnsupportedConstruct {
        line: usize,
        column: usize,
        message: String,
    },

    /// The queried inclusion does not follow from the ontology.
    #[error("goal is not entailed by the ontology")]
    NotEntailed,

    /// A reasoning budget (tableau nodes, saturation contexts) was exhausted.
    /// Budgets exist so that pathological inputs fail loudly instead of
    /// looping; results are never silently approximated.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// The exhaustive oracle refuses modules above its subset-enumeration cap.
    #[error("module has {module_size} axioms, above the brute-force cap of {cap}")]
    CapExceeded { module_size: usize, cap: usize },

    /// Hitting-set input contained an empty member (nothing can hit it).
    #[error("hitting-set family contains an empty member")]
    EmptyMember,

    /// The goal already holds under the empty ontology, so no repair exists.
    #[error("no repair exists: the goal holds under the empty ontology")]
    NoRepair,

    /// A documented precondition of an operation was violated by the caller.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// Two union-computation methods returned different answers for the same
    /// query. This always indicates a bug and is surfaced, never papered over.
    #[error("methods disagree on {context}: {left_method} -> {left}, {right_method} -> {right}")]
    Disagreement {
        context: String,
        left_method: String,
        left: String,
        right_method: String,
        right: String,
    },

    /// Method name not present in the registry.
    #[error("unknown method `{name}`; available: {available}")]
    UnknownMethod { name: String, available: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
