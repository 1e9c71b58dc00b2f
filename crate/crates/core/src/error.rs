use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// Each variant maps to a stable short code (see [`Error::code`]) which the
/// CLI prints as a prefix and the C interface maps onto integer status codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operands do not live in the same ring (different variable lists).
    #[error("variable lists differ: {left:?} vs {right:?}")]
    Structural { left: Vec<String>, right: Vec<String> },

    #[error("index out of range: {0}")]
    Range(String),

    /// A precondition on the value of a coefficient failed.
    #[error("{0}")]
    Domain(String),

    /// The solver variant's hypothesis on (dG/dz)(0,0) does not hold.
    #[error("{0}")]
    Condition(String),

    #[error("{0}")]
    Singular(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("unknown identifier `{name}` at {line}:{column}")]
    UnknownIdentifier { name: String, line: usize, column: usize },

    #[error("in `{expr}`: {source}")]
    InExpression { expr: String, source: Box<Error> },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("fixed-point iteration did not converge after {iterations} steps (last residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("numerical singularity: {0}")]
    NumericalSingularity(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Bad command-line input.
    #[error("{0}")]
    Usage(String),

    #[error("malformed series record: {0}")]
    Format(String),

    /// An identity that must hold by construction was violated.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Structural { .. } => "structural",
            Error::Range(_) => "range",
            Error::Domain(_) => "domain",
            Error::Condition(_) => "condition",
            Error::Singular(_) => "singular",
            Error::Syntax { .. } => "syntax",
            Error::UnknownIdentifier { .. } => "unknown-identifier",
            Error::InExpression { source, .. } => source.code(),
            Error::Resource(_) => "resource",
            Error::Convergence { .. } => "convergence",
            Error::NumericalSingularity(_) => "numerical-singularity",
            Error::Precondition(_) => "precondition",
            Error::Usage(_) => "usage",
            Error::Format(_) => "format",
            Error::Invariant(_) => "invariant",
        }
    }

    /// Strips `InExpression` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::InExpression { source, .. } => source.root(),
            e => e,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
