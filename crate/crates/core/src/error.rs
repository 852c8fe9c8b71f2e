use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Variants fall into two classes: input errors (the caller handed us
/// something malformed or contradictory) and computation errors (the input
/// was well-formed but the requested invariant does not exist or could not
/// be computed within configured limits). See [`Error::is_input_error`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("zero polynomial rejected")]
    ZeroPolynomial,
    #[error("not a singular germ: constant or linear part is nonzero")]
    NotSingularGerm,
    #[error("smooth germ: linear part is nonzero")]
    SmoothGerm,
    #[error("non-isolated singularity: quotient by the Jacobian ideal is infinite-dimensional")]
    NonIsolated,
    #[error("normal form reduction exceeded {0} intermediate polynomials")]
    ReductionLimit(usize),
    #[error("insufficient singularity data: {0}")]
    InsufficientData(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("malformed chain complex: {0}")]
    MalformedComplex(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for errors caused by the input document rather than by the
    /// mathematics (exit code 2 on the command line; the rest map to 3).
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NonIsolated
                | Error::SmoothGerm
                | Error::NotSingularGerm
                | Error::ReductionLimit(_)
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnknownVariable(_) => "unknown-variable",
            Error::ZeroPolynomial => "zero-polynomial",
            Error::NotSingularGerm => "not-singular-germ",
            Error::SmoothGerm => "smooth-germ",
            Error::NonIsolated => "non-isolated",
            Error::ReductionLimit(_) => "reduction-limit",
            Error::InsufficientData(_) => "insufficient-data",
            Error::Inconsistent(_) => "inconsistent",
            Error::Range(_) => "range",
            Error::MalformedComplex(_) => "malformed-complex",
            Error::Invalid(_) => "invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
