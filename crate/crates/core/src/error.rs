use thiserror::Error;

/// Errors raised by the library.
///
/// The variants are split into two families: usage / input problems
/// (bad shapes, parse failures) and mathematical refusals, where the input
/// is well formed but the requested procedure does not apply to it.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("zero polynomial has no factorization or roots")]
    ZeroPolynomial,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// No rational combination of the forms is unimodular.
    #[error("singular system: no form in the rational span is unimodular")]
    SingularSystem,

    /// The first form of a pair is degenerate; rebase the pair on a
    /// unimodular combination first.
    #[error("first form of the pair is singular; use a unimodular combination of the pair")]
    SingularLeadingForm,

    #[error("polynomial degree {degree} exceeds the factorization cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An exact self-check failed. This signals a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for refusals that are mathematical rather than input errors.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::SingularSystem
                | Error::SingularLeadingForm
                | Error::DegreeCapExceeded { .. }
                | Error::Precondition(_)
                | Error::Unsupported(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
