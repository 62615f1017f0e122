use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("affine map with zero leading coefficient")]
    DegenerateAffine,

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("sequence is not a catalog orthogonal polynomial sequence: {0}")]
    NotOrthogonal(String),

    #[error("eigenvalue d_{0} vanishes")]
    DegenerateEigenvalue(usize),

    #[error("d_{n} - d_0 does not match the leading-coefficient eigenvalue {expected}")]
    IncompatibleEigenvalue { n: usize, expected: String },

    #[error("perturbed sequence agrees with the original up to index {0}")]
    NoPerturbation(usize),

    #[error("shift with a = 1, b = 0 is the identity operator")]
    IdentityOperator,

    #[error("division by zero at index {0}")]
    DivisionByZero(usize),

    #[error("value at index {0} is irrational")]
    Irrational(usize),

    #[error("basis does not cover degree {0}")]
    BasisTooShort(usize),

    #[error("basis element {0} does not have degree {0}")]
    NotGraded(usize),

    #[error("classification refused: {0}")]
    ClassificationRefused(String),

    #[error("vector is not in the adjoint domain")]
    DomainError,

    #[error("precondition failed: {0}")]
    PreconditionError(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("index {index} exceeds horizon {horizon}")]
    BeyondHorizon { index: usize, horizon: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
