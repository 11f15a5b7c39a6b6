use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module.
///
/// The variant name is what the CLI prints as `error = <Variant>`, so the
/// names double as a stable machine-readable vocabulary.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("form kind violated: {0}")]
    KindViolation(String),
    #[error("degenerate form: {0}")]
    DegenerateForm(String),
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("associated form is not well defined: {0}")]
    IllDefinedForm(String),
    #[error("subspace is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("relation is not skew-adjoint: {0}")]
    NotSkewAdjoint(String),
    #[error("relation index is nonzero: {0}")]
    IndexNonzero(String),
    #[error("splitting failed: {0}")]
    SplitFailure(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("subspaces are not nested: {0}")]
    NotNested(String),
    #[error("operator is not injective on the subspace: {0}")]
    SingularRestriction(String),
    #[error("relative bound could not be verified: {0}")]
    RelativeBoundUnverified(String),
    #[error("matrix is not unitary: {0}")]
    NotUnitary(String),
    #[error("kernel parities differ: {0}")]
    ParityMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Variant name without payload.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::KindViolation(_) => "KindViolation",
            Error::DegenerateForm(_) => "DegenerateForm",
            Error::InvalidScalar(_) => "InvalidScalar",
            Error::IllDefinedForm(_) => "IllDefinedForm",
            Error::NotIsotropic(_) => "NotIsotropic",
            Error::NotSkewAdjoint(_) => "NotSkewAdjoint",
            Error::IndexNonzero(_) => "IndexNonzero",
            Error::SplitFailure(_) => "SplitFailure",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NotNested(_) => "NotNested",
            Error::SingularRestriction(_) => "SingularRestriction",
            Error::RelativeBoundUnverified(_) => "RelativeBoundUnverified",
            Error::NotUnitary(_) => "NotUnitary",
            Error::ParityMismatch(_) => "ParityMismatch",
            Error::Parse(_) => "Parse",
        }
    }
}

pub(crate) fn mismatch(what: impl Into<String>) -> Error {
    Error::DimensionMismatch(what.into())
}

/// A sign decision that fell inside the tolerance band and was left undecided.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceWarning {
    pub context: &'static str,
    /// The eigenvalue or singular value closest to zero.
    pub value: f64,
    pub cutoff: f64,
}

impl std::fmt::Display for ToleranceWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: value {:e} within cutoff {:e}",
            self.context, self.value, self.cutoff
        )
    }
}
