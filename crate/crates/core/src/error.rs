use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("constant term is not invertible")]
    NonUnitLeading,
    #[error("fiber degree too low: {0}")]
    FiberDegreeTooLow(String),
    #[error("not divisible by nu: {0}")]
    Divisibility(String),
    #[error("operator is not natural: {0}")]
    NotNatural(String),
    #[error("truncation insufficient: {0}")]
    TruncationInsufficient(String),
    #[error("potential Hessian is degenerate at the base point")]
    DegenerateHessian,
    #[error("inconsistent recursion at fiber degree {degree}: {detail}")]
    InconsistentRecursion { degree: u32, detail: String },
    #[error("star products do not share the leading potential")]
    SharedBodyViolation,
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("input purity: {0}")]
    NotPure(String),
    #[error("unknown preset geometry {0:?}")]
    UnknownPreset(String),
    #[error("Jacobi identity violated: {0}")]
    JacobiViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(..) => "dimension_mismatch",
            Error::NonUnitLeading => "non_unit_leading",
            Error::FiberDegreeTooLow(_) => "fiber_degree_too_low",
            Error::Divisibility(_) => "divisibility_error",
            Error::NotNatural(_) => "not_natural",
            Error::TruncationInsufficient(_) => "truncation_insufficient",
            Error::DegenerateHessian => "degenerate_hessian",
            Error::InconsistentRecursion { .. } => "inconsistent_recursion",
            Error::SharedBodyViolation => "shared_body_violation",
            Error::ShapeViolation(_) => "shape_violation",
            Error::NotPure(_) => "not_pure",
            Error::UnknownPreset(_) => "unknown_preset",
            Error::JacobiViolation(_) => "jacobi_violation",
            Error::Parse(_) => "parse_error",
            Error::Invalid(_) => "invalid_argument",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
