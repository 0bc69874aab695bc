use thiserror::Error;

/// One diagnostic from datum or catalog validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// JSON pointer to the offending field, e.g. `/products/3/exponents`.
    pub pointer: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{at}: {}", self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    ZeroDivisor,
    #[error("divisor involves variables other than j")]
    MixedVariableDivision,
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("monomial {monomial} has degree {got}, table expects {expected}")]
    DegreeMismatch { monomial: String, got: u32, expected: u32 },
    #[error("missing intersection number {monomial}")]
    MissingIntersectionNumber { monomial: String },
    #[error("degenerate volume: {0}")]
    DegenerateVolume(String),
    #[error("numerator degree exceeds denominator degree + n ({num} > {den} + {n})")]
    DegreeOverflow { num: u32, den: u32, n: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precondition cannot be verified: {0}")]
    PreconditionUnverifiable(String),
    #[error("need at least two components, got {0}")]
    InsufficientComponents(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("unknown class '{0}'")]
    UnknownClass(String),
    #[error("normalized datum violates J = -E: J = {j}, -E = {neg_e}")]
    NormalizationViolated { j: String, neg_e: String },
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("schema: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Schema(Vec<Diagnostic>),
}

impl Error {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema(vec![Diagnostic { pointer: pointer.into(), message: message.into() }])
    }
}
