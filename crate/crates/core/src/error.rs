use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: expected {expected}, got {found}")]
    VariableMismatch { expected: usize, found: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("degree {degree} in variable {var} exceeds truncation {bound}")]
    DegreeExcess { var: usize, degree: u32, bound: u32 },

    #[error("multi-index {alpha:?} is not below {kappa:?}")]
    NotBelow { alpha: Vec<u32>, kappa: Vec<u32> },

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("leading coefficient too small ({0:e}); deflate first")]
    SmallLeadingCoefficient(f64),

    #[error("point {0} is a pole of the map")]
    Pole(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("eigenvalue iteration did not converge for degree {0}")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
