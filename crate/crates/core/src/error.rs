use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty Verblunsky sequence")]
    EmptySequence,
    #[error("Verblunsky coefficient alpha_{index} = {value} is outside (-1, 1)")]
    CoefficientOutOfRange { index: usize, value: f64 },
    #[error("Verblunsky coefficient alpha_{index} has non-zero imaginary part {imag}")]
    NonReal { index: usize, imag: f64 },
    #[error("parameter {name} = {value} is out of range ({expected})")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("degree {requested} needs more Verblunsky coefficients than the {available} available")]
    DegreeExceedsSequence { requested: usize, available: usize },
    #[error("matrix size {requested} exceeds the sequence length {available}")]
    SizeExceedsSequence { requested: usize, available: usize },
    #[error("ZeroLambda: lambda must be non-zero")]
    ZeroLambda,
    #[error("matrix is not tridiagonal")]
    NotTridiagonal,
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("not a DVZ Jacobi matrix: {reason} (max circle residual {residual:e})")]
    NotDvz { reason: String, residual: f64 },
    #[error("underdetermined: {0}")]
    DegenerateInput(String),
    #[error("x = {0} is outside [-2, 2]")]
    DomainError(f64),
    #[error("circle measure is not symmetric under conjugation (asymmetry {0:e})")]
    NonSymmetricMeasure(f64),
    #[error("circle measure has total mass {0}, expected 1")]
    NotProbability(f64),
    #[error("Christoffel polynomial is negative ({value}) at x = {x}")]
    NegativeWeight { x: f64, value: f64 },
    #[error("integrand is not finite at x = {0}")]
    NonFiniteIntegrand(f64),
    #[error("loss of positivity at Stieltjes step {step}: a^2 = {value:e}")]
    LossOfPositivity { step: usize, value: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
