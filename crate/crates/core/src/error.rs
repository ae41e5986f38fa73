//! Error type shared across the workbench.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("matrix size mismatch: {0}x{0} vs {1}x{1}")]
    SizeMismatch(usize, usize),
    #[error("singular matrix: determinant {0} vanishes")]
    SingularMatrix(String),
    #[error("not in B_- * U: leading principal minor {0} vanishes")]
    NotInBorelCell(usize),
    #[error("evaluation at a pole: denominator {0} vanishes at the given point")]
    PoleEvaluation(String),
    #[error("unbound variable {0} in numeric evaluation")]
    UnboundVariable(String),
    #[error("Dynkin index {0} out of range for rank {1}")]
    IndexOutOfRange(usize, usize),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("parameter count {0} does not match word length {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid braid pattern at position {0}: {1}")]
    InvalidBraid(usize, String),
    #[error("zero parameter where inversion is required")]
    ZeroParameter,
    #[error("chart is singular here: {0}")]
    SingularChart(String),
    #[error("chart inversion failed: {0}")]
    ChartInversion(String),
    #[error("expression is not subtraction-free: {0}")]
    NotSubtractionFree(String),
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("map is not square: {0} outputs vs {1} inputs")]
    NotSquareMap(usize, usize),
    #[error("commutator certification failed: [H_{0}, H_{1}] != 0")]
    NonCommuting(usize, usize),
    #[error("quadrature truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("optimizer did not converge: {0}")]
    NoConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
