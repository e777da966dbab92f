use thiserror::Error;

/// Errors raised by the operator, Lagrangian and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("gamma has a pole at {0}")]
    Pole(f64),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("fractional order {0} outside (0, 1]")]
    Order(f64),
    #[error("invalid interval [{a}, {b}]")]
    Interval { a: f64, b: f64 },
    #[error("grid needs at least {min} cells, got {got}")]
    GridTooCoarse { min: usize, got: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("atom exponent {exponent} leaves the integrable class (must exceed -1)")]
    NonIntegrable { exponent: f64 },
    #[error("sampled input is singular at the anchoring endpoint of the operator")]
    SingularAnchor,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("trim {0} outside [0, 0.5)")]
    Trim(f64),
    #[error("need at least {need} pins, got {got}")]
    InsufficientPins { need: usize, got: usize },
    #[error("pin on coordinate {coord} node {node} is not an interior node")]
    PinNode { coord: usize, node: usize },
    #[error("rank deficient system: {0}")]
    RankDeficient(String),
}

pub type Result<T> = std::result::Result<T, FracError>;
