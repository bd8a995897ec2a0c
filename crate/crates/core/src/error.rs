use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("symbol grid of {grid} points cannot represent bandwidth {bandwidth} (need at least {})", 2 * bandwidth + 1)]
    GridTooSmall { grid: usize, bandwidth: usize },

    #[error("operator is not hermitian: asymmetry {asymmetry:e} exceeds tolerance {tolerance:e}")]
    NonHermitian { asymmetry: f64, tolerance: f64 },

    #[error("window overflow: {mass:e} probability mass would leave the window (threshold {threshold:e})")]
    WindowOverflow { mass: f64, threshold: f64 },

    #[error("bessel argument {0} is outside the working range |z| < 1e4")]
    ArgumentOutOfRange(f64),

    #[error("index {index} out of range (allowed {min}..={max})")]
    IndexOutOfRange { index: usize, min: usize, max: usize },

    #[error("p={p} and q={q} are not coprime")]
    NotCoprime { p: u64, q: u64 },

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("expected a propagator in the {expected} picture")]
    WrongPicture { expected: &'static str },

    #[error("eigenstate seed is empty or identically zero")]
    EmptySeed,

    #[error("empty range [{lo}, {hi}]")]
    EmptyRange { lo: f64, hi: f64 },

    #[error("lattice of dimension {dim} too small: edge mass {mass:e} exceeds {threshold:e}")]
    DimensionTooSmall { dim: usize, mass: f64, threshold: f64 },

    #[error("comparison window lacks margin: {0}")]
    InsufficientMargin(String),

    #[error("adaptive quadrature did not reach tolerance on [{a}, {b}]")]
    QuadratureFailed { a: f64, b: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Short kebab-case tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::GridTooSmall { .. } => "grid-too-small",
            Error::NonHermitian { .. } => "non-hermitian-input",
            Error::WindowOverflow { .. } => "window-overflow",
            Error::ArgumentOutOfRange(_) => "argument-out-of-range",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::NotCoprime { .. } => "not-coprime",
            Error::NegativeTime(_) => "negative-time",
            Error::WrongPicture { .. } => "wrong-picture",
            Error::EmptySeed => "empty-seed",
            Error::EmptyRange { .. } => "empty-range",
            Error::DimensionTooSmall { .. } => "dimension-too-small",
            Error::InsufficientMargin(_) => "insufficient-margin",
            Error::QuadratureFailed { .. } => "quadrature-failed",
            Error::InvalidParameter(_) => "invalid-parameter",
        }
    }
}
