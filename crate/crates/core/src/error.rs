use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: need at least {min}")]
    InvalidDimension { dim: usize, min: usize },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("non-finite entry encountered in {0}")]
    NonFinite(&'static str),

    #[error("state not normalized: norm² = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("nonlinear function vanishes on the support at (na, nb) = ({na}, {nb})")]
    DivisionByZero { na: usize, nb: usize },

    #[error("disentanglement singular: denominator vanishes at θ = {theta_re} + {theta_im}i")]
    DisentangleSingularity { theta_re: f64, theta_im: f64 },

    #[error("parameter out of numeric range: {0}")]
    Range(String),

    #[error("grid too narrow: normalization deficit {deficit:e}")]
    NormalizationDeficit { deficit: f64 },

    #[error("eigen-solver failure: {0}")]
    Eigen(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
