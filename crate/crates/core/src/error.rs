use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mismatched Novikov variables: `{0}` vs `{1}`")]
    VariableMismatch(String, String),

    #[error("denominator vanishes at 0; no power-series expansion exists")]
    NotExpandable,

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid local model: {0}")]
    InvalidModel(String),

    #[error("twisted sector index {k} out of range for r = {r}")]
    SectorOutOfRange { r: u32, k: u32 },

    #[error("curve degree must be at least 1, got {0}")]
    NonPositiveDegree(i64),

    #[error("H*H requires global data: the untwisted triple integral is undefined on the non-compact local model")]
    RequiresGlobalData,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid ring data: {0}")]
    InvalidRing(String),

    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),

    #[error("label `{0}` is not covered by the correspondence")]
    MissingLabel(String),

    #[error("kappa = {kappa} exceeds the enumeration cap {cap}")]
    CapExceeded { kappa: usize, cap: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("point is not on the requested leaf (residual {residual:e} > {tol:e})")]
    OffLeaf { residual: f64, tol: f64 },

    #[error("rejection sampling budget of {0} draws exhausted")]
    BudgetExhausted(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
