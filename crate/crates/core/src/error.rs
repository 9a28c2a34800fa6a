use thiserror::Error;

/// Errors across the whole probe/estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite state")]
    NonFiniteState,

    #[error("degenerate covariance (det = {0})")]
    DegenerateCovariance(f64),

    #[error("unphysical state (defect = {0})")]
    UnphysicalState(f64),

    #[error("purity-term singularity")]
    PurityTermSingularity,

    #[error("uninformative family")]
    UninformativeFamily,

    #[error("parameter {value} outside family domain ({lo}, {hi})")]
    OutsideDomain { value: f64, lo: f64, hi: f64 },

    #[error("broken PT phase (epsilon = {0} > 0.5)")]
    BrokenPhase(f64),

    #[error("probe undefined at or beyond exceptional point (epsilon = {0})")]
    ProbeUndefined(f64),

    #[error("Hermitian baseline undefined (Omega_Herm non-positive at omega = {0})")]
    BaselineUndefined(f64),

    #[error("zero-cost baseline (epsilon = 0)")]
    ZeroCostBaseline,

    #[error("Dyson map singular at these parameters")]
    DysonSingular,

    #[error("Dyson map numerically unbounded at this truncation; reduce |lambda| or N")]
    DysonUnbounded,

    #[error("truncation dimension {0} too small (need >= 8)")]
    TruncationTooSmall(usize),

    #[error("alpha must be nonzero")]
    ZeroAlpha,

    #[error("counterpart not Hermitian within tolerance (residual = {0})")]
    NotHermitized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
