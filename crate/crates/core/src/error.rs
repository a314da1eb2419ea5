use thiserror::Error;

use crate::state::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {residual:e}")]
    NonHermitianInput { residual: f64 },

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("photon number must be at least 1, got {0}")]
    InvalidN(usize),

    #[error("coefficients not normalized: sum |c_k|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("state failed validation: {0}")]
    ValidationFailed(Box<ValidationReport>),

    #[error(
        "dephasing rates must be finite and non-negative (gamma1 = {gamma1}, gamma2 = {gamma2})"
    )]
    InvalidRates { gamma1: f64, gamma2: f64 },

    #[error("rate must be finite and positive, got {0}")]
    InvalidRate(f64),

    #[error("time must be finite and non-negative, got {0}")]
    NegativeTime(f64),

    #[error("RK4 step too large: h * r_max = {h_rate} exceeds {limit}")]
    StepTooLarge { h_rate: f64, limit: f64 },

    #[error("time grid is empty")]
    EmptyGrid,

    #[error("time grid must be non-negative and increasing (entry {index} = {value})")]
    BadGrid { index: usize, value: f64 },

    #[error("{samples} phase samples is below the 4N = {required} minimum")]
    UndersampledPhase { samples: usize, required: usize },

    #[error("critical visibility must lie in (0, 1), got {0}")]
    InvalidVCrit(f64),

    #[error("visibility curve never crosses {v_crit} on the supplied grid")]
    NoCrossing { v_crit: f64 },
}
