use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Operators(#[from] operators_core::Error),
    #[error("step-size guard violated: kappa*dt*n_cutoff = {value:.3e} must be below {bound}")]
    StepSizeGuard { value: f64, bound: f64 },
    #[error("dt = {dt:.3e} exceeds the stability limit {limit:.3e} (0.02 of the fastest timescale)")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("photon cutoff not converged: raising it by 4 shifts observables by {shift:.3e} > {tol:.0e}; increase n_cutoff")]
    CutoffNotConverged { shift: f64, tol: f64 },
    #[error("insufficient decay signal for telegraph fit: {0}")]
    FitInsufficient(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
