use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Operators(#[from] operators_core::Error),
    #[error("invalid trajectory config: {0}")]
    InvalidConfig(String),
    #[error("Bayesian weights underflowed at step {step} (readout {readout})")]
    Underflow { step: u64, readout: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
