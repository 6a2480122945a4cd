use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("{0}")]
    InvalidInput(String),
    /// `Γ_sw t` too large for the few-jump expansion, or weights outside [0, 1].
    #[error("jump weights invalid: {0}")]
    Weights(String),
    #[error("no samples to histogram")]
    Empty,
}

pub type Result<T> = std::result::Result<T, Error>;
