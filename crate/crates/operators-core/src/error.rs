use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },
    #[error("degenerate detuning: delta must be nonzero")]
    DegenerateDetuning,
    #[error("operator not representable in qubit subspace {0}")]
    Subspace(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
