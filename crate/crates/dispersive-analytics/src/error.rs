use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Operators(#[from] operators_core::Error),
    #[error("`{name}` = {value:.3e} outside the supported range [{lo:.0e}, {hi:.0e}]")]
    OutOfRange { name: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("unknown switching-rate variant `{0}`")]
    UnknownVariant(String),
    #[error("outside the regime of validity: {0}")]
    RegimeInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
