use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid piecewise monomial: {0}")]
    InvalidPwm(String),
    #[error("not invertible: slope on segment {0} is zero")]
    NotInvertible(usize),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid morphism profile: {0}")]
    InvalidProfile(String),
    #[error("invalid equation profile: {0}")]
    InvalidEquationProfile(String),
    #[error("morphism profile is not flagged étale")]
    NotEtale,
    #[error("parameter out of regime: {0}")]
    OutOfRegime(String),
    #[error("invalid multiradius: {0}")]
    InvalidMultiRadius(String),
    #[error("invalid fiber configuration: {0}")]
    InvalidFiber(String),
    #[error("invalid ramification data: {0}")]
    InvalidRamification(String),
    #[error("invalid direction data: {0}")]
    InvalidDirection(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
