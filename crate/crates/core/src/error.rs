use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probabilities sum to {total}, which deviates from 1 by more than 1e-6")]
    Normalization { total: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("family cannot produce a distribution for n = {0}")]
    UnsupportedN(u64),

    #[error("inconsistent input: {0}")]
    Consistency(String),

    #[error("no symbol appears exactly {0} times")]
    EmptyFrequencyClass(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature did not reach tolerance {tol:e} on [{a}, {b}] for k = {k}")]
    Quadrature { k: usize, a: f64, b: f64, tol: f64 },

    #[error("enumeration of {alphabet}^{n} strings exceeds the cap of {cap}")]
    TooLarge { alphabet: u64, n: u64, cap: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("input is not valid UTF-8 at byte offset {offset}")]
    Utf8 { offset: u64 },
}
