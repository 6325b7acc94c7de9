use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} exceeds truncation max_index {max_index}")]
    Truncation { index: u32, max_index: u32 },
    #[error("invalid truncation: max_index and max_level must both be at least 1")]
    EmptyTruncation,
    #[error("invalid index set: {0}")]
    IndexSet(String),
    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("evaluation at a pole: z = {0}")]
    Pole(String),
    #[error("reciprocal Cauchy transform undefined: G vanishes at z = {0}")]
    ZeroDivision(String),
    #[error("numerical resolution failure: {0}")]
    Resolution(String),
    #[error("structural violation: {0}")]
    Structure(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("integer overflow in exact computation: {0}")]
    Overflow(&'static str),
    #[error("no identity polynomial within degree bound {bound} (minimal degree found: {minimal:?})")]
    ConjectureBound { n: usize, bound: usize, minimal: Option<usize> },
}

/// `Err(CapExceeded)` when `value > cap`.
pub fn check_cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}
