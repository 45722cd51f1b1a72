//! Error type shared across the crate.
//!
//! The three variants map onto the CLI exit codes: usage errors (1),
//! domain errors such as non-primitive input (2), and arithmetic
//! overflow (3). Overflow is always reported explicitly; no operation
//! silently wraps.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The caller violated a precondition (empty input, bad grid, guard
    /// exceeded, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// The input is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// 64-bit signed arithmetic overflowed.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
