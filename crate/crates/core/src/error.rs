use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `gcd(d, 2^n - 1) != 1`.
    #[error("{d} is not invertible modulo 2^{n}-1 (gcd = {gcd})")]
    NotInvertible { d: BigUint, n: u64, gcd: BigUint },

    /// An argument falls outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two residues from different rings were combined.
    #[error("ring mismatch: 2^{left}-1 vs 2^{right}-1")]
    RingMismatch { left: u64, right: u64 },

    /// A value could not be parsed from its textual form.
    #[error("parse error: {0}")]
    Parse(String),

    /// An internal identity failed to hold. Always a bug, never bad input.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
