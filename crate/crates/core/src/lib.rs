//! Exact arithmetic and fast multiplicative inversion in the ring of integers
//! modulo `2^n - 1`.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`] holds the modulus context, canonical residues, the order of 2
//!   modulo `d` and the extended-Euclid inversion oracle.
//! * [`bitseq`] is the fixed-length MSB-first bit sequence used to state and
//!   check the concatenation structure of inverses.
//! * [`inv`] is the general theory of `Inv_d(n)`: reflection, lifting by the
//!   order of 2, concatenation structure, and the recursive inversion
//!   algorithm.
//! * [`families`] catalogues the APN exponent families and their closed-form
//!   inverses and weight laws.
//! * [`verify`] is small-field ground truth (APN and AB checks over
//!   `GF(2^n)` for `n <= 14`).
//! * [`tables`], [`record`], [`repr`] and [`perf`] are the output, fixture and
//!   timing plumbing shared by the CLI and the test suites.

pub mod bitseq;
pub mod error;
pub mod families;
pub mod inv;
pub mod perf;
pub mod record;
pub mod repr;
pub mod ring;
pub mod tables;
pub mod verify;

pub use bitseq::BitSeq;
pub use error::{Error, Result};
pub use families::{ExponentSpec, Family};
pub use inv::{invert, InverseResult, Step};
pub use ring::{euclid_inverse, order_of_two, MersenneRing, Residue};

pub use num_bigint::BigUint;
