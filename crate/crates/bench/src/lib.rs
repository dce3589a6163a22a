//! Benchmark workloads: fixed `(d, n)` pairs where `d` is invertible.

use mersinv_core::{ring::gcd_with_modulus, BigUint};

/// `n` values near `target`, stepping up until `d` is invertible.
pub fn invertible_near(d: u64, target: u64) -> u64 {
    let d = BigUint::from(d);
    (target..)
        .find(|&n| gcd_with_modulus(&d, n).map(|g| g == BigUint::from(1u32)).unwrap_or(false))
        .expect("some n is coprime")
}

/// Small odd exponents used for the scaling sweeps.
pub const EXPONENTS: [u64; 4] = [13, 57, 241, 993];

/// Field sizes for the scaling sweeps.
pub const SIZES: [u64; 4] = [1_000, 3_000, 10_000, 30_000];
