//! Oracles shared by the integration tests. Nothing here calls the crate's
//! own inversion code.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

pub fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

pub fn p2(e: u64) -> BigUint {
    BigUint::one() << e
}

pub fn mersenne(n: u64) -> BigUint {
    p2(n) - 1u32
}

/// Least positive inverse of `d` modulo `2^n - 1` by the library's generic
/// `modinv`; `1` in the trivial ring.
pub fn oracle_inverse(d: &BigUint, n: u64) -> Option<BigUint> {
    if n == 1 {
        return Some(BigUint::one());
    }
    let m = mersenne(n);
    if (d % &m).is_zero() {
        return None;
    }
    d.modinv(&m)
}

pub fn oracle_gcd(d: &BigUint, n: u64) -> BigUint {
    d.gcd(&mersenne(n))
}

/// Order of 2 modulo odd `d > 1` by plain repeated doubling in `u64`.
pub fn oracle_order(d: u64) -> u64 {
    let mut x = 2 % d;
    let mut o = 1;
    while x != 1 {
        x = x * 2 % d;
        o += 1;
    }
    o
}

pub fn weight(x: &BigUint) -> u64 {
    x.count_ones()
}
