//! Exponents `2^k - 1`.

use num_bigint::BigUint;
use num_integer::Integer;

use super::{allones_predicate, check_weight, closed_result, p2, Family};
use crate::error::{Error, Result};
use crate::inv::InverseResult;
use crate::ring;

/// `sum_{i < k^-1 mod n} 2^(ki mod n)`, the least inverse of `2^k - 1`
/// modulo `2^n - 1`; its weight is `k^-1 mod n`.
pub fn allones_inverse(k: u64, n: u64) -> Result<InverseResult> {
    if k < 2 || n < 2 {
        return Err(Error::domain(format!("allones needs k, n >= 2, got k={k}, n={n}")));
    }
    let d = p2(k) - 1u32;
    if !allones_predicate(k, n) {
        let gcd = ring::gcd_with_modulus(&d, n)?;
        return Err(Error::NotInvertible { d, n, gcd });
    }
    let kinv = {
        let e = (k as i128).extended_gcd(&(n as i128));
        e.x.rem_euclid(n as i128) as u64
    };
    let t: BigUint = (0..kinv).map(|i| p2(((k as u128 * i as u128) % n as u128) as u64)).sum();
    let out = closed_result(Family::AllOnes, k, n, d, t)?;
    check_weight(Family::AllOnes, k, n, out.weight(), kinv)?;
    Ok(out)
}

/// Inverse of `2^(2k) - 1` modulo `2^(2k+1) - 1`, weight `2k`.
pub fn field_inverse(k: u64) -> Result<InverseResult> {
    if k == 0 {
        return Err(Error::domain("inverse family needs k >= 1"));
    }
    let mut out = allones_inverse(2 * k, 2 * k + 1)?;
    out.trace = vec![crate::inv::Step::ClosedForm { family: Family::FieldInverse, k, n: 2 * k + 1 }];
    Ok(out)
}
