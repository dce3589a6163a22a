//! Dobbertin exponents `2^(4k) + 2^(3k) + 2^(2k) + 2^k - 1` on `F_(2^(5k))`.

use num_bigint::BigUint;

use super::{check_weight, closed_result, p2, Family};
use crate::error::{Error, Result};
use crate::inv::InverseResult;

fn check_odd(k: u64) -> Result<()> {
    if k % 2 == 0 {
        return Err(Error::domain(format!("dobbertin needs odd k, got k={k}")));
    }
    Ok(())
}

/// Least inverse modulo `2^(5k) - 1` for odd `k`, with weight `(5k+3)/2`.
pub fn dobbertin_inverse(k: u64) -> Result<InverseResult> {
    check_odd(k)?;
    let n = 5 * k;
    let d = p2(4 * k) + p2(3 * k) + p2(2 * k) + p2(k) - 1u32;
    let geo = (p2(5 * k) - 1u32) / (p2(k) - 1u32);
    let t = (geo * ((p2(k + 1) - 1u32) / 3u32) - 1u32) >> 1;
    let out = closed_result(Family::Dobbertin, k, n, d, t)?;
    check_weight(Family::Dobbertin, k, n, out.weight(), (5 * k + 3) / 2)?;
    Ok(out)
}

/// `2t = sum_{i=0}^{4} sum_{j=0}^{(k-1)/2} 2^(ik + 2j) - 1`.
pub fn dobbertin_doubled(k: u64) -> Result<BigUint> {
    check_odd(k)?;
    let mut acc = BigUint::from(0u32);
    for i in 0..5 {
        for j in 0..=(k - 1) / 2 {
            acc += p2(i * k + 2 * j);
        }
    }
    Ok(acc - 1u32)
}
