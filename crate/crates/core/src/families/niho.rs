//! Niho exponents on `F_(2^(4k+1))` and `F_(2^(4k+3))`.

use num_bigint::BigUint;

use super::{check_weight, closed_result, p2, Family};
use crate::error::{Error, Result};
use crate::inv::InverseResult;

/// Least inverse of the Niho exponent for `n = 4k+1`
/// (`d = 2^(2k) + 2^k - 1`) or `n = 4k+3` (`d = 2^(3k+2) + 2^(2k+1) - 1`).
pub fn niho_inverse(k: u64, n: u64) -> Result<InverseResult> {
    if k == 0 {
        return Err(Error::domain("niho needs k >= 1"));
    }
    let third = |e: u64| (p2(e) - 1u32) / 3u32;
    let even = k % 2 == 0;
    let (d, t, weight_num): (BigUint, BigUint, u64) = if n == 4 * k + 1 {
        let d = p2(2 * k) + p2(k) - 1u32;
        if even {
            let t = third(k) * (p2(3 * k + 1) + p2(k + 1) + 1u32) + p2(k) + p2(3 * k + 1);
            (d, t, 3 * n + 5)
        } else {
            let t = third(k - 1) * (p2(3 * k + 2) + p2(2 * k + 2) + 1u32)
                + p2(3 * k + 1)
                + p2(2 * k + 1)
                + p2(k - 1);
            (d, t, 3 * n + 9)
        }
    } else if n == 4 * k + 3 {
        let d = p2(3 * k + 2) + p2(2 * k + 1) - 1u32;
        if even {
            let t = third(k) * (p2(3 * k + 4) + p2(k + 2) + 2u32) + p2(3 * k + 3) + p2(k + 1);
            (d, t, 3 * n + 7)
        } else {
            let t = third(k + 1) * (p2(3 * k + 3) + p2(2 * k + 3) + 2u32) + p2(2 * k + 2);
            (d, t, 3 * n + 11)
        }
    } else {
        return Err(Error::domain(format!("niho needs n = 4k+1 or 4k+3, got k={k}, n={n}")));
    };
    let out = closed_result(Family::Niho, k, n, d, t)?;
    check_weight(Family::Niho, k, n, out.weight(), weight_num / 8)?;
    Ok(out)
}
