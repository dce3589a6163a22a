//! Welch exponents `2^k + 3` on `F_(2^(2k+1))`.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{check_weight, closed_result, p2, Family};
use crate::bitseq::BitSeq;
use crate::error::{Error, Result};
use crate::inv::{InverseResult, Step};
use crate::ring::{self, MersenneRing};

/// One residue class of `k` mod 8:
/// `t = sum 2^(k + off) + (2^(k-j) - 1)/17 * (a 2^(k+c) + b)`.
struct Branch {
    offsets: &'static [i64],
    j: u64,
    a: u32,
    c: u64,
    b: u32,
    extra_weight: u64,
}

// Offsets are relative to `k`; `ZERO` marks the constant term `2^0`.
const ZERO: i64 = i64::MIN;

const BRANCHES: [Branch; 8] = [
    Branch { offsets: &[0], j: 0, a: 13, c: 1, b: 7, extra_weight: 1 },
    Branch { offsets: &[-1, 0], j: 1, a: 7, c: 2, b: 1, extra_weight: 1 },
    Branch { offsets: &[ZERO, 1], j: 2, a: 5, c: 3, b: 16, extra_weight: 0 },
    Branch { offsets: &[0, 2, 3], j: 3, a: 7, c: 5, b: 8, extra_weight: 0 },
    Branch { offsets: &[-4, -2, -1, 4], j: 4, a: 9, c: 5, b: 3, extra_weight: 0 },
    Branch { offsets: &[ZERO, -3, -1, 0, 1], j: 5, a: 1, c: 6, b: 12, extra_weight: 0 },
    Branch { offsets: &[-5, -4, -2, 3, 4, 5, 6], j: 6, a: 16, c: 7, b: 10, extra_weight: 1 },
    Branch { offsets: &[-5, -4, -3, -2, 1, 2, 4, 7], j: 7, a: 10, c: 8, b: 4, extra_weight: 1 },
];

fn exponent(k: u64, off: i64) -> Option<u64> {
    if off == ZERO {
        Some(0)
    } else {
        u64::try_from(k as i64 + off).ok()
    }
}

/// Whether the branch for `k mod 8` is literally defined at `k`: every power
/// has a nonnegative exponent and the division by 17 is exact.
pub fn welch_branch_valid(k: u64) -> bool {
    let br = &BRANCHES[(k % 8) as usize];
    k >= 1
        && k >= br.j
        && br.offsets.iter().all(|&o| exponent(k, o).is_some())
        && ((p2(k - br.j) - 1u32) % 17u32).is_zero()
}

fn branch_value(k: u64) -> BigUint {
    let br = &BRANCHES[(k % 8) as usize];
    let head: BigUint = br.offsets.iter().map(|&o| p2(exponent(k, o).unwrap())).sum();
    let q = (p2(k - br.j) - 1u32) / 17u32;
    head + q * (p2(k + br.c) * br.a + br.b)
}

/// Least inverse of `2^k + 3` modulo `2^(2k+1) - 1`. Outside the range where
/// the branch formula is defined the extended Euclid result is returned and
/// the trace records the fallback.
pub fn welch_inverse(k: u64) -> Result<InverseResult> {
    if k == 0 {
        return Err(Error::domain("welch needs k >= 1"));
    }
    let n = 2 * k + 1;
    let d = p2(k) + 3u32;
    if !welch_branch_valid(k) {
        let value = ring::euclid_inverse(&d, &MersenneRing::new(n)?)?;
        return Ok(InverseResult { d: d.clone(), n, value, trace: vec![Step::OracleFallback { d, n }] });
    }
    let out = closed_result(Family::Welch, k, n, d, branch_value(k))?;
    let want = k + BRANCHES[(k % 8) as usize].extra_weight;
    check_weight(Family::Welch, k, n, out.weight(), want)?;
    Ok(out)
}

/// `t_r = 11000011 | t_(r-1) | 01101001` from `t_0 = 1`; the bits of the
/// inverse for `k = 8r`.
pub fn welch_recurrence_bits(r: u64) -> BitSeq {
    let head: BitSeq = "11000011".parse().expect("literal");
    let tail: BitSeq = "01101001".parse().expect("literal");
    let mut t: BitSeq = "1".parse().expect("literal");
    for _ in 0..r {
        t = BitSeq::concat_all([&head, &t, &tail]);
    }
    t
}

/// Per-`k` outcome of the branch formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WelchValidity {
    pub k: u64,
    pub residue: u64,
    pub valid: bool,
    /// The formula value equals the Euclid inverse (only meaningful when valid).
    pub matches_oracle: bool,
}

/// Evaluates every branch for `1 <= k <= kmax` against extended Euclid.
pub fn welch_validity_scan(kmax: u64) -> Result<Vec<WelchValidity>> {
    (1..=kmax)
        .map(|k| {
            let valid = welch_branch_valid(k);
            let matches_oracle = valid && {
                let n = 2 * k + 1;
                let oracle = ring::euclid_inverse(&(p2(k) + 3u32), &MersenneRing::new(n)?)?;
                oracle.value() == &branch_value(k)
            };
            Ok(WelchValidity { k, residue: k % 8, valid, matches_oracle })
        })
        .collect()
}
