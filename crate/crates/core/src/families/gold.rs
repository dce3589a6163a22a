//! Gold exponents `2^k + 1`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use super::{check_weight, closed_result, gold_predicate, p2, pair_structure, Family, PairStructure};
use crate::error::{Error, Result};
use crate::inv::{self, InverseResult};
use crate::ring::{self, MersenneRing};

/// `(2^(k(n+1)) - 1) / (2^(2k) - 1) = sum_{j=0}^{(n-1)/2} 2^(2jk)`, not
/// reduced. For odd `n` coprime to `k` it is congruent to the inverse of
/// `2^k + 1` modulo `2^n - 1`.
pub fn nyberg_form(k: u64, n: u64) -> Result<BigUint> {
    if k == 0 || n % 2 == 0 {
        return Err(Error::domain(format!("nyberg form needs k >= 1 and odd n, got k={k}, n={n}")));
    }
    let num = p2(k * (n + 1)) - 1u32;
    let den = p2(2 * k) - 1u32;
    let (q, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    Ok(q)
}

/// `Inv_(2^k+1)(r)` for `1 <= r < 2k`.
fn base(k: u64, r: u64) -> Result<BigUint> {
    if r == 1 {
        return Ok(BigUint::from(1u32));
    }
    if r % 2 == 1 && r.gcd(&k) == 1 {
        // The Nyberg sum with exponents taken mod r.
        let mut acc = BigUint::zero();
        for j in 0..=(r - 1) / 2 {
            acc += p2((2 * j * k) % r);
        }
        return Ok(ring::fold(&acc, r));
    }
    Ok(inv::invert(&(p2(k) + 1u32), r)?.value.into_value())
}

/// `(r, Inv(r), S(r))` with `r` the least positive residue of `n` mod `2k`.
fn parts(k: u64, n: u64) -> Result<(u64, BigUint, BigUint)> {
    let r = n % (2 * k);
    let a = base(k, r)?;
    let s = (&(p2(k) + 1u32) * &a - 1u32) / (p2(r) - 1u32);
    Ok((r, a, s))
}

/// Least inverse of `2^k + 1` modulo `2^n - 1`, lifted from `n mod 2k`.
/// Its weight is checked against `(n - gcd(n, k) + 2) / 2`.
pub fn gold_inverse(k: u64, n: u64) -> Result<InverseResult> {
    if k == 0 || n == 0 {
        return Err(Error::domain("gold needs k, n >= 1"));
    }
    let d = p2(k) + 1u32;
    if !gold_predicate(k, n) {
        let gcd = ring::gcd_with_modulus(&d, n)?;
        return Err(Error::NotInvertible { d, n, gcd });
    }
    if n == 1 {
        return closed_result(Family::Gold, k, n, d, BigUint::from(1u32));
    }
    let (r, a, s) = parts(k, n)?;
    let t = if r == n {
        a
    } else {
        let tail = (p2(k) - 1u32) * (p2(n - r) - 1u32) / (p2(2 * k) - 1u32);
        (a << (n - r)) + (s - 1u32) * tail
    };
    let out = closed_result(Family::Gold, k, n, d, t)?;
    let g = n.gcd(&k);
    check_weight(Family::Gold, k, n, out.weight(), (n - g + 2) / 2)?;
    Ok(out)
}

/// `g_n = a_r | w_k | w̄_k | ...` with `w_k` representing `S(r) - 2`.
pub fn gold_structure(k: u64, n: u64) -> Result<PairStructure> {
    let inverse = gold_inverse(k, n)?;
    if n == 1 {
        return Err(Error::domain("no structure in the trivial ring"));
    }
    let (r, a, s) = parts(k, n)?;
    pair_structure(Family::Gold, k, r, &a, &(s - 2u32), k, &inverse)
}

/// Result of checking `2^k + 1 ≡ 2^k (2^r + 1) (mod 2^(k+r) - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftClaim {
    pub k: u64,
    pub r: u64,
    pub congruent: bool,
    /// Weights of the inverses of `2^r + 1` and `2^k + 1` modulo
    /// `2^(k+r) - 1`, when both exist.
    pub weights: Option<(u64, u64)>,
}

impl ShiftClaim {
    /// The congruence holds and, when the inverses exist, so does the
    /// weight equality.
    pub fn holds(&self) -> bool {
        self.congruent && self.weights.map_or(true, |(a, b)| a == b)
    }
}

pub fn gold_shift_claim(k: u64, r: u64) -> Result<ShiftClaim> {
    if r >= k {
        return Err(Error::domain(format!("shift claim needs 0 <= r < k, got k={k}, r={r}")));
    }
    let m = k + r;
    let ring = MersenneRing::new(m)?;
    let lhs = ring.reduce(&(p2(k) + 1u32));
    let rhs = ring.reduce(&(p2(k) * (p2(r) + 1u32)));
    let congruent = lhs == rhs;
    let small = inv::invert(&(p2(r) + 1u32), m);
    let large = inv::invert(&(p2(k) + 1u32), m);
    let weights = match (small, large) {
        (Ok(a), Ok(b)) => Some((a.weight(), b.weight())),
        (Err(Error::NotInvertible { .. }), Err(Error::NotInvertible { .. })) => None,
        (a, b) => {
            return Err(Error::invariant(format!(
                "k={k} r={r}: one of 2^r+1, 2^k+1 is invertible mod 2^{m}-1 and the other is not ({:?}, {:?})",
                a.map(|x| x.value),
                b.map(|x| x.value)
            )))
        }
    };
    Ok(ShiftClaim { k, r, congruent, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gold_examples() {
        for n in (1..80).step_by(2) {
            let t = gold_inverse(1, n).unwrap();
            assert_eq!(t.value.value(), &((p2(n + 1) - 1u32) / 3u32), "n={n}");
        }
        assert_eq!(gold_inverse(2, 5).unwrap().weight(), 3);
        assert_eq!(gold_inverse(3, 9).unwrap().weight(), 4);
        assert!(matches!(gold_inverse(2, 4), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn nyberg_least_residue_only_for_k1() {
        for n in (3..30).step_by(2) {
            for k in 1..6u64 {
                if n.gcd(&k) != 1 {
                    continue;
                }
                let t = gold_inverse(k, n).unwrap().value.into_value();
                let form = nyberg_form(k, n).unwrap();
                assert_eq!(ring::fold(&form, n), t);
                assert_eq!(form == t, k == 1, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn structure_example() {
        let s = gold_structure(2, 13).unwrap();
        assert_eq!(s.r, 1);
        assert_eq!(s.pairs, 3);
        assert_eq!(s.bits.weight(), s.a_r.weight() + (13 - 1) / 2);
    }

    #[test]
    fn shift_claim_examples() {
        let c = gold_shift_claim(3, 1).unwrap();
        assert!(c.congruent);
        assert_eq!(c.weights, None);
        let c = gold_shift_claim(2, 0).unwrap();
        assert!(c.holds());
        let c = gold_shift_claim(5, 3).unwrap();
        assert!(c.holds());
        assert!(gold_shift_claim(3, 3).is_err());
    }
}
