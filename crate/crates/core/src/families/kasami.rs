//! Kasami exponents `2^(2k) - 2^k + 1`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use super::{check_weight, closed_result, gold_predicate, kasami_predicate, p2, pair_structure, Family, PairStructure};
use crate::error::{Error, Result};
use crate::inv::{self, InverseResult};
use crate::ring::{self, MersenneRing, Residue};

fn kasami_d(k: u64) -> BigUint {
    p2(2 * k) - p2(k) + 1u32
}

/// `(r, Inv(r), S(r))` with `r` the least positive residue of `n` mod `6k`.
fn parts(k: u64, n: u64) -> Result<(u64, BigUint, BigUint)> {
    let d = kasami_d(k);
    let r = n % (6 * k);
    let a = inv::invert(&d, r)?.value.into_value();
    let s = (&d * &a - 1u32) / (p2(r) - 1u32);
    Ok((r, a, s))
}

fn check_args(k: u64, n: u64) -> Result<BigUint> {
    if k == 0 || n == 0 {
        return Err(Error::domain("kasami needs k, n >= 1"));
    }
    let d = kasami_d(k);
    if !kasami_predicate(k, n) {
        let gcd = ring::gcd_with_modulus(&d, n)?;
        return Err(Error::NotInvertible { d, n, gcd });
    }
    Ok(d)
}

/// Least inverse of the Kasami exponent modulo `2^n - 1`, lifted from
/// `n mod 6k`. Its weight is checked against `wt(Inv(r)) + (n - r)/2`.
pub fn kasami_inverse(k: u64, n: u64) -> Result<InverseResult> {
    let d = check_args(k, n)?;
    if n == 1 {
        return closed_result(Family::Kasami, k, n, d, BigUint::one());
    }
    let (r, a, s) = parts(k, n)?;
    let wt_a = a.count_ones();
    let t = if r == n {
        a
    } else {
        (a << (n - r)) + (s - 1u32) * ((p2(n - r) - 1u32) / &d)
    };
    let out = closed_result(Family::Kasami, k, n, d, t)?;
    check_weight(Family::Kasami, k, n, out.weight(), wt_a + (n - r) / 2)?;
    Ok(out)
}

/// `g_n = a_r | w_3k | w̄_3k | ...` with `w_3k` representing
/// `(S(r) - 1)(2^k + 1) - 1`.
pub fn kasami_structure(k: u64, n: u64) -> Result<PairStructure> {
    let inverse = kasami_inverse(k, n)?;
    if n == 1 {
        return Err(Error::domain("no structure in the trivial ring"));
    }
    let (r, a, s) = parts(k, n)?;
    let w = (s - 1u32) * (p2(k) + 1u32) - 1u32;
    pair_structure(Family::Kasami, k, r, &a, &w, 3 * k, &inverse)
}

/// The special moduli with explicit Kasami inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KasamiCase {
    /// `n ≡ k/b (mod 6k)` with `b | k`.
    A { b: u64, n: u64 },
    /// `n = k - 1`, `k` even.
    B,
    /// `n = k + 1`, `k` even.
    C,
    /// `n = 2k`, `k` even.
    D,
    /// `n = 3k/b` with `b | k` and `3 ∤ b`.
    E { b: u64 },
    /// `n = 4k`, `k` even.
    F,
    /// `n = 5k`.
    G,
    /// `n = 6k - 1`.
    H,
}

impl fmt::Display for KasamiCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KasamiCase::A { b, n } => write!(f, "a(b={b},n={n})"),
            KasamiCase::B => f.write_str("b"),
            KasamiCase::C => f.write_str("c"),
            KasamiCase::D => f.write_str("d"),
            KasamiCase::E { b } => write!(f, "e(b={b})"),
            KasamiCase::F => f.write_str("f"),
            KasamiCase::G => f.write_str("g"),
            KasamiCase::H => f.write_str("h"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KasamiSpecial {
    pub k: u64,
    pub case: KasamiCase,
    pub n: u64,
    pub value: Residue,
}

/// Evaluates one of the explicit special-case inverses and checks it
/// against extended Euclid before returning it.
pub fn kasami_special_inverse(k: u64, case: KasamiCase) -> Result<KasamiSpecial> {
    if k == 0 {
        return Err(Error::domain("kasami needs k >= 1"));
    }
    let d = kasami_d(k);
    let need = |ok: bool, rule: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("kasami case {case} needs {rule}, got k={k}")))
        }
    };
    let third = |x: BigUint| x / 3u32;
    let (n, t) = match case {
        KasamiCase::A { b, n } => {
            need(b >= 1 && k % b == 0, "b dividing k")?;
            let kb = k / b;
            need(n >= kb && (n - kb) % (6 * k) == 0, "n ≡ k/b (mod 6k)")?;
            let c = p2(k) * (p2(k) - 1u32) / (p2(kb) - 1u32) - 1u32;
            (n, p2(n - kb) + c * ((p2(n - kb) - 1u32) / &d))
        }
        KasamiCase::B => {
            need(k % 2 == 0, "k even")?;
            (k - 1, third(p2(k) - 1u32))
        }
        KasamiCase::C => {
            need(k % 2 == 0, "k even")?;
            (k + 1, third(p2(k + 2) - 1u32) + 1u32)
        }
        KasamiCase::D => {
            need(k % 2 == 0, "k even")?;
            (2 * k, (p2(k) + 2u32) * third(p2(k) - 1u32) + 1u32)
        }
        KasamiCase::E { b } => {
            need(b >= 1 && k % b == 0 && b % 3 != 0, "b dividing k with gcd(b, 3) = 1")?;
            let kb = k / b;
            (3 * kb, p2(3 * kb - 1) + p2((b % 3) * kb - 1))
        }
        KasamiCase::F => {
            need(k % 2 == 0, "k even")?;
            let lead = p2(0) + p2(k + 1) + p2(2 * k) + p2(3 * k + 1);
            (4 * k, lead * third(p2(k) - 1u32) + p2(k))
        }
        KasamiCase::G => (5 * k, p2(5 * k) - p2(4 * k) + p2(2 * k) + p2(k) - 1u32),
        KasamiCase::H => (6 * k - 1, (p2(3 * k) - 1u32) * (p2(k) + 1u32)),
    };
    let ring = MersenneRing::new(n)?;
    let oracle = ring::euclid_inverse(&d, &ring)?;
    if oracle.value() != &t {
        return Err(Error::invariant(format!(
            "kasami case {case} with k={k}: formula gives {t}, inverse mod 2^{n}-1 is {oracle}"
        )));
    }
    Ok(KasamiSpecial { k, case, n, value: oracle })
}

/// Checks `Inv_kasami(n) ≡ (2^k + 1) Inv_(2^(3k)+1)(n) (mod 2^n - 1)` for
/// `n / gcd(n, k)` odd.
pub fn kasami_gold_bridge(k: u64, n: u64) -> Result<bool> {
    if k == 0 || n == 0 || !gold_predicate(k, n) {
        return Err(Error::domain(format!("bridge needs n/gcd(n,k) odd, got k={k}, n={n}")));
    }
    let ring = MersenneRing::new(n)?;
    let lhs = inv::invert(&kasami_d(k), n)?.value;
    let gold3 = inv::invert(&(p2(3 * k) + 1u32), n)?.value;
    if n == 1 {
        return Ok(lhs == gold3);
    }
    let rhs = ring.mul(&ring.reduce(&(p2(k) + 1u32)), &gold3)?;
    Ok(lhs == rhs)
}

/// Outcome of the exploratory search for `Inv(5k/b) ≡ 2^u (2^(2v) - 2^v + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureReport {
    pub k: u64,
    pub b: u64,
    pub n: u64,
    /// `None` when the exponent is not invertible modulo `2^n - 1`.
    pub inverse: Option<BigUint>,
    /// All `(u, v)` with `0 <= u < n`, `1 <= v < n` that match.
    pub matches: Vec<(u64, u64)>,
}

/// Searches for Kasami-shaped representatives of `Inv_kasami(5k/b)`. This
/// reports what it finds and never fails on a mismatch.
pub fn kasami_conjecture_probe(k: u64, b: u64) -> Result<ConjectureReport> {
    if k == 0 || b == 0 || k % b != 0 || b % 5 == 0 {
        return Err(Error::domain(format!("probe needs b | k and gcd(b, 5) = 1, got k={k}, b={b}")));
    }
    let n = 5 * k / b;
    let d = kasami_d(k);
    let inverse = match inv::invert(&d, n) {
        Ok(r) => r.value.into_value(),
        Err(Error::NotInvertible { .. }) => {
            return Ok(ConjectureReport { k, b, n, inverse: None, matches: Vec::new() })
        }
        Err(e) => return Err(e),
    };
    let ring = MersenneRing::new(n)?;
    let target = ring.reduce(&inverse);
    let mut matches = Vec::new();
    for v in 1..n.max(2) {
        let base = ring.reduce(&kasami_d(v));
        for u in 0..n {
            if ring.rotate_left(&base, u)? == target {
                matches.push((u, v));
            }
        }
    }
    Ok(ConjectureReport { k, b, n, inverse: Some(inverse), matches })
}
