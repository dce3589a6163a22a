//! The classical APN exponent families, their invertibility conditions and
//! closed-form inverses.
//!
//! Parameters follow one convention per family:
//!
//! | family      | exponent                         | field size           |
//! |-------------|----------------------------------|----------------------|
//! | `gold`      | `2^k + 1`                        | any `n`              |
//! | `kasami`    | `2^(2k) - 2^k + 1`               | any `n`              |
//! | `welch`     | `2^k + 3`                        | `n = 2k + 1`         |
//! | `niho`      | `2^(2k) + 2^k - 1`               | `n = 4k + 1`         |
//! |             | `2^(3k+2) + 2^(2k+1) - 1`        | `n = 4k + 3`         |
//! | `inverse`   | `2^(2k) - 1`                     | `n = 2k + 1`         |
//! | `dobbertin` | `2^(4k) + 2^(3k) + 2^(2k) + 2^k - 1` | `n = 5k`         |
//! | `allones`   | `2^k - 1`                        | any `n`              |

mod allones;
mod dobbertin;
mod gold;
mod kasami;
mod niho;
mod welch;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};
use crate::inv::{InverseResult, Step};
use crate::record::Record;
use crate::ring::{self, Residue};

pub use allones::{allones_inverse, field_inverse};
pub use dobbertin::{dobbertin_doubled, dobbertin_inverse};
pub use gold::{gold_inverse, gold_shift_claim, gold_structure, nyberg_form, ShiftClaim};
pub use kasami::{
    kasami_conjecture_probe, kasami_gold_bridge, kasami_inverse, kasami_special_inverse,
    kasami_structure, ConjectureReport, KasamiCase, KasamiSpecial,
};
pub use niho::niho_inverse;
pub use welch::{welch_branch_valid, welch_inverse, welch_recurrence_bits, welch_validity_scan, WelchValidity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Gold,
    Kasami,
    Welch,
    Niho,
    FieldInverse,
    Dobbertin,
    AllOnes,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Gold,
        Family::Kasami,
        Family::Welch,
        Family::Niho,
        Family::FieldInverse,
        Family::Dobbertin,
        Family::AllOnes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gold => "gold",
            Family::Kasami => "kasami",
            Family::Welch => "welch",
            Family::Niho => "niho",
            Family::FieldInverse => "inverse",
            Family::Dobbertin => "dobbertin",
            Family::AllOnes => "allones",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family `{s}`")))
    }
}

pub(crate) fn p2(e: u64) -> BigUint {
    BigUint::one() << e
}

/// A family member with its parameters resolved to a concrete exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSpec {
    family: Family,
    k: u64,
    n: u64,
    d: BigUint,
}

impl ExponentSpec {
    pub fn new(family: Family, k: u64, n: u64) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::domain("family parameters k and n must be positive"));
        }
        let need = |ok: bool, rule: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::domain(format!("{family} needs {rule}, got k={k}, n={n}")))
            }
        };
        let d = match family {
            Family::Gold => p2(k) + 1u32,
            Family::Kasami => p2(2 * k) - p2(k) + 1u32,
            Family::Welch => {
                need(n == 2 * k + 1, "n = 2k+1")?;
                p2(k) + 3u32
            }
            Family::Niho => {
                need(n == 4 * k + 1 || n == 4 * k + 3, "n = 4k+1 or n = 4k+3")?;
                if n == 4 * k + 1 {
                    p2(2 * k) + p2(k) - 1u32
                } else {
                    p2(3 * k + 2) + p2(2 * k + 1) - 1u32
                }
            }
            Family::FieldInverse => {
                need(n == 2 * k + 1, "n = 2k+1")?;
                p2(2 * k) - 1u32
            }
            Family::Dobbertin => {
                need(n == 5 * k, "n = 5k")?;
                p2(4 * k) + p2(3 * k) + p2(2 * k) + p2(k) - 1u32
            }
            Family::AllOnes => {
                need(k >= 2, "k >= 2")?;
                p2(k) - 1u32
            }
        };
        if ring::fold(&d, n).is_zero() {
            return Err(Error::domain(format!(
                "{family} exponent {d} with k={k} is 0 modulo 2^{n}-1"
            )));
        }
        Ok(ExponentSpec { family, k, n, d })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The exponent as written in the family formula.
    pub fn d(&self) -> &BigUint {
        &self.d
    }

    /// The exponent reduced modulo `2^n - 1`.
    pub fn reduced(&self) -> BigUint {
        ring::fold(&self.d, self.n)
    }

    /// Whether the conditions under which the family is listed as APN on
    /// `F_(2^n)` hold. `allones` is not an APN family and always fails.
    pub fn apn_conditions(&self) -> bool {
        let (k, n) = (self.k, self.n);
        let t = (n - 1) / 2;
        match self.family {
            Family::Gold => k.gcd(&n) == 1 && k <= t,
            Family::Kasami => k.gcd(&n) == 1 && (2..=t).contains(&k),
            Family::Welch | Family::Niho | Family::FieldInverse | Family::Dobbertin => true,
            Family::AllOnes => false,
        }
    }

    /// Every listed APN exponent on `F_(2^n)` whose conditions hold.
    pub fn apn_catalog(n: u64) -> Vec<ExponentSpec> {
        let mut out = Vec::new();
        let mut push = |family, k| {
            if let Ok(s) = ExponentSpec::new(family, k, n) {
                if s.apn_conditions() {
                    out.push(s);
                }
            }
        };
        for k in 1..n {
            push(Family::Gold, k);
            push(Family::Kasami, k);
        }
        if n % 2 == 1 {
            push(Family::Welch, (n - 1) / 2);
            push(Family::FieldInverse, (n - 1) / 2);
            push(Family::Niho, (n - 1) / 4);
        }
        if n % 5 == 0 {
            push(Family::Dobbertin, n / 5);
        }
        out
    }
}

impl fmt::Display for ExponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(k={}, n={})", self.family, self.k, self.n)
    }
}

/// An invertibility verdict with the rule that decided it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invertibility {
    pub invertible: bool,
    pub gcd: BigUint,
    pub reason: String,
}

/// Gold: `gcd(2^k + 1, 2^n - 1) = 1` iff `n / gcd(n, k)` is odd.
pub fn gold_predicate(k: u64, n: u64) -> bool {
    (n / n.gcd(&k)) % 2 == 1
}

/// Kasami: `n / gcd(n, k)` odd, or it is even, `k` is even and
/// `gcd(k, n) = gcd(3k, n)`.
pub fn kasami_predicate(k: u64, n: u64) -> bool {
    let s = n.gcd(&k);
    (n / s) % 2 == 1 || (k % 2 == 0 && s == n.gcd(&(3 * k)))
}

/// `2^k - 1`: invertible iff `gcd(n, k) = 1`.
pub fn allones_predicate(k: u64, n: u64) -> bool {
    n.gcd(&k) == 1
}

/// Invertibility of a raw exponent, decided by the gcd alone.
pub fn is_invertible_raw(d: &BigUint, n: u64) -> Result<Invertibility> {
    let gcd = ring::gcd_with_modulus(d, n)?;
    let invertible = gcd.is_one();
    let reason = format!("gcd(d, 2^n-1) = {gcd}");
    Ok(Invertibility { invertible, gcd, reason })
}

/// Invertibility of a family member. Where a closed-form rule exists it is
/// evaluated and must agree with the gcd.
pub fn is_invertible(spec: &ExponentSpec) -> Result<Invertibility> {
    let mut verdict = is_invertible_raw(spec.d(), spec.n())?;
    let (k, n) = (spec.k(), spec.n());
    let rule = match spec.family() {
        Family::Gold => {
            let q = n / n.gcd(&k);
            Some((gold_predicate(k, n), format!("n/gcd(n,k) = {q} is {}", parity(q))))
        }
        Family::Kasami => {
            let q = n / n.gcd(&k);
            let why = if q % 2 == 1 {
                format!("n/gcd(n,k) = {q} is odd")
            } else if k % 2 == 1 {
                format!("n/gcd(n,k) = {q} is even and k is odd")
            } else {
                let (a, b) = (n.gcd(&k), n.gcd(&(3 * k)));
                format!("n/gcd(n,k) = {q} is even, k is even, gcd(k,n) = {a}, gcd(3k,n) = {b}")
            };
            Some((kasami_predicate(k, n), why))
        }
        Family::AllOnes => {
            Some((allones_predicate(k, n), format!("gcd(n,k) = {}", n.gcd(&k))))
        }
        _ => None,
    };
    if let Some((predicted, why)) = rule {
        if predicted != verdict.invertible {
            return Err(Error::invariant(format!(
                "{spec}: closed-form rule says {predicted}, gcd is {}",
                verdict.gcd
            )));
        }
        verdict.reason = format!("{why}; {}", verdict.reason);
    }
    Ok(verdict)
}

fn parity(x: u64) -> &'static str {
    if x % 2 == 0 {
        "even"
    } else {
        "odd"
    }
}

/// Order of 2 modulo the exponent: `2k` for Gold and `6k` for Kasami with
/// `k >= 2`, cross-checked by direct computation.
pub fn family_order(spec: &ExponentSpec) -> Result<u64> {
    let k = spec.k();
    let claimed = match spec.family() {
        Family::Gold => 2 * k,
        Family::Kasami if k >= 2 => 6 * k,
        Family::Kasami => {
            return Err(Error::domain("kasami k=1 is the gold exponent 3; its order is 2, not 6"))
        }
        other => return Err(Error::domain(format!("no order formula for the {other} family"))),
    };
    let actual = ring::order_of_two(spec.d())?;
    if actual != claimed {
        return Err(Error::invariant(format!("order of 2 mod {} is {actual}, not {claimed}", spec.d())));
    }
    Ok(claimed)
}

/// The family's inverse of `spec`, after the gcd check.
pub fn family_inverse(spec: &ExponentSpec) -> Result<InverseResult> {
    let (k, n) = (spec.k(), spec.n());
    let verdict = is_invertible(spec)?;
    if !verdict.invertible {
        return Err(Error::NotInvertible { d: spec.d().clone(), n, gcd: verdict.gcd });
    }
    match spec.family() {
        Family::Gold => gold_inverse(k, n),
        Family::Kasami => kasami_inverse(k, n),
        Family::Welch => welch_inverse(k),
        Family::Niho => niho_inverse(k, n),
        Family::FieldInverse => field_inverse(k),
        Family::Dobbertin => dobbertin_inverse(k),
        Family::AllOnes => allones_inverse(k, n),
    }
}

/// Value of the closed form for `(family, k, n)`; used to replay traces.
pub fn closed_form(family: Family, k: u64, n: u64) -> Result<Residue> {
    Ok(family_inverse(&ExponentSpec::new(family, k, n)?)?.value)
}

/// Wraps a closed-form value, rejecting it unless it really is the inverse.
pub(crate) fn closed_result(family: Family, k: u64, n: u64, d: BigUint, t: BigUint) -> Result<InverseResult> {
    if t.bits() > n || (n > 1 && ring::is_all_ones(&t, n)) || !ring::is_inverse(&d, &t, n) {
        return Err(Error::invariant(format!(
            "{family} closed form with k={k}, n={n} gives {t}, not the least inverse of {d}"
        )));
    }
    let value = Residue::from_canonical(t, n);
    Ok(InverseResult { d, n, value, trace: vec![Step::ClosedForm { family, k, n }] })
}

pub(crate) fn check_weight(family: Family, k: u64, n: u64, got: u64, want: u64) -> Result<()> {
    if got != want {
        return Err(Error::invariant(format!(
            "{family} inverse with k={k}, n={n} has weight {got}, expected {want}"
        )));
    }
    Ok(())
}

/// `g_n = a_r | w | w̄ | ... | w | w̄`, the layout of Gold and Kasami inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairStructure {
    pub family: Family,
    pub k: u64,
    pub n: u64,
    pub r: u64,
    /// Number of `w | w̄` pairs.
    pub pairs: u64,
    pub a_r: BitSeq,
    pub w: BitSeq,
    pub w_bar: BitSeq,
    pub bits: BitSeq,
}

impl PairStructure {
    pub fn to_record(&self) -> Record {
        Record::new()
            .with("family", self.family)
            .with("k", self.k)
            .with("n", self.n)
            .with("r", self.r)
            .with("pairs", self.pairs)
            .with("a_r", &self.a_r)
            .with("w", &self.w)
            .with("w_bar", &self.w_bar)
            .with("bits", self.bits.grouped('_'))
    }
}

/// Builds `a_r | (w | w̄)^pairs` and checks it against `inverse` bit for bit.
pub(crate) fn pair_structure(
    family: Family,
    k: u64,
    r: u64,
    a_r: &BigUint,
    w: &BigUint,
    width: u64,
    inverse: &InverseResult,
) -> Result<PairStructure> {
    let n = inverse.n;
    let a_r = BitSeq::from_value(a_r, r)?;
    let w = BitSeq::from_value(w, width)?;
    let w_bar = w.complement();
    let pairs = (n - r) / (2 * width);
    let bits = a_r.concat(&w.concat(&w_bar).repeat(pairs));
    if bits != inverse.bits() {
        return Err(Error::invariant(format!(
            "{family} k={k} n={n}: pair layout {bits} differs from inverse {}",
            inverse.bits()
        )));
    }
    Ok(PairStructure { family, k, n, r, pairs, a_r, w, w_bar, bits })
}
