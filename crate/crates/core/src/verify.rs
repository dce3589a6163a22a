//! Exhaustive APN and AB checks for power maps `x -> x^d` on small fields.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::record::Record;
use crate::ring;

/// One irreducible polynomial per degree, lowest weight first and then
/// lexicographically least. Index `n - 2`.
const POLYS: [u32; 13] = [
    0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
];

pub const MIN_FIELD: u32 = 2;
pub const MAX_FIELD: u32 = 14;
/// Default largest `n` for the Walsh check.
pub const WALSH_CAP: u32 = 11;

/// `F_(2^n)` as polynomials over `F_2` modulo a fixed irreducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldCtx {
    n: u32,
    poly: u32,
}

/// Carry-less remainder of `a` modulo `m`.
fn poly_rem(mut a: u32, m: u32) -> u32 {
    let dm = 31 - m.leading_zeros();
    while a != 0 && 31 - a.leading_zeros() >= dm {
        a ^= m << (31 - a.leading_zeros() - dm);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let deg = 31 - poly.leading_zeros();
    (2u32..(1 << (deg / 2 + 1))).all(|q| poly_rem(poly, q) != 0)
}

impl FieldCtx {
    pub fn new(n: u32) -> Result<Self> {
        if !(MIN_FIELD..=MAX_FIELD).contains(&n) {
            return Err(Error::domain(format!("field size must be in {MIN_FIELD}..={MAX_FIELD}, got {n}")));
        }
        Self::with_poly(n, POLYS[(n - 2) as usize])
    }

    /// A field with an explicit reduction polynomial, given as an
    /// `(n+1)`-bit mask.
    pub fn with_poly(n: u32, poly: u32) -> Result<Self> {
        if !(MIN_FIELD..=MAX_FIELD).contains(&n) || poly >> n != 1 {
            return Err(Error::domain(format!("{poly:#x} is not a degree-{n} polynomial")));
        }
        if !is_irreducible(poly) {
            return Err(Error::domain(format!("{poly:#x} is reducible")));
        }
        Ok(FieldCtx { n, poly })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn size(&self) -> u32 {
        1 << self.n
    }

    pub fn mul(&self, mut a: u32, mut b: u32) -> u32 {
        let top = 1 << self.n;
        let mut acc = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.poly;
            }
        }
        acc
    }

    pub fn pow(&self, mut x: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to `F_2`.
    pub fn trace(&self, x: u32) -> u32 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.n {
            acc ^= y;
            y = self.mul(y, y);
        }
        debug_assert!(acc <= 1);
        acc
    }

    /// `d` as an exponent on the multiplicative group, in `1..=2^n - 1`.
    fn exponent(&self, d: &BigUint) -> Result<u64> {
        if d.is_zero() {
            return Err(Error::domain("exponent must be positive"));
        }
        let e = ring::fold(d, self.n as u64).to_u64().expect("n <= 14");
        Ok(if e == 0 { (1u64 << self.n) - 1 } else { e })
    }

    /// `x^d` for every `x`.
    fn power_table(&self, d: &BigUint) -> Result<Vec<u32>> {
        let e = self.exponent(d)?;
        Ok((0..self.size()).map(|x| if x == 0 { 0 } else { self.pow(x, e) }).collect())
    }
}

/// Histogram of `|{x^d + (x+a)^d}|` over nonzero `a`.
pub fn differential_spectrum(d: &BigUint, ctx: &FieldCtx) -> Result<BTreeMap<u32, u64>> {
    let table = ctx.power_table(d)?;
    let size = ctx.size();
    let mut seen = vec![0u32; size as usize];
    let mut hist = BTreeMap::new();
    for a in 1..size {
        let mut count = 0;
        for x in 0..size {
            let v = (table[x as usize] ^ table[(x ^ a) as usize]) as usize;
            if seen[v] != a {
                seen[v] = a;
                count += 1;
            }
        }
        *hist.entry(count).or_insert(0) += 1;
    }
    Ok(hist)
}

pub fn is_apn(d: &BigUint, ctx: &FieldCtx) -> Result<bool> {
    let hist = differential_spectrum(d, ctx)?;
    Ok(hist.len() == 1 && hist.contains_key(&(ctx.size() / 2)))
}

fn fwht(v: &mut [i64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `sum_x (-1)^(Tr(alpha x^d + beta x))` by direct summation.
pub fn walsh_direct(d: &BigUint, ctx: &FieldCtx, alpha: u32, beta: u32) -> Result<i64> {
    let e = ctx.exponent(d)?;
    Ok((0..ctx.size())
        .map(|x| {
            let fx = if x == 0 { 0 } else { ctx.pow(x, e) };
            if ctx.trace(ctx.mul(alpha, fx) ^ ctx.mul(beta, x)) == 0 {
                1
            } else {
                -1
            }
        })
        .sum())
}

/// All Walsh values for a fixed `alpha`, indexed by the linear mask of
/// `x -> Tr(beta x)`. Since that map from `beta` to masks is a bijection the
/// multiset of values equals the spectrum over `beta`.
pub fn walsh_row(d: &BigUint, ctx: &FieldCtx, alpha: u32) -> Result<Vec<i64>> {
    let table = ctx.power_table(d)?;
    let mut v: Vec<i64> =
        table.iter().map(|&fx| if ctx.trace(ctx.mul(alpha, fx)) == 0 { 1 } else { -1 }).collect();
    fwht(&mut v);
    Ok(v)
}

/// The mask `L` with `Tr(beta x) = parity(x & L)`.
pub fn trace_mask(ctx: &FieldCtx, beta: u32) -> u32 {
    (0..ctx.n).fold(0, |m, i| m | (ctx.trace(ctx.mul(beta, 1 << i)) << i))
}

/// AB test for odd `n <= cap`: every Walsh value with `alpha != 0` is `0` or
/// `±2^((n+1)/2)`.
pub fn is_ab(d: &BigUint, ctx: &FieldCtx, cap: u32) -> Result<bool> {
    if ctx.n % 2 == 0 {
        return Err(Error::domain(format!("AB is defined for odd n, got n={}", ctx.n)));
    }
    if ctx.n > cap {
        return Err(Error::domain(format!("n={} exceeds the Walsh cap {cap}", ctx.n)));
    }
    let bound = 1i64 << ((ctx.n + 1) / 2);
    for alpha in 1..ctx.size() {
        if walsh_row(d, ctx, alpha)?.iter().any(|&w| w != 0 && w.abs() != bound) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Binary weight of `d` reduced into `1..=2^n - 1`.
pub fn algebraic_degree(d: &BigUint, n: u64) -> Result<u64> {
    if d.is_zero() || n == 0 {
        return Err(Error::domain("algebraic degree needs d >= 1 and n >= 1"));
    }
    let e = ring::fold(d, n);
    Ok(if e.is_zero() { n } else { e.count_ones() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub n: u32,
    pub d: BigUint,
    pub histogram: BTreeMap<u32, u64>,
    pub apn: bool,
    pub ab: Option<bool>,
    pub degree: u64,
}

/// Differential spectrum, APN verdict and, when `walsh_cap` admits it, AB.
pub fn spectrum_report(d: &BigUint, ctx: &FieldCtx, walsh_cap: Option<u32>) -> Result<SpectrumReport> {
    let histogram = differential_spectrum(d, ctx)?;
    let apn = histogram.len() == 1 && histogram.contains_key(&(ctx.size() / 2));
    let ab = match walsh_cap {
        Some(cap) if ctx.n % 2 == 1 => Some(is_ab(d, ctx, cap)?),
        _ => None,
    };
    let degree = algebraic_degree(d, ctx.n as u64)?;
    Ok(SpectrumReport { n: ctx.n, d: d.clone(), histogram, apn, ab, degree })
}

impl SpectrumReport {
    pub fn to_record(&self) -> Record {
        let hist: Vec<String> = self.histogram.iter().map(|(s, c)| format!("{s}:{c}")).collect();
        let mut rec = Record::new()
            .with("n", self.n)
            .with("d", &self.d)
            .with("degree", self.degree)
            .with("spectrum", hist.join(","))
            .with("apn", self.apn);
        rec.push("ab", self.ab.map_or("skipped".to_string(), |b| b.to_string()));
        rec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn table_is_irreducible_and_minimal() {
        for n in MIN_FIELD..=MAX_FIELD {
            let p = POLYS[(n - 2) as usize];
            assert!(is_irreducible(p));
            let first = (1u32 << n..1 << (n + 1))
                .filter(|&q| is_irreducible(q))
                .min_by_key(|&q| (q.count_ones(), q))
                .unwrap();
            assert_eq!(p, first, "n={n}");
        }
        assert!(FieldCtx::with_poly(4, 0b10101).is_err());
        assert!(FieldCtx::new(15).is_err());
    }

    #[test]
    fn multiplicative_group_order() {
        for n in 2..=8 {
            let f = FieldCtx::new(n).unwrap();
            for x in 1..f.size() {
                assert_eq!(f.pow(x, (1 << n) - 1), 1);
            }
        }
    }

    #[test]
    fn apn_examples() {
        let f5 = FieldCtx::new(5).unwrap();
        assert!(is_apn(&big(3), &f5).unwrap());
        let f4 = FieldCtx::new(4).unwrap();
        assert!(!is_apn(&big(5), &f4).unwrap());
        assert!(is_ab(&big(3), &f5, WALSH_CAP).unwrap());
        assert!(!is_ab(&big(29), &f5, WALSH_CAP).unwrap());
        assert!(is_apn(&big(15), &f5).unwrap());
        assert!(!is_ab(&big(15), &f5, WALSH_CAP).unwrap());
        assert!(is_ab(&big(3), &f4, WALSH_CAP).is_err());
    }

    #[test]
    fn walsh_rows_match_direct_sums() {
        let f = FieldCtx::new(5).unwrap();
        for d in [3u64, 7, 11] {
            for alpha in 1..f.size() {
                let row = walsh_row(&big(d), &f, alpha).unwrap();
                for beta in 0..f.size() {
                    let direct = walsh_direct(&big(d), &f, alpha, beta).unwrap();
                    assert_eq!(row[trace_mask(&f, beta) as usize], direct);
                }
            }
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(algebraic_degree(&big(3), 5).unwrap(), 2);
        assert_eq!(algebraic_degree(&big(31), 5).unwrap(), 5);
        assert_eq!(algebraic_degree(&big(15), 5).unwrap(), 4);
    }
}
