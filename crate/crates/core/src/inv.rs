//! The inverse function `Inv_d(n)` for a fixed `d` over all moduli
//! `2^n - 1`: reflection at `ord - r`, lifting from `r` to any `n ≡ r`
//! (mod ord) in three equivalent forms, the periodic bit structure of the
//! result, and the recursive inversion algorithm built from them.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};
use crate::families::Family;
use crate::record::Record;
use crate::repr::{self, Format};
use crate::ring::{self, MersenneRing, Residue};

/// One derivation step of an inversion, outermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// `d = 2^shift * d'`; the inverse is the rotated inverse of `d'`.
    EvenShift { d: BigUint, n: u64, shift: u64 },
    /// `n` reduced to `r = n mod ord` and lifted back.
    OrderReduce { d: BigUint, n: u64, ord: u64, r: u64 },
    /// `d` replaced by `d mod (2^n - 1)`.
    ModulusReduce { n: u64, from: BigUint, to: BigUint },
    /// `Inv_d(n)` obtained from `Inv_d(ord - n)`.
    Reflect { d: BigUint, n: u64, ord: u64 },
    /// Extended Euclid.
    OracleFallback { d: BigUint, n: u64 },
    /// A family closed form.
    ClosedForm { family: Family, k: u64, n: u64 },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::EvenShift { d, n, shift } => write!(f, "even_shift(d={d},n={n},u={shift})"),
            Step::OrderReduce { d, n, ord, r } => {
                write!(f, "order_reduce(d={d},n={n},ord={ord},r={r})")
            }
            Step::ModulusReduce { n, from, to } => write!(f, "modulus_reduce(n={n},d={from}->{to})"),
            Step::Reflect { d, n, ord } => write!(f, "reflect(d={d},n={n},ord={ord})"),
            Step::OracleFallback { d, n } => write!(f, "oracle(d={d},n={n})"),
            Step::ClosedForm { family, k, n } => {
                write!(f, "closed_form(family={family},k={k},n={n})")
            }
        }
    }
}

/// An inverse together with the steps that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseResult {
    pub d: BigUint,
    pub n: u64,
    pub value: Residue,
    pub trace: Vec<Step>,
}

impl InverseResult {
    pub fn weight(&self) -> u64 {
        self.value.weight()
    }

    pub fn bits(&self) -> BitSeq {
        self.value.to_bitseq()
    }

    pub fn trace_string(&self) -> String {
        if self.trace.is_empty() {
            "none".to_string()
        } else {
            self.trace.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";")
        }
    }

    pub fn used_oracle(&self) -> bool {
        self.trace.iter().any(|s| matches!(s, Step::OracleFallback { .. }))
    }

    pub fn to_record(&self, format: Format) -> Record {
        let v = self.value.value();
        Record::new()
            .with("d", &self.d)
            .with("n", self.n)
            .with("value", repr::render(v, self.n, format))
            .with("bits", repr::render(v, self.n, Format::Bits))
            .with("weight", self.weight())
            .with("trace", self.trace_string())
    }
}

/// `S_d(n) = (d * Inv_d(n) - 1) / (2^n - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SQuantity {
    pub d: BigUint,
    pub n: u64,
    pub s: BigUint,
}

pub fn s_quantity(d: &BigUint, n: u64, inv: &Residue) -> Result<SQuantity> {
    if inv.n() != n {
        return Err(Error::RingMismatch { left: n, right: inv.n() });
    }
    if d.is_zero() {
        return Err(Error::domain("S quantity needs d >= 1"));
    }
    let s = exact_div(&(d * inv.value() - 1u32), &ring::mersenne(n), "S_d(n)")?;
    Ok(SQuantity { d: d.clone(), n, s })
}

fn exact_div(num: &BigUint, den: &BigUint, what: &str) -> Result<BigUint> {
    let (q, rem) = num.div_rem(den);
    if !rem.is_zero() {
        return Err(Error::invariant(format!("{what}: {num} is not divisible by {den}")));
    }
    Ok(q)
}

fn check_odd_base(d: &BigUint) -> Result<u64> {
    ring::order_of_two(d)
}

/// Checks that `inv` is `Inv_d(r)`; this is what makes the exact
/// divisions in the formulas below legitimate.
fn check_inverse_arg(d: &BigUint, r: u64, inv: &Residue) -> Result<()> {
    if inv.n() != r {
        return Err(Error::RingMismatch { left: r, right: inv.n() });
    }
    if r == 1 {
        if inv.is_one() {
            return Ok(());
        }
        return Err(Error::domain("Inv_d(1) is 1 by convention"));
    }
    if inv.value().is_zero() || !ring::fold(&(d * inv.value()), r).is_one() {
        return Err(Error::domain(format!("{inv} is not the inverse of {d} modulo 2^{r}-1")));
    }
    Ok(())
}

/// `Inv_d(ord - r)` from `Inv_d(r)`, for odd `d >= 3` and `1 <= r < ord`.
pub fn reflect_inverse(d: &BigUint, r: u64, inv_r: &Residue) -> Result<Residue> {
    let ord = check_odd_base(d)?;
    if r == 0 || r >= ord {
        return Err(Error::domain(format!("reflection needs 1 <= r < {ord}, got {r}")));
    }
    check_inverse_arg(d, r, inv_r)?;
    reflect_core(d, ord, r, inv_r.value())
}

pub(crate) fn reflect_core(d: &BigUint, ord: u64, r: u64, inv_r: &BigUint) -> Result<Residue> {
    let s_r = exact_div(&(d * inv_r - 1u32), &ring::mersenne(r), "S_d(r)")?;
    let coeff = d + 1u32;
    if s_r > coeff {
        return Err(Error::invariant(format!("S_d({r}) = {s_r} exceeds d + 1")));
    }
    let num = (coeff - s_r) * ring::mersenne(ord - r) + 1u32;
    let t = exact_div(&num, d, "reflection")?;
    Ok(Residue::from_canonical(t, ord - r))
}

/// Validated `(ord, m)` for lifting `Inv_d(r)` to `Inv_d(n)`.
fn lift_args(d: &BigUint, r: u64, inv_r: &Residue, n: u64) -> Result<(u64, u64)> {
    let ord = check_odd_base(d)?;
    if r == 0 || r >= ord {
        return Err(Error::domain(format!("lifting needs 1 <= r < {ord}, got {r}")));
    }
    if n < r || (n - r) % ord != 0 {
        return Err(Error::domain(format!("lifting needs n ≡ r (mod {ord}), got n={n}, r={r}")));
    }
    check_inverse_arg(d, r, inv_r)?;
    Ok((ord, (n - r) / ord))
}

/// `Inv_d(n) = Inv_d(r) 2^(n-r) + (S_d(r) - 1)(2^(n-r) - 1)/d`.
pub fn lift_inverse(d: &BigUint, r: u64, inv_r: &Residue, n: u64) -> Result<Residue> {
    lift_args(d, r, inv_r, n)?;
    lift_literal(d, r, inv_r.value(), n)
}

pub(crate) fn lift_literal(d: &BigUint, r: u64, inv_r: &BigUint, n: u64) -> Result<Residue> {
    let s_r = exact_div(&(d * inv_r - 1u32), &ring::mersenne(r), "S_d(r)")?;
    let tail = exact_div(&ring::mersenne(n - r), d, "(2^(n-r) - 1)/d")?;
    let t = (inv_r << (n - r)) + (s_r - 1u32) * tail;
    Ok(Residue::from_canonical(t, n))
}

/// The sum form: `Inv_d(r)` at every `ord`-th position plus the
/// complemented reflection `2^(ord-r) - 1 - Inv_d(ord - r)` in between.
pub fn lift_inverse_concat(
    d: &BigUint,
    r: u64,
    inv_r: &Residue,
    inv_reflect: &Residue,
    n: u64,
) -> Result<Residue> {
    let (ord, m) = lift_args(d, r, inv_r, n)?;
    check_inverse_arg(d, ord - r, inv_reflect)?;
    let gap = ring::mersenne(ord - r) - inv_reflect.value();
    let one = BigUint::one();
    let t = inv_r.value() * ring::repeat_block(&one, ord, m + 1)
        + ((gap * ring::repeat_block(&one, ord, m)) << r);
    Ok(Residue::from_canonical(t, n))
}

/// `Inv_d(n) = (Inv_d(r)(2^n - 1) - (2^n - 2^r)/d) / (2^r - 1)`.
pub fn lift_inverse_direct(d: &BigUint, r: u64, inv_r: &Residue, n: u64) -> Result<Residue> {
    lift_args(d, r, inv_r, n)?;
    let modulus = ring::mersenne(n);
    let shifted = exact_div(&(ring::mersenne(n - r) << r), d, "(2^n - 2^r)/d")?;
    let lead = inv_r.value() * &modulus;
    if lead < shifted {
        return Err(Error::invariant("direct lift numerator is negative"));
    }
    let t = exact_div(&(lead - shifted), &ring::mersenne(r), "direct lift")?;
    Ok(Residue::from_canonical(t, n))
}

/// The repeated `ord`-bit block `u = (S_d(r) - 1)(2^ord - 1)/d`.
fn period_block(d: &BigUint, ord: u64, r: u64, inv_r: &BigUint) -> Result<BigUint> {
    if let (Some(dw), Some(a)) = (d.to_u64(), inv_r.to_u64()) {
        if d.bits() + ord <= 127 {
            let (dw, a) = (dw as u128, a as u128);
            let (m_r, m_ord) = ((1u128 << r) - 1, (1u128 << ord) - 1);
            let num = dw * a - 1;
            if num % m_r == 0 && ((num / m_r - 1) * m_ord) % dw == 0 {
                return Ok(BigUint::from((num / m_r - 1) * m_ord / dw));
            }
            return Err(Error::invariant(format!("period block for d={d}, r={r} is not an integer")));
        }
    }
    let s_r = exact_div(&(d * inv_r - 1u32), &ring::mersenne(r), "S_d(r)")?;
    exact_div(&((s_r - 1u32) * ring::mersenne(ord)), d, "period block")
}

/// Same value as [`lift_inverse`], assembled as `a_r | u | u | ... | u`
/// directly in memory. This is the path the recursive algorithm uses.
pub(crate) fn lift_periodic(d: &BigUint, ord: u64, r: u64, inv_r: &BigUint, n: u64) -> Result<Residue> {
    let u = period_block(d, ord, r, inv_r)?;
    let t = ring::periodic(inv_r, &u, ord, (n - r) / ord);
    Ok(Residue::from_canonical(t, n))
}

/// The periodic layout of `Inv_d(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcatStructure {
    pub d: BigUint,
    pub n: u64,
    pub ord: u64,
    pub r: u64,
    /// Number of `u` blocks, `(n - r) / ord`.
    pub m: u64,
    /// `Inv_d(r)` on `r` bits.
    pub a_r: BitSeq,
    /// The `ord`-bit period.
    pub u: BitSeq,
    /// Complement of `Inv_d(ord - r)` on `ord - r` bits.
    pub b_bar: BitSeq,
    /// `a_r` followed by `m` copies of `u`.
    pub reassembled: BitSeq,
}

impl ConcatStructure {
    pub fn layout(&self) -> String {
        if self.m == 0 {
            "a_r".to_string()
        } else {
            format!("a_r | u^{}", self.m)
        }
    }

    pub fn to_record(&self) -> Record {
        Record::new()
            .with("d", &self.d)
            .with("n", self.n)
            .with("ord", self.ord)
            .with("r", self.r)
            .with("m", self.m)
            .with("a_r", &self.a_r)
            .with("u", &self.u)
            .with("b_bar", &self.b_bar)
            .with("layout", self.layout())
            .with("bits", self.reassembled.grouped('_'))
    }
}

/// Splits `Inv_d(n)` into `a_r | u^m`, checks `u = b̄_(ord-r) | a_r`, and
/// checks the reassembly against the computed inverse bit for bit.
pub fn concat_structure(d: &BigUint, n: u64) -> Result<ConcatStructure> {
    let ord = check_odd_base(d)?;
    let target = invert(d, n)?;
    let r = n % ord;
    if r == 0 {
        return Err(Error::invariant(format!("{d} invertible mod 2^{n}-1 but ord divides n")));
    }
    let m = n / ord;
    let inv_r = euclid_or_unit(d, r)?;
    let inv_reflect = euclid_or_unit(d, ord - r)?;
    let a_r = BitSeq::from_value(inv_r.value(), r)?;
    let u = BitSeq::from_value(&period_block(d, ord, r, inv_r.value())?, ord)?;
    let b_bar = BitSeq::from_value(inv_reflect.value(), ord - r)?.complement();
    if b_bar.concat(&a_r) != u {
        return Err(Error::invariant(format!(
            "period block {u} differs from complement|a_r = {}|{a_r}",
            b_bar
        )));
    }
    let reassembled = a_r.concat(&u.repeat(m));
    if reassembled != target.bits() {
        return Err(Error::invariant(format!(
            "reassembled bits {reassembled} differ from Inv_{d}({n}) = {}",
            target.bits()
        )));
    }
    Ok(ConcatStructure { d: d.clone(), n, ord, r, m, a_r, u, b_bar, reassembled })
}

fn euclid_or_unit(d: &BigUint, n: u64) -> Result<Residue> {
    ring::euclid_inverse(d, &MersenneRing::new(n)?)
}

/// `wt(Inv_d(n))` as `wt(Inv_d(r)) + (n - r)/2`, valid when `ord` is even
/// and `d` divides `2^(ord/2) + 1`.
pub fn weight_via_half_order(d: &BigUint, n: u64) -> Result<u64> {
    let ord = check_odd_base(d)?;
    if ord % 2 == 1 {
        return Err(Error::domain(format!("order of 2 modulo {d} is odd ({ord})")));
    }
    let half = (BigUint::one() << (ord / 2)) + 1u32;
    if !(half % d).is_zero() {
        return Err(Error::domain(format!("{d} does not divide 2^{}+1", ord / 2)));
    }
    let r = n % ord;
    let inv_r = invert(d, r.max(1))?;
    if r == 0 {
        return Err(Error::invariant("ord divides n for an invertible d"));
    }
    Ok(inv_r.weight() + (n - r) / 2)
}

/// What is known about the order of 2 modulo some `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OrderBound {
    Exact(u64),
    /// The order is at least this value.
    AtLeast(u64),
}

/// Per-caller cache of orders of 2. Results never depend on it.
#[derive(Debug, Default, Clone)]
pub struct OrderMemo {
    entries: HashMap<BigUint, OrderBound>,
}

impl OrderMemo {
    pub fn new() -> Self {
        Self::default()
    }

    /// The order of 2 modulo odd `d >= 3` if it is at most `cap`.
    fn bounded(&mut self, d: &BigUint, cap: u64) -> Option<u64> {
        match self.entries.get(d) {
            Some(&OrderBound::Exact(o)) => return (o <= cap).then_some(o),
            Some(&OrderBound::AtLeast(lo)) if cap < lo => return None,
            _ => {}
        }
        let found = ring::order_of_two_bounded(d, cap);
        let entry = match found {
            Some(o) => OrderBound::Exact(o),
            None => OrderBound::AtLeast(cap.saturating_add(1)),
        };
        self.entries.insert(d.clone(), entry);
        found
    }
}

/// Post-processing owed to an outer level of the recursion.
enum Pending {
    Rotate { n: u64, by: u64 },
    Lift { d: BigUint, n: u64, ord: u64, r: u64 },
    Reflect { d: BigUint, n: u64, ord: u64 },
}

/// `Inv_d(n)` by recursive inversion, with its derivation trace.
pub fn invert(d: &BigUint, n: u64) -> Result<InverseResult> {
    invert_with(d, n, &mut OrderMemo::new())
}

pub fn invert_with(d: &BigUint, n: u64, memo: &mut OrderMemo) -> Result<InverseResult> {
    check_invertible(d, n)?;
    let guard = 2 * d.bits() + 4;
    let mut trace = Vec::new();
    let mut pending = Vec::new();
    let (mut cd, mut cn) = (d.clone(), n);

    let mut value = loop {
        if trace.len() as u64 > guard {
            return Err(Error::invariant(format!(
                "recursion depth exceeded {guard} while inverting {d} mod 2^{n}-1"
            )));
        }
        if cn == 1 {
            break Residue::unit_ring_inverse();
        }
        if cd.is_one() {
            break Residue::from_canonical(BigUint::one(), cn);
        }
        if cd.is_even() {
            let shift = cd.trailing_zeros().expect("nonzero");
            trace.push(Step::EvenShift { d: cd.clone(), n: cn, shift });
            pending.push(Pending::Rotate { n: cn, by: (cn - shift % cn) % cn });
            cd >>= shift;
            continue;
        }
        // Steps below only compare n with ord and ord/2, so an order of
        // 2n or more is as good as unknown.
        let ord = memo.bounded(&cd, 2 * cn - 1);
        let r = ord.map_or(cn, |o| cn % o);
        if r != cn {
            let o = ord.expect("r != n implies a known order");
            if r == 0 {
                return Err(Error::invariant(format!("ord({cd}) = {o} divides n = {cn}")));
            }
            trace.push(Step::OrderReduce { d: cd.clone(), n: cn, ord: o, r });
            pending.push(Pending::Lift { d: cd.clone(), n: cn, ord: o, r });
            cn = r;
            continue;
        }
        let reduced = ring::fold(&cd, cn);
        if reduced != cd {
            if reduced.is_zero() {
                return Err(Error::invariant(format!("{cd} ≡ 0 mod 2^{cn}-1")));
            }
            trace.push(Step::ModulusReduce { n: cn, from: cd.clone(), to: reduced.clone() });
            cd = reduced;
            continue;
        }
        if let Some(o) = ord.filter(|&o| 2 * cn > o) {
            trace.push(Step::Reflect { d: cd.clone(), n: cn, ord: o });
            pending.push(Pending::Reflect { d: cd.clone(), n: cn, ord: o });
            cn = o - cn;
            continue;
        }
        trace.push(Step::OracleFallback { d: cd.clone(), n: cn });
        break ring::euclid_inverse(&cd, &MersenneRing::new(cn)?)?;
    };

    while let Some(p) = pending.pop() {
        value = match p {
            Pending::Rotate { n, by } => MersenneRing::new(n)?.rotate_left(&value, by)?,
            Pending::Lift { d, n, ord, r } => lift_periodic(&d, ord, r, value.value(), n)?,
            Pending::Reflect { d, n, ord } => reflect_core(&d, ord, ord - n, value.value())?,
        };
    }

    if !ring::is_inverse(d, value.value(), n) {
        return Err(Error::invariant(format!(
            "recursive inversion produced {value}, which is not the inverse of {d} mod 2^{n}-1"
        )));
    }
    Ok(InverseResult { d: d.clone(), n, value, trace })
}

/// `Ok` when `gcd(d, 2^n - 1) = 1`, otherwise `NotInvertible` with the gcd.
pub fn check_invertible(d: &BigUint, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if d.is_zero() {
        return Err(Error::NotInvertible { d: d.clone(), n, gcd: ring::mersenne(n) });
    }
    let g = ring::gcd_with_modulus(d, n)?;
    if !g.is_one() {
        return Err(Error::NotInvertible { d: d.clone(), n, gcd: g });
    }
    Ok(())
}

/// Recomputes a result from its trace alone, using the literal formulas
/// rather than the fast paths, and checks it reproduces the stored value.
pub fn replay(result: &InverseResult) -> Result<Residue> {
    let (mut cd, mut cn) = (result.d.clone(), result.n);
    let mut pending = Vec::new();
    let mut leaf = None;
    let mismatch = |step: &Step| Error::invariant(format!("trace step {step} does not follow"));

    for (i, step) in result.trace.iter().enumerate() {
        if leaf.is_some() {
            return Err(Error::invariant(format!("trace continues after its leaf at step {i}")));
        }
        match step {
            Step::EvenShift { d, n, shift } => {
                if *d != cd || *n != cn || d.trailing_zeros() != Some(*shift) {
                    return Err(mismatch(step));
                }
                pending.push(Pending::Rotate { n: cn, by: (cn - shift % cn) % cn });
                cd >>= *shift;
            }
            Step::OrderReduce { d, n, ord, r } => {
                if *d != cd || *n != cn || ring::order_of_two(d)? != *ord || n % ord != *r {
                    return Err(mismatch(step));
                }
                pending.push(Pending::Lift { d: cd.clone(), n: cn, ord: *ord, r: *r });
                cn = *r;
            }
            Step::ModulusReduce { n, from, to } => {
                if *from != cd || *n != cn || ring::fold(from, *n) != *to {
                    return Err(mismatch(step));
                }
                cd = to.clone();
            }
            Step::Reflect { d, n, ord } => {
                if *d != cd || *n != cn || ring::order_of_two(d)? != *ord || n >= ord {
                    return Err(mismatch(step));
                }
                pending.push(Pending::Reflect { d: cd.clone(), n: cn, ord: *ord });
                cn = ord - n;
            }
            Step::OracleFallback { d, n } => {
                if *d != cd || *n != cn {
                    return Err(mismatch(step));
                }
                leaf = Some(euclid_or_unit(d, *n)?);
            }
            Step::ClosedForm { family, k, n } => {
                if *n != cn {
                    return Err(mismatch(step));
                }
                leaf = Some(crate::families::closed_form(*family, *k, *n)?);
            }
        }
    }

    let mut value = match leaf {
        Some(v) => v,
        None if cn == 1 => Residue::unit_ring_inverse(),
        None if cd.is_one() => Residue::from_canonical(BigUint::one(), cn),
        None => return Err(Error::invariant("trace ends without reaching a base case")),
    };
    while let Some(p) = pending.pop() {
        value = match p {
            Pending::Rotate { n, by } => MersenneRing::new(n)?.rotate_left(&value, by)?,
            Pending::Lift { d, n, r, .. } => lift_literal(&d, r, value.value(), n)?,
            Pending::Reflect { d, n, ord } => reflect_core(&d, ord, ord - n, value.value())?,
        };
    }
    if value != result.value {
        return Err(Error::invariant(format!(
            "replay gives {value}, result records {}",
            result.value
        )));
    }
    Ok(value)
}
