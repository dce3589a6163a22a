//! Arithmetic in `Z/(2^n - 1)`.
//!
//! Reduction never divides: since `2^n ≡ 1`, a value is cut into `n`-bit
//! limbs which are summed, and the sum is folded again until it fits in `n`
//! bits. The all-ones pattern `2^n - 1` is the second representation of
//! zero and is mapped to `0`.

use std::fmt;
use std::mem;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::bitseq::BitSeq;
use crate::error::{Error, Result};

/// The modulus context `2^n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MersenneRing {
    n: u64,
    modulus: BigUint,
}

/// A canonical residue `0 <= value <= 2^n - 2` of some [`MersenneRing`].
///
/// The single exception is the inverse convention for the trivial ring
/// `n = 1`, where inversion returns the value `1` (see
/// [`Residue::unit_ring_inverse`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigUint,
    n: u64,
}

impl MersenneRing {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("ring bit-length n must be at least 1"));
        }
        Ok(MersenneRing { n, modulus: mersenne(n) })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The exact modulus `2^n - 1`.
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn reduce(&self, x: &BigUint) -> Residue {
        Residue { value: fold(x, self.n), n: self.n }
    }

    pub fn reduce_u64(&self, x: u64) -> Residue {
        self.reduce(&BigUint::from(x))
    }

    pub fn zero(&self) -> Residue {
        Residue { value: BigUint::zero(), n: self.n }
    }

    pub fn one(&self) -> Residue {
        self.reduce_u64(1)
    }

    /// `2^k mod (2^n - 1)`, i.e. `2^(k mod n)`.
    pub fn pow2(&self, k: u64) -> Residue {
        if self.n == 1 {
            return self.zero();
        }
        Residue { value: BigUint::one() << (k % self.n), n: self.n }
    }

    pub fn mul(&self, a: &Residue, b: &Residue) -> Result<Residue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.reduce(&(&a.value * &b.value)))
    }

    pub fn add(&self, a: &Residue, b: &Residue) -> Result<Residue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.reduce(&(&a.value + &b.value)))
    }

    /// Multiplication by `2^k`, which is a cyclic left rotation of the
    /// `n`-bit pattern.
    pub fn rotate_left(&self, a: &Residue, k: u64) -> Result<Residue> {
        self.check(a)?;
        if self.n == 1 {
            return Ok(self.zero());
        }
        let k = k % self.n;
        if k == 0 {
            return Ok(a.clone());
        }
        let hi = &a.value >> (self.n - k);
        let lo = (&a.value << k) & &self.modulus;
        Ok(Residue { value: lo | hi, n: self.n })
    }

    fn check(&self, a: &Residue) -> Result<()> {
        if a.n != self.n {
            return Err(Error::RingMismatch { left: self.n, right: a.n });
        }
        Ok(())
    }
}

impl Residue {
    /// The value `1` that inversion returns in the trivial ring `n = 1`.
    pub fn unit_ring_inverse() -> Self {
        Residue { value: BigUint::one(), n: 1 }
    }

    /// Wraps a value already known to be canonical for `2^n - 1`.
    pub(crate) fn from_canonical(value: BigUint, n: u64) -> Self {
        debug_assert!(
            value.bits() <= n && !(n > 1 && is_all_ones(&value, n)) || (n == 1 && value.is_one()),
            "non-canonical residue"
        );
        Residue { value, n }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }

    /// Bit-length `n` of the ring this residue lives in.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn weight(&self) -> u64 {
        self.value.count_ones()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// The length-`n` MSB-first bit pattern of the value.
    pub fn to_bitseq(&self) -> BitSeq {
        BitSeq::from_value(&self.value, self.n).expect("canonical residue fits in n bits")
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `2^n - 1`.
pub fn mersenne(n: u64) -> BigUint {
    (BigUint::one() << n) - 1u32
}

pub(crate) fn is_all_ones(x: &BigUint, n: u64) -> bool {
    x.bits() == n && x.count_ones() == n
}

/// Canonical `x mod (2^n - 1)` by limb folding.
pub(crate) fn fold(x: &BigUint, n: u64) -> BigUint {
    if n == 1 {
        return BigUint::zero();
    }
    let mut acc = if x.bits() <= n { x.clone() } else { sum_limbs(x, n) };
    while acc.bits() > n {
        acc = sum_limbs(&acc, n);
    }
    if is_all_ones(&acc, n) {
        BigUint::zero()
    } else {
        acc
    }
}

fn sum_limbs(x: &BigUint, n: u64) -> BigUint {
    let digits = x.to_u32_digits();
    let total = x.bits();
    let mut start = 0u64;
    if n <= 64 {
        let mut acc: u128 = 0;
        while start < total {
            let limb = extract_bits(&digits, start, n);
            let lo = limb.first().copied().unwrap_or(0) as u64;
            let hi = limb.get(1).copied().unwrap_or(0) as u64;
            acc += (lo | (hi << 32)) as u128;
            start += n;
        }
        BigUint::from(acc)
    } else {
        let mut acc = BigUint::zero();
        while start < total {
            acc += BigUint::new(extract_bits(&digits, start, n));
            start += n;
        }
        acc
    }
}

/// Bits `[start, start + len)` of a little-endian `u32` digit slice.
fn extract_bits(digits: &[u32], start: u64, len: u64) -> Vec<u32> {
    let words = len.div_ceil(32) as usize;
    let w0 = (start / 32) as usize;
    let shift = (start % 32) as u32;
    let mut out = vec![0u32; words];
    for (i, slot) in out.iter_mut().enumerate() {
        let lo = digits.get(w0 + i).copied().unwrap_or(0);
        *slot = if shift == 0 {
            lo
        } else {
            let hi = digits.get(w0 + i + 1).copied().unwrap_or(0);
            (lo >> shift) | (hi << (32 - shift))
        };
    }
    let rem = (len % 32) as u32;
    if rem != 0 {
        out[words - 1] &= (1u32 << rem) - 1;
    }
    out
}

/// `block` repeated `count` times in consecutive `width`-bit slots, lowest
/// slot first. Requires `block < 2^width`.
pub(crate) fn repeat_block(block: &BigUint, width: u64, count: u64) -> BigUint {
    periodic(&BigUint::zero(), block, width, count)
}

/// `high * 2^(width*count) + sum_{i<count} block * 2^(width*i)`, written
/// digit by digit. Requires `block < 2^width`.
pub(crate) fn periodic(high: &BigUint, block: &BigUint, width: u64, count: u64) -> BigUint {
    debug_assert!(block.bits() <= width);
    let body = width * count;
    let total = body + high.bits();
    let mut digits = vec![0u32; total.div_ceil(32) as usize];
    let block_digits = block.to_u32_digits();
    if !block_digits.is_empty() && count > 0 {
        // The body repeats every lcm(width, 32) bits, i.e. every `period`
        // whole digits. Write one period (plus spill) by hand, copy the rest.
        let period = (width / width.gcd(&32)) as usize;
        let full = (body / 32) as usize;
        let mut i = 0;
        while i < count && i * width < (period as u64 + 1) * 32 {
            or_shifted(&mut digits, &block_digits, i * width);
            i += 1;
        }
        if full > period {
            // Doubling copies of the finished prefix.
            let mut have = period;
            while have < full {
                let take = have.min(full - have);
                digits.copy_within(0..take, have);
                have += take;
            }
            // Partial last digit of the body: keep only bits below `body`.
            let rem = (body % 32) as u32;
            if rem != 0 {
                digits[full] = digits[full - period] & ((1u32 << rem) - 1);
            }
        }
        // Everything from `body` up is `high`; clear what the copy or the
        // hand-written prefix put there.
        clear_from(&mut digits, body);
    }
    or_shifted(&mut digits, &high.to_u32_digits(), body);
    BigUint::new(digits)
}

fn clear_from(digits: &mut [u32], pos: u64) {
    let w = (pos / 32) as usize;
    if w >= digits.len() {
        return;
    }
    let s = (pos % 32) as u32;
    digits[w] &= if s == 0 { 0 } else { (1u32 << s) - 1 };
    for d in &mut digits[w + 1..] {
        *d = 0;
    }
}

fn or_shifted(dst: &mut [u32], src: &[u32], pos: u64) {
    let w = (pos / 32) as usize;
    let s = (pos % 32) as u32;
    for (j, &x) in src.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if let Some(slot) = dst.get_mut(w + j) {
            *slot |= x << s;
        }
        if s > 0 {
            let spill = x >> (32 - s);
            if spill != 0 {
                if let Some(slot) = dst.get_mut(w + j + 1) {
                    *slot |= spill;
                }
            }
        }
    }
}

/// Whether `d * t ≡ 1 (mod 2^n - 1)`, with the `n = 1` convention that the
/// inverse is `1`.
pub(crate) fn is_inverse(d: &BigUint, t: &BigUint, n: u64) -> bool {
    if n == 1 {
        return t.is_one();
    }
    match d.to_u32() {
        Some(small) if t.bits() <= n && n >= 64 => is_inverse_small(small, t, n),
        _ => fold(&(d * t), n).is_one(),
    }
}

/// Single pass for a one-word `d` and canonical `t`: `d t = hi 2^n + lo`
/// with `hi < d`, and `lo + hi ≡ 1` means `lo + hi` is `1` or `2^n`.
fn is_inverse_small(d: u32, t: &BigUint, n: u64) -> bool {
    let words = n.div_ceil(64) as usize;
    let mut prod = vec![0u64; words + 1];
    let mut carry = 0u128;
    for (slot, x) in prod.iter_mut().zip(t.iter_u64_digits()) {
        let p = x as u128 * d as u128 + carry;
        *slot = p as u64;
        carry = p >> 64;
    }
    let ndig = t.iter_u64_digits().len();
    prod[ndig] = carry as u64;
    let s = (n % 64) as u32;
    let top = words - 1;
    let hi = if s == 0 { prod[words] } else { (prod[top] >> s) | (prod[words] << (64 - s)) };
    let top_mask = if s == 0 { u64::MAX } else { (1u64 << s) - 1 };
    prod[top] &= top_mask;
    let lo = &prod[..words];
    // lo == 1 - hi, or lo == 2^n - hi.
    if hi <= 1 && lo[0] == 1 - hi && lo[1..].iter().all(|&x| x == 0) {
        return true;
    }
    hi >= 1
        && lo[0] == hi.wrapping_neg() & if top == 0 { top_mask } else { u64::MAX }
        && lo[1..top.max(1)].iter().all(|&x| x == u64::MAX)
        && (top == 0 || lo[top] == top_mask)
}

/// Stein's binary gcd.
pub fn binary_gcd(a: &BigUint, b: &BigUint) -> BigUint {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let za = a.trailing_zeros().unwrap_or(0);
    let zb = b.trailing_zeros().unwrap_or(0);
    let shift = za.min(zb);
    let mut a = a >> za;
    let mut b = b >> zb;
    loop {
        if a > b {
            mem::swap(&mut a, &mut b);
        }
        b -= &a;
        if b.is_zero() {
            return a << shift;
        }
        let z = b.trailing_zeros().unwrap_or(0);
        b >>= z;
    }
}

/// Shape of `d` that admits a closed-form gcd with `2^n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// `2^k + 1`, `k >= 1`.
    PowPlusOne(u64),
    /// `2^k - 1`, `k >= 1`.
    PowMinusOne(u64),
}

fn shape(d: &BigUint) -> Option<Shape> {
    let below = d - 1u32;
    if below.count_ones() == 1 && below.bits() >= 2 {
        return Some(Shape::PowPlusOne(below.bits() - 1));
    }
    let above = d + 1u32;
    if above.count_ones() == 1 {
        return Some(Shape::PowMinusOne(above.bits() - 1));
    }
    None
}

/// `gcd(d, 2^n - 1)`.
///
/// For `d = 2^k + 1` this is `1` when `n / gcd(n, k)` is odd and
/// `2^gcd(n,k) + 1` otherwise; for `d = 2^k - 1` it is `2^gcd(n,k) - 1`.
/// Everything else goes through [`binary_gcd`], after a cheap reduction of
/// the larger operand.
pub fn gcd_with_modulus(d: &BigUint, n: u64) -> Result<BigUint> {
    check_gcd_args(d, n)?;
    Ok(match shape(d) {
        Some(Shape::PowPlusOne(k)) => {
            let g = n.gcd(&k);
            if (n / g) % 2 == 1 {
                BigUint::one()
            } else {
                (BigUint::one() << g) + 1u32
            }
        }
        Some(Shape::PowMinusOne(k)) => mersenne(n.gcd(&k)),
        None => {
            if let Some(m) = d.to_u64() {
                // gcd(d, 2^n - 1) = gcd(d, (2^n - 1) mod d)
                let rest = ((pow2_mod(n, m) as u128 + m as u128 - 1) % m as u128) as u64;
                BigUint::from(m.gcd(&rest))
            } else if d.bits() <= n {
                let two_n = BigUint::from(2u32).modpow(&BigUint::from(n), d);
                let rest = (two_n + d - 1u32) % d;
                binary_gcd(d, &rest)
            } else {
                binary_gcd(&mersenne(n), &fold(d, n))
            }
        }
    })
}

/// `2^e mod m` for `m >= 1`.
fn pow2_mod(mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut base = 2 % m;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// `gcd(d, 2^n - 1)` by plain binary gcd, with no shortcuts.
pub fn gcd_with_modulus_binary(d: &BigUint, n: u64) -> Result<BigUint> {
    check_gcd_args(d, n)?;
    Ok(binary_gcd(d, &mersenne(n)))
}

fn check_gcd_args(d: &BigUint, n: u64) -> Result<()> {
    if d.is_zero() || n == 0 {
        return Err(Error::domain("gcd_with_modulus needs d >= 1 and n >= 1"));
    }
    Ok(())
}

/// Multiplicative order of 2 modulo an odd `d >= 3`, by iterated doubling.
pub fn order_of_two(d: &BigUint) -> Result<u64> {
    if d.is_even() || d < &BigUint::from(3u32) {
        return Err(Error::domain(format!("order of 2 needs an odd modulus >= 3, got {d}")));
    }
    Ok(order_of_two_bounded(d, u64::MAX).expect("2 is a unit modulo odd d"))
}

/// The order of 2 modulo odd `d >= 3` if it is at most `cap`, else `None`.
pub(crate) fn order_of_two_bounded(d: &BigUint, cap: u64) -> Option<u64> {
    if let Some(m) = d.to_u64() {
        let m = m as u128;
        let mut x: u128 = 1;
        let mut o = 0u64;
        while o < cap {
            o += 1;
            x <<= 1;
            if x >= m {
                x -= m;
            }
            if x == 1 {
                return Some(o);
            }
        }
        return None;
    }
    let mut x = BigUint::one();
    let mut o = 0u64;
    while o < cap {
        o += 1;
        x <<= 1u32;
        if &x >= d {
            x -= d;
        }
        if x.is_one() {
            return Some(o);
        }
    }
    None
}

/// The least positive inverse of `d` modulo `2^n - 1` by the textbook
/// extended Euclidean algorithm. This is the reference every other
/// inversion route is tested against.
///
/// For `n = 1` it returns `1`, matching the recursive algorithm's base case.
pub fn euclid_inverse(d: &BigUint, ring: &MersenneRing) -> Result<Residue> {
    if d.is_zero() {
        return Err(Error::NotInvertible {
            d: d.clone(),
            n: ring.n,
            gcd: ring.modulus.clone(),
        });
    }
    if ring.n == 1 {
        return Ok(Residue::unit_ring_inverse());
    }
    if let (true, Some(dd)) = (ring.n <= 62, d.to_u64()) {
        return euclid_word(dd, ring);
    }
    let m = BigInt::from(ring.modulus.clone());
    let (mut old_r, mut r) = (BigInt::from(d.clone()), m.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = mem::replace(&mut s, next_s);
    }
    if !old_r.is_one() {
        return Err(Error::NotInvertible {
            d: d.clone(),
            n: ring.n,
            gcd: old_r.magnitude().clone(),
        });
    }
    let t = old_s.mod_floor(&m);
    Ok(Residue::from_canonical(t.magnitude().clone(), ring.n))
}

/// The same recurrence as [`euclid_inverse`] in machine words.
fn euclid_word(d: u64, ring: &MersenneRing) -> Result<Residue> {
    let m = (1i128 << ring.n) - 1;
    let (mut old_r, mut r) = (d as i128, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { d: BigUint::from(d), n: ring.n, gcd: BigUint::from(old_r as u128) });
    }
    Ok(Residue::from_canonical(BigUint::from(old_s.rem_euclid(m) as u128), ring.n))
}
