//! Fixed-length binary sequences, most significant bit first.
//!
//! Leading zeros are part of the sequence: `0101` and `101` are different
//! sequences representing the same integer.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::repr;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSeq {
    /// `bits[0]` is the most significant bit.
    bits: Vec<bool>,
}

impl BitSeq {
    /// The length-`len` sequence representing `v`.
    pub fn from_value(v: &BigUint, len: u64) -> Result<Self> {
        if v.bits() > len {
            return Err(Error::domain(format!(
                "value needs {} bits, sequence length is {len}",
                v.bits()
            )));
        }
        Ok(BitSeq { bits: (0..len).rev().map(|i| v.bit(i)).collect() })
    }

    pub fn from_u64(v: u64, len: u64) -> Result<Self> {
        Self::from_value(&BigUint::from(v), len)
    }

    pub fn zeros(len: u64) -> Self {
        BitSeq { bits: vec![false; len as usize] }
    }

    pub fn ones(len: u64) -> Self {
        BitSeq { bits: vec![true; len as usize] }
    }

    pub fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn value(&self) -> BigUint {
        let mut digits = vec![0u32; self.bits.len().div_ceil(32)];
        for (i, &b) in self.bits.iter().rev().enumerate() {
            if b {
                digits[i / 32] |= 1 << (i % 32);
            }
        }
        BigUint::new(digits)
    }

    /// Bitwise complement; represents `2^len - 1 - value`.
    pub fn complement(&self) -> Self {
        BitSeq { bits: self.bits.iter().map(|b| !b).collect() }
    }

    /// `self | other`: `self` supplies the high bits.
    pub fn concat(&self, other: &BitSeq) -> Self {
        let mut bits = Vec::with_capacity(self.bits.len() + other.bits.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitSeq { bits }
    }

    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a BitSeq>) -> Self {
        let mut bits = Vec::new();
        for p in parts {
            bits.extend_from_slice(&p.bits);
        }
        BitSeq { bits }
    }

    pub fn repeat(&self, times: u64) -> Self {
        BitSeq { bits: self.bits.repeat(times as usize) }
    }

    /// Number of ones.
    pub fn weight(&self) -> u64 {
        self.bits.iter().filter(|&&b| b).count() as u64
    }

    /// MSB-first with `sep` inserted every 8 bits, counted from the right.
    pub fn grouped(&self, sep: char) -> String {
        repr::group_bits(&self.to_string(), 8, sep)
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for BitSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (value, len) = repr::parse_bits(s)?;
        BitSeq::from_value(&value, len)
    }
}

/// Splits `(2^s - 1) * u` into its two length-`s` halves `w | w̄`, where `w`
/// represents `u - 1` and `w̄` its complement. The product therefore always
/// has weight exactly `s`.
pub fn mersenne_multiple_decompose(s: u64, u: &BigUint) -> Result<(BitSeq, BitSeq)> {
    if s < 2 {
        return Err(Error::domain(format!("decomposition needs s >= 2, got {s}")));
    }
    if u.is_zero() || u.bits() > s {
        return Err(Error::domain(format!("decomposition needs 0 < u < 2^{s}, got {u}")));
    }
    let w = BitSeq::from_value(&(u - BigUint::one()), s)?;
    let w_bar = w.complement();
    Ok((w, w_bar))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> BitSeq {
        s.parse().unwrap()
    }

    #[test]
    fn to_seq_examples() {
        assert_eq!(BitSeq::from_u64(5, 4).unwrap().to_string(), "0101");
        assert_eq!(BitSeq::from_u64(1, 1).unwrap().to_string(), "1");
        assert_eq!(BitSeq::from_u64(255, 8).unwrap(), BitSeq::ones(8));
        assert!(BitSeq::from_u64(16, 4).is_err());
        assert_eq!(BitSeq::from_u64(0, 3).unwrap(), BitSeq::zeros(3));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(seq("0101").complement(), seq("1010"));
        assert_eq!(seq("0101").complement().complement(), seq("0101"));
        let s = BitSeq::from_u64(37, 9).unwrap();
        assert_eq!(s.complement().value(), BigUint::from(511u32 - 37));
    }

    #[test]
    fn concat_examples() {
        let c = seq("1").concat(&seq("10"));
        assert_eq!(c.to_string(), "110");
        assert_eq!(c.value(), BigUint::from(6u32));
        let x = BitSeq::from_u64(13, 5).unwrap();
        assert_eq!(x.concat(&BitSeq::zeros(4)).value(), BigUint::from(13u32 << 4));
        let all = BitSeq::concat_all([&seq("11000011"), &seq("1"), &seq("01101001")]);
        assert_eq!(all.to_string(), "11000011101101001");
    }

    #[test]
    fn weight_examples() {
        for k in 1..20u64 {
            assert_eq!(BitSeq::from_u64((1 << k) + 1, k + 1).unwrap().weight(), 2);
        }
        assert_eq!(BitSeq::from_u64(15, 5).unwrap().weight(), 4);
        assert_eq!(BitSeq::ones(77).weight(), 77);
    }

    #[test]
    fn decompose_examples() {
        let (w, wb) = mersenne_multiple_decompose(4, &BigUint::from(3u32)).unwrap();
        assert_eq!(w.to_string(), "0010");
        assert_eq!(wb.to_string(), "1101");
        assert_eq!(w.concat(&wb).value(), BigUint::from(45u32));

        let (w, wb) = mersenne_multiple_decompose(2, &BigUint::from(1u32)).unwrap();
        assert_eq!((w.to_string().as_str(), wb.to_string().as_str()), ("00", "11"));
        assert_eq!(w.concat(&wb).value(), BigUint::from(3u32));
    }

    #[test]
    fn decompose_rejects_out_of_range() {
        assert!(mersenne_multiple_decompose(1, &BigUint::from(1u32)).is_err());
        assert!(mersenne_multiple_decompose(4, &BigUint::from(0u32)).is_err());
        assert!(mersenne_multiple_decompose(4, &BigUint::from(16u32)).is_err());
    }

    #[test]
    fn grouped_display() {
        let s = seq("1100001101101001");
        assert_eq!(s.grouped('_'), "11000011_01101001");
    }
}
