//! Textual integer formats shared by the CLI and the fixture files: decimal,
//! hexadecimal without prefix, and MSB-first bit strings of explicit length.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{Num, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Dec,
    Hex,
    Bits,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dec" => Ok(Format::Dec),
            "hex" => Ok(Format::Hex),
            "bits" => Ok(Format::Bits),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Dec => "dec",
            Format::Hex => "hex",
            Format::Bits => "bits",
        })
    }
}

pub fn parse_dec(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("`{s}` is not a decimal integer")));
    }
    BigUint::from_str_radix(s, 10).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_hex(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::Parse(format!("`{s}` is not a hexadecimal integer")));
    }
    BigUint::from_str_radix(s, 16).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses an MSB-first string of `0`/`1`. Underscores and spaces are
/// accepted as display separators and ignored.
pub fn parse_bits(s: &str) -> Result<(BigUint, u64)> {
    let mut value = BigUint::zero();
    let mut len = 0u64;
    let mut chunk = 0u64;
    let mut chunk_len = 0u32;
    for c in s.chars() {
        let bit = match c {
            '0' => 0,
            '1' => 1,
            '_' | ' ' => continue,
            other => return Err(Error::Parse(format!("invalid bit character `{other}`"))),
        };
        chunk = (chunk << 1) | bit;
        chunk_len += 1;
        len += 1;
        if chunk_len == 64 {
            value = (value << 64u32) | BigUint::from(chunk);
            chunk = 0;
            chunk_len = 0;
        }
    }
    if len == 0 {
        return Err(Error::Parse("empty bit string".into()));
    }
    if chunk_len > 0 {
        value = (value << chunk_len) | BigUint::from(chunk);
    }
    Ok((value, len))
}

pub fn to_dec(x: &BigUint) -> String {
    x.to_str_radix(10)
}

pub fn to_hex(x: &BigUint) -> String {
    x.to_str_radix(16)
}

/// MSB-first bits of `x` padded with leading zeros to `len`. Panics if `x`
/// does not fit, which callers rule out.
pub fn to_bits(x: &BigUint, len: u64) -> String {
    assert!(x.bits() <= len, "{} bits do not fit in {len}", x.bits());
    (0..len).rev().map(|i| if x.bit(i) { '1' } else { '0' }).collect()
}

/// Inserts `sep` every `group` characters counting from the least
/// significant (rightmost) end.
pub fn group_bits(bits: &str, group: usize, sep: char) -> String {
    let len = bits.len();
    let mut out = String::with_capacity(len + len / group.max(1));
    for (i, c) in bits.chars().enumerate() {
        if i > 0 && (len - i) % group == 0 {
            out.push(sep);
        }
        out.push(c);
    }
    out
}

/// Renders `x` in `format`; bit strings use width `len` and 8-bit grouping.
pub fn render(x: &BigUint, len: u64, format: Format) -> String {
    match format {
        Format::Dec => to_dec(x),
        Format::Hex => to_hex(x),
        Format::Bits => group_bits(&to_bits(x, len), 8, '_'),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_round_trip_keeps_leading_zeros() {
        let (v, len) = parse_bits("0000101").unwrap();
        assert_eq!(v, BigUint::from(5u32));
        assert_eq!(len, 7);
        assert_eq!(to_bits(&v, len), "0000101");
    }

    #[test]
    fn long_bit_strings_cross_word_boundaries() {
        let s: String = (0..150).map(|i| if i % 3 == 0 { '1' } else { '0' }).collect();
        let (v, len) = parse_bits(&s).unwrap();
        assert_eq!(to_bits(&v, len), s);
    }

    #[test]
    fn grouping_counts_from_the_right() {
        assert_eq!(group_bits("1100001101101001", 8, '_'), "11000011_01101001");
        assert_eq!(group_bits("101100001101101001", 8, '_'), "10_11000011_01101001");
        assert_eq!(group_bits("101", 8, '_'), "101");
        let (v, _) = parse_bits("10_11000011").unwrap();
        assert_eq!(v, BigUint::from(0b1011000011u32));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_dec("12a").is_err());
        assert!(parse_dec("").is_err());
        assert!(parse_dec("-3").is_err());
        assert!(parse_hex("0x1f").is_err());
        assert!(parse_bits("102").is_err());
        assert!(parse_bits("").is_err());
        assert_eq!(parse_hex("1f").unwrap(), BigUint::from(31u32));
        assert!("oct".parse::<Format>().is_err());
    }
}
