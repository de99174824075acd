use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// A finite 0/1 string `σ`. The empty string indexes `d = 𝟙_{(0,1]}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DyadicString {
    bits: Vec<bool>,
}

impl DyadicString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The bits read as a binary numeral, most significant first.
    pub fn value(&self) -> u64 {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn child(&self, bit: bool) -> Self {
        let mut bits = self.bits.clone();
        bits.push(bit);
        Self { bits }
    }

    /// All `2^len` strings of the given length, by increasing binary value.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = Self> {
        assert!(len < 64, "string length {len} too large to enumerate");
        (0..(1u64 << len)).map(move |v| Self {
            bits: (0..len).rev().map(|k| (v >> k) & 1 == 1).collect(),
        })
    }
}

impl fmt::Display for DyadicString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for DyadicString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Structural(format!("not a 0/1 string: {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

/// Half-open `(left, right]` with `right − left = 2^{−ℓ(σ)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DyadicInterval {
    #[serde(with = "exact::serde_rational")]
    pub left: Rational,
    #[serde(with = "exact::serde_rational")]
    pub right: Rational,
}

impl DyadicInterval {
    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.left <= other.left && other.right <= self.right
    }
}

/// `I(σ) = (Σ σ_i 2^{−i}, 2^{−ℓ(σ)} + Σ σ_i 2^{−i}]`.
pub fn interval_of_string(sigma: &DyadicString) -> DyadicInterval {
    let left = sigma
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(exact::int(0), |acc, (i, _)| acc + exact::pow2_neg(i + 1));
    let right = &left + exact::pow2_neg(sigma.len());
    DyadicInterval { left, right }
}

/// Injection of finite strings into the positive integers:
/// `Ψ(σ) = 2^{ℓ(σ)} + value(σ)`. Never 0, so the block
/// `(Ψ(σ), Ψ(σ)+1]` never meets `(0, 1]`.
pub fn psi(sigma: &DyadicString) -> BigInt {
    (BigInt::from(1) << sigma.len()) + BigInt::from(sigma.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn s(bits: &str) -> DyadicString {
        bits.parse().unwrap()
    }

    #[test]
    fn intervals_match_the_dyadic_pieces() {
        assert_eq!(
            interval_of_string(&s("0")),
            DyadicInterval { left: ratio(0, 1), right: ratio(1, 2) }
        );
        assert_eq!(
            interval_of_string(&s("11")),
            DyadicInterval { left: ratio(3, 4), right: ratio(1, 1) }
        );
        assert_eq!(
            interval_of_string(&s("")),
            DyadicInterval { left: ratio(0, 1), right: ratio(1, 1) }
        );
    }

    #[test]
    fn children_nest() {
        for sigma in DyadicString::all_of_len(4) {
            let parent = interval_of_string(&sigma);
            for b in [false, true] {
                assert!(parent.contains_interval(&interval_of_string(&sigma.child(b))));
            }
        }
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(&s("")), BigInt::from(1));
        assert_eq!(psi(&s("0")), BigInt::from(2));
        assert_eq!(psi(&s("1")), BigInt::from(3));
        assert_eq!(psi(&s("10")), BigInt::from(6));
    }

    #[test]
    fn psi_is_injective_up_to_length_10() {
        let mut seen = std::collections::HashSet::new();
        for len in 0..=10 {
            for sigma in DyadicString::all_of_len(len) {
                assert!(seen.insert(psi(&sigma)));
            }
        }
    }

    #[test]
    fn display_round_trip() {
        assert_eq!(s("0110").to_string(), "0110");
        assert!("012".parse::<DyadicString>().is_err());
    }
}
