//! Coefficient domains.
//!
//! Every form and matrix carries a domain value that owns the arithmetic.
//! Elements are plain data (`u64` residues, `Complex64`, `BigRational`);
//! the domain knows how to combine them. Exact computations run over a
//! [`PrimeField`] (or [`RationalField`] for small hand-checked cases); the
//! numeric decomposition paths use [`ComplexField`].

mod complex;
mod prime;
mod rational;

use std::fmt::Debug;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use complex::{format_complex, parse_complex, ComplexField};
pub use prime::{is_prime, largest_prime_below, PrimeField, ShoupMul, DEFAULT_PRIME_CEILING};
pub use rational::RationalField;

/// Serializable description of a coefficient domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoefficientDomain {
    PrimeField { modulus: u64 },
    ComplexDouble,
    Rational,
}

pub trait Domain: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn descriptor(&self) -> CoefficientDomain;

    /// Zero for characteristic-zero domains.
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn from_u64(&self, v: u64) -> Self::Elem {
        match i64::try_from(v) {
            Ok(s) => self.from_i64(s),
            Err(_) => {
                let half = self.from_i64((v / 2) as i64);
                let twice = self.add(&half, &half);
                self.add(&twice, &self.from_i64((v % 2) as i64))
            }
        }
    }

    /// Draw one element by the domain's sampling rule: uniform residues for
    /// prime fields, standard complex Gaussian for complex doubles, and
    /// uniform integers in `[-1000, 1000]` for rationals.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// A primitive `k`-th root of unity, chosen deterministically from `seed`.
    fn primitive_root_of_unity(&self, k: u64, seed: u64) -> Result<Self::Elem>;

    /// Split an element into (is_negative, magnitude) for signed printing.
    fn split_sign(&self, a: &Self::Elem) -> (bool, Self::Elem);

    /// Coefficient text as used by the form printer. Must be accepted by
    /// [`Domain::parse_coeff`].
    fn format_coeff(&self, a: &Self::Elem) -> String;

    /// Parse a non-negative coefficient token: an integer, a decimal, a
    /// fraction `a/b`, or (complex domain) a parenthesized `(a+bi)`.
    fn parse_coeff(&self, token: &str) -> Result<Self::Elem>;

    /// Element as a standalone string (JSON reports).
    fn format_elem(&self, a: &Self::Elem) -> String;
}

/// Domains where every nonzero element is exactly invertible and equality is
/// exact, so elimination results are certificates rather than estimates.
pub trait ExactField: Domain {}

impl ExactField for PrimeField {}
impl ExactField for RationalField {}

/// Parse an unsigned decimal literal `123`, `12.5`, `3/4` into (numerator,
/// denominator) with a positive denominator.
pub(crate) fn parse_decimal_ratio(token: &str) -> Result<(num_bigint::BigInt, num_bigint::BigInt)> {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    let bad = |msg: &str| crate::Error::Parse {
        position: 0,
        message: format!("{msg}: {token:?}"),
    };
    if let Some((num, den)) = token.split_once('/') {
        let (n, nd) = parse_decimal_ratio(num)?;
        let (d, dd) = parse_decimal_ratio(den)?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok((n * dd, d * nd));
    }
    let (int_part, frac_part) = match token.split_once('.') {
        Some((i, f)) => (i, f),
        None => (token, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("empty number"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad("malformed number"));
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad("malformed number"))?
    };
    let mut den = BigInt::one();
    for _ in 0..frac_part.len() {
        den *= 10;
    }
    Ok((num, den))
}
