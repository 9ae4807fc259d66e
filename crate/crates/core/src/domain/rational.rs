use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use super::{parse_decimal_ratio, CoefficientDomain, Domain};
use crate::error::{Error, Result};

/// Exact rationals, for small hand-checkable computations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RationalField;

impl Domain for RationalField {
    type Elem = BigRational;

    fn descriptor(&self) -> CoefficientDomain {
        CoefficientDomain::Rational
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_u64(&self, v: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        self.from_i64(rng.random_range(-1000..=1000))
    }

    fn primitive_root_of_unity(&self, k: u64, _seed: u64) -> Result<BigRational> {
        match k {
            1 => Ok(self.one()),
            2 => Ok(self.from_i64(-1)),
            _ => Err(Error::Configuration(format!(
                "the rationals contain no primitive root of unity of order {k}"
            ))),
        }
    }

    fn split_sign(&self, a: &BigRational) -> (bool, BigRational) {
        (a.is_negative(), a.abs())
    }

    fn format_coeff(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn parse_coeff(&self, token: &str) -> Result<BigRational> {
        let (n, d) = parse_decimal_ratio(token)?;
        Ok(BigRational::new(n, d))
    }

    fn format_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
}
