use num_complex::Complex64;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use super::{parse_decimal_ratio, CoefficientDomain, Domain};
use crate::error::{Error, Result};

/// Complex doubles. Only the numeric decomposition paths use this domain;
/// equality and `is_zero` are exact floating-point comparisons.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ComplexField;

/// `a+bi` with 17 significant digits per component, enough to round-trip an `f64`.
pub fn format_complex(c: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", c.re, c.im)
}

/// Parse `a+bi`, `a-bi`, `a`, or `bi` (optionally parenthesized).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse {
        position: 0,
        message: format!("malformed complex number {s:?}"),
    };
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(&t);
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent and not leading
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

impl Domain for ComplexField {
    type Elem = Complex64;

    fn descriptor(&self) -> CoefficientDomain {
        CoefficientDomain::ComplexDouble
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(&self, v: i64) -> Complex64 {
        Complex64::new(v as f64, 0.0)
    }

    fn from_u64(&self, v: u64) -> Complex64 {
        Complex64::new(v as f64, 0.0)
    }

    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }

    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }

    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }

    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }

    fn inv(&self, a: &Complex64) -> Option<Complex64> {
        if *a == self.zero() {
            None
        } else {
            Some(a.inv())
        }
    }

    fn is_zero(&self, a: &Complex64) -> bool {
        a.re == 0.0 && a.im == 0.0
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Complex64 {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    fn primitive_root_of_unity(&self, k: u64, _seed: u64) -> Result<Complex64> {
        if k == 0 {
            return Err(Error::InvalidArgument("root of unity of order 0".into()));
        }
        Ok(Complex64::from_polar(1.0, std::f64::consts::TAU / k as f64))
    }

    fn split_sign(&self, a: &Complex64) -> (bool, Complex64) {
        (false, *a)
    }

    fn format_coeff(&self, a: &Complex64) -> String {
        format!("({})", format_complex(*a))
    }

    fn parse_coeff(&self, token: &str) -> Result<Complex64> {
        if token.starts_with('(') || token.ends_with('i') {
            return parse_complex(token);
        }
        if token.contains('/') {
            let (n, d) = parse_decimal_ratio(token)?;
            let f = |b: num_bigint::BigInt| num_traits::ToPrimitive::to_f64(&b).unwrap_or(f64::NAN);
            return Ok(Complex64::new(f(n) / f(d), 0.0));
        }
        token
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| Error::Parse {
                position: 0,
                message: format!("malformed coefficient {token:?}"),
            })
    }

    fn format_elem(&self, a: &Complex64) -> String {
        format_complex(*a)
    }
}
