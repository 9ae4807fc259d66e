use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse_decimal_ratio, CoefficientDomain, Domain};
use crate::error::{Error, Result};

/// Automatically selected moduli lie below this bound.
pub const DEFAULT_PRIME_CEILING: u64 = 1 << 62;

/// The prime field `F_p` with `p < 2^63`; elements are canonical residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 {
            return Err(Error::Configuration(format!("modulus {p} must be below 2^63")));
        }
        if !is_prime(p) {
            return Err(Error::Configuration(format!("modulus {p} is not prime")));
        }
        Ok(Self { p })
    }

    /// Largest prime below 2^62 with `p ≡ 1 (mod congruence)`.
    pub fn auto(congruence: u64) -> Result<Self> {
        Self::auto_below(DEFAULT_PRIME_CEILING, congruence)
    }

    pub fn auto_below(ceiling: u64, congruence: u64) -> Result<Self> {
        largest_prime_below(ceiling, congruence)
            .map(|p| Self { p })
            .ok_or_else(|| Error::Configuration(format!("no prime below {ceiling} is 1 mod {congruence}")))
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Fails unless `p > bound`. Used wherever falling factorials up to
    /// `bound` must stay invertible.
    pub fn require_above(&self, bound: u64) -> Result<()> {
        if self.p > bound {
            Ok(())
        } else {
            Err(Error::UnsupportedCharacteristic {
                characteristic: self.p,
                needed: bound,
            })
        }
    }

    pub fn require_root_of_unity(&self, k: u64) -> Result<()> {
        if k == 0 || !(self.p - 1).is_multiple_of(k) {
            Err(Error::Configuration(format!(
                "a primitive root of unity of order {k} needs p ≡ 1 (mod {k}); p = {} is {} mod {k}",
                self.p,
                if k == 0 { 0 } else { self.p % k }
            )))
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn mul_mod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn add_mod(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_mod(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn shoup(&self, w: u64) -> ShoupMul {
        ShoupMul::new(w, self.p)
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = ((v % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }
}

/// Multiplication by a fixed residue `w` using a precomputed quotient
/// `floor(w * 2^64 / p)`; needs only wrapping 64-bit products per call.
#[derive(Debug, Clone, Copy)]
pub struct ShoupMul {
    w: u64,
    w_quot: u64,
    p: u64,
}

impl ShoupMul {
    pub fn new(w: u64, p: u64) -> Self {
        debug_assert!(w < p);
        let w_quot = (((w as u128) << 64) / p as u128) as u64;
        Self { w, w_quot, p }
    }

    #[inline(always)]
    pub fn mul(&self, b: u64) -> u64 {
        let q = ((self.w_quot as u128 * b as u128) >> 64) as u64;
        let r = self.w.wrapping_mul(b).wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve primes as bases are exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime `p < ceiling` with `p ≡ 1 (mod congruence)`.
pub fn largest_prime_below(ceiling: u64, congruence: u64) -> Option<u64> {
    let m = congruence.max(1);
    if ceiling <= 2 {
        return None;
    }
    // largest candidate ≡ 1 mod m strictly below ceiling
    let top = ceiling - 1;
    let mut c = top - ((top + m - 1) % m);
    loop {
        if c >= 2 && is_prime(c) {
            return Some(c);
        }
        if c < m + 2 {
            return None;
        }
        c -= m;
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Domain for PrimeField {
    type Elem = u64;

    fn descriptor(&self) -> CoefficientDomain {
        CoefficientDomain::PrimeField { modulus: self.p }
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        let r = (v as i128).rem_euclid(self.p as i128);
        r as u64
    }

    fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.add_mod(*a, *b)
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.sub_mod(*a, *b)
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_mod(*a, *b)
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(pow_mod(*a, self.p - 2, self.p))
        }
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn pow(&self, a: &u64, e: u64) -> u64 {
        pow_mod(*a, e, self.p)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.random_range(0..self.p)
    }

    fn primitive_root_of_unity(&self, k: u64, seed: u64) -> Result<u64> {
        self.require_root_of_unity(k)?;
        if k == 1 {
            return Ok(1);
        }
        let cofactor = (self.p - 1) / k;
        let factors = prime_factors(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let x = rng.random_range(2..self.p);
            let y = pow_mod(x, cofactor, self.p);
            if factors.iter().all(|q| pow_mod(y, k / q, self.p) != 1) {
                return Ok(y);
            }
        }
    }

    fn split_sign(&self, a: &u64) -> (bool, u64) {
        if *a > self.p / 2 {
            (true, self.p - a)
        } else {
            (false, *a)
        }
    }

    fn format_coeff(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse_coeff(&self, token: &str) -> Result<u64> {
        let (num, den) = parse_decimal_ratio(token)?;
        let den = self.reduce_bigint(&den.abs());
        let inv = self.inv(&den).ok_or_else(|| Error::Parse {
            position: 0,
            message: format!("denominator of {token:?} vanishes mod {}", self.p),
        })?;
        Ok(self.mul_mod(self.reduce_bigint(&num), inv))
    }

    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}
