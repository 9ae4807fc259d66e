use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::basis::{rank_unchecked, MonomialBasis};
use crate::domain::Domain;
use crate::error::{Error, Result};

/// A homogeneous polynomial stored densely in its degree's [`MonomialBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct Form<D: Domain> {
    domain: D,
    basis: MonomialBasis,
    coeffs: Vec<D::Elem>,
}

impl<D: Domain> Form<D> {
    pub fn zero(domain: &D, num_vars: usize, degree: u32) -> Result<Self> {
        let basis = MonomialBasis::new(num_vars, degree)?;
        Ok(Self {
            coeffs: vec![domain.zero(); basis.size()],
            basis,
            domain: domain.clone(),
        })
    }

    pub fn from_coeffs(domain: &D, num_vars: usize, degree: u32, coeffs: Vec<D::Elem>) -> Result<Self> {
        let basis = MonomialBasis::new(num_vars, degree)?;
        if coeffs.len() != basis.size() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                basis.size()
            )));
        }
        Ok(Self {
            domain: domain.clone(),
            basis,
            coeffs,
        })
    }

    pub fn constant(domain: &D, num_vars: usize, c: D::Elem) -> Result<Self> {
        Self::from_coeffs(domain, num_vars, 0, vec![c])
    }

    pub fn monomial(domain: &D, expo: &[u32], c: D::Elem) -> Result<Self> {
        let degree = expo.iter().sum();
        let mut f = Self::zero(domain, expo.len(), degree)?;
        let r = f.basis.rank(expo)?;
        f.coeffs[r] = c;
        Ok(f)
    }

    pub fn variable(domain: &D, num_vars: usize, i: usize) -> Result<Self> {
        if i >= num_vars {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: num_vars,
            });
        }
        let mut expo = vec![0; num_vars];
        expo[i] = 1;
        Self::monomial(domain, &expo, domain.one())
    }

    /// The linear form `Σ c_i x_i`.
    pub fn linear(domain: &D, coeffs: &[D::Elem]) -> Result<Self> {
        let mut f = Self::zero(domain, coeffs.len(), 1)?;
        let mut e = vec![0; coeffs.len()];
        for (i, c) in coeffs.iter().enumerate() {
            e[i] = 1;
            let r = rank_unchecked(&e);
            f.coeffs[r] = c.clone();
            e[i] = 0;
        }
        Ok(f)
    }

    /// Form whose coefficients are drawn independently by the domain's
    /// sampling rule from a ChaCha8 stream seeded with `seed`.
    pub fn random(domain: &D, num_vars: usize, degree: u32, seed: u64) -> Result<Self> {
        let basis = MonomialBasis::new(num_vars, degree)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..basis.size()).map(|_| domain.sample(&mut rng)).collect();
        Ok(Self {
            domain: domain.clone(),
            basis,
            coeffs,
        })
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn num_vars(&self) -> usize {
        self.basis.num_vars()
    }

    pub fn coeffs(&self) -> &[D::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<D::Elem> {
        self.coeffs
    }

    pub fn coeff(&self, expo: &[u32]) -> Result<&D::Elem> {
        Ok(&self.coeffs[self.basis.rank(expo)?])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.domain.is_zero(c))
    }

    /// Nonzero terms as (exponent vector, coefficient), in basis order.
    pub fn terms(&self) -> Vec<(Vec<u32>, D::Elem)> {
        let mut expo = vec![0; self.num_vars()];
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !self.domain.is_zero(c) {
                self.basis.unrank_into(i, &mut expo);
                out.push((expo.clone(), c.clone()));
            }
        }
        out
    }

    /// Apply `f` to every coefficient, landing in another domain.
    pub fn map_coeffs<E: Domain>(&self, target: &E, f: impl Fn(&D::Elem) -> E::Elem) -> Form<E> {
        Form {
            domain: target.clone(),
            basis: self.basis,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        if self.num_vars() != other.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "forms in {} and {} variables",
                self.num_vars(),
                other.num_vars()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.domain.add(a, b))
            .collect();
        Ok(Self { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.domain.neg(a)).collect();
        Self { coeffs, ..self.clone() }
    }

    pub fn scale(&self, c: &D::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.domain.mul(a, c)).collect();
        Self { coeffs, ..self.clone() }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let dom = &self.domain;
        let mut out = Self::zero(dom, self.num_vars(), self.degree() + other.degree())?;
        let rhs = other.terms();
        let mut expo = vec![0; self.num_vars()];
        let mut sum = vec![0; self.num_vars()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if dom.is_zero(a) {
                continue;
            }
            self.basis.unrank_into(i, &mut expo);
            for (e, b) in &rhs {
                for ((s, x), y) in sum.iter_mut().zip(&expo).zip(e) {
                    *s = x + y;
                }
                let r = rank_unchecked(&sum);
                out.coeffs[r] = dom.add(&out.coeffs[r], &dom.mul(a, b));
            }
        }
        Ok(out)
    }

    /// `self^k` by repeated squaring; `f^0` is the constant 1.
    pub fn power(&self, k: u32) -> Result<Self> {
        let mut acc = Self::constant(&self.domain, self.num_vars(), self.domain.one())?;
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(acc)
    }

    /// Iterated partial derivative `∂^alpha`. Over a prime field the
    /// characteristic must exceed the degree so that no falling-factorial
    /// coefficient is silently reduced to zero.
    pub fn derivative(&self, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "multi-index has {} entries for {} variables",
                alpha.len(),
                self.num_vars()
            )));
        }
        let order: u32 = alpha.iter().sum();
        if order > self.degree() {
            return Err(Error::InvalidArgument(format!(
                "derivative of order {order} of a form of degree {}",
                self.degree()
            )));
        }
        check_characteristic(&self.domain, self.degree() as u64)?;
        let dom = &self.domain;
        let mut out = Self::zero(dom, self.num_vars(), self.degree() - order)?;
        let mut lowered = vec![0; self.num_vars()];
        for (e, c) in self.terms() {
            if e.iter().zip(alpha).any(|(x, a)| x < a) {
                continue;
            }
            let mut coeff = c;
            for ((l, &x), &a) in lowered.iter_mut().zip(&e).zip(alpha) {
                *l = x - a;
                for f in (x - a + 1)..=x {
                    coeff = dom.mul(&coeff, &dom.from_u64(f as u64));
                }
            }
            let r = rank_unchecked(&lowered);
            out.coeffs[r] = dom.add(&out.coeffs[r], &coeff);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[D::Elem]) -> Result<D::Elem> {
        if point.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates for {} variables",
                point.len(),
                self.num_vars()
            )));
        }
        let dom = &self.domain;
        let powers = coordinate_powers(dom, point, self.degree());
        let mut acc = dom.zero();
        for (e, c) in self.terms() {
            let mut term = c;
            for (i, &x) in e.iter().enumerate() {
                term = dom.mul(&term, &powers[i][x as usize]);
            }
            acc = dom.add(&acc, &term);
        }
        Ok(acc)
    }
}

/// `powers[i][e] = point[i]^e` for `e ≤ degree`.
pub(crate) fn coordinate_powers<D: Domain>(dom: &D, point: &[D::Elem], degree: u32) -> Vec<Vec<D::Elem>> {
    point
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(degree as usize + 1);
            row.push(dom.one());
            for e in 1..=degree as usize {
                let next = dom.mul(&row[e - 1], x);
                row.push(next);
            }
            row
        })
        .collect()
}

pub(crate) fn check_characteristic<D: Domain>(dom: &D, degree: u64) -> Result<()> {
    let p = dom.characteristic();
    if p != 0 && p <= degree {
        Err(Error::UnsupportedCharacteristic {
            characteristic: p,
            needed: degree,
        })
    } else {
        Ok(())
    }
}

/// Random form of degree `d` in `n + 1` variables.
pub fn random_form<D: Domain>(n: u32, d: u32, domain: &D, seed: u64) -> Result<Form<D>> {
    Form::random(domain, n as usize + 1, d, seed)
}
