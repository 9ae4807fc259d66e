//! Binary forms of even degree as sums of two squares.
//!
//! Split `f = A·B` into two degree-`d` factors along its linear factors;
//! then `f = ((A + B)/2)^2 + (i(A − B)/2)^2`. Linear factors come from the
//! roots `r` of `f(1, t)`, each giving `x1 − r·x0`; a drop in the degree of
//! `f(1, t)` means roots at infinity, each giving a factor `x0`. The leading
//! coefficient `c` of `f(1, t)` is shared as `√c` (principal branch) on both
//! sides.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::roots::polynomial_roots;
use super::serialize_form;
use crate::domain::{format_complex, ComplexField};
use crate::error::{Error, Result};
use crate::polyring::{binomial, Form};

/// A point of the projective line, written as `x1/x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectiveRoot {
    Finite(Complex64),
    Infinity,
}

impl ProjectiveRoot {
    /// `x1 − r·x0`, or `x0` at infinity.
    pub fn linear_factor(&self) -> Result<Form<ComplexField>> {
        match self {
            Self::Finite(r) => Form::linear(&ComplexField, &[-r, Complex64::new(1.0, 0.0)]),
            Self::Infinity => Form::linear(&ComplexField, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
        }
    }

    /// Chordal distance on the Riemann sphere.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => {
                (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
            (Self::Finite(a), Self::Infinity) | (Self::Infinity, Self::Finite(a)) => 1.0 / (1.0 + a.norm_sqr()).sqrt(),
            (Self::Infinity, Self::Infinity) => 0.0,
        }
    }

    fn sort_key(&self) -> (bool, f64, f64) {
        match self {
            Self::Finite(r) => (false, r.arg(), r.norm()),
            Self::Infinity => (true, 0.0, 0.0),
        }
    }
}

impl Serialize for ProjectiveRoot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(r) => s.serialize_str(&format_complex(*r)),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Leading coefficient of `f(1, t)` and the `deg f` projective roots, finite
/// ones first.
pub fn binary_roots(f: &Form<ComplexField>) -> Result<(Complex64, Vec<ProjectiveRoot>)> {
    if f.num_vars() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a binary form, got {} variables",
            f.num_vars()
        )));
    }
    let scale = max_norm(f.coeffs());
    if scale == 0.0 {
        return Err(Error::InvalidArgument("the zero form has no roots".into()));
    }
    if !scale.is_finite() {
        return Err(Error::NonFinite("form coefficients".into()));
    }
    // coeffs[j] multiplies x0^{D−j} x1^j
    let cutoff = 1e-14 * scale;
    let top = f.coeffs().iter().rposition(|c| c.norm() > cutoff).unwrap_or(0);
    let finite = polynomial_roots(&f.coeffs()[..=top])?;
    let mut roots: Vec<ProjectiveRoot> = finite.into_iter().map(ProjectiveRoot::Finite).collect();
    roots.extend(std::iter::repeat_n(ProjectiveRoot::Infinity, f.degree() as usize - top));
    Ok((f.coeffs()[top], roots))
}

fn max_norm(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖f − g‖∞ / ‖f‖∞`.
pub fn relative_residual(f: &Form<ComplexField>, g: &Form<ComplexField>) -> Result<f64> {
    Ok(max_norm(f.sub(g)?.coeffs()) / max_norm(f.coeffs()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoSquares {
    pub roots: Vec<ProjectiveRoot>,
    /// Indices into `roots` whose factors make up `A`.
    pub pairing: Vec<usize>,
    #[serde(serialize_with = "serialize_form")]
    pub a: Form<ComplexField>,
    #[serde(serialize_with = "serialize_form")]
    pub b: Form<ComplexField>,
    #[serde(serialize_with = "serialize_form")]
    pub s1: Form<ComplexField>,
    #[serde(serialize_with = "serialize_form")]
    pub s2: Form<ComplexField>,
    /// `‖f − s1² − s2²‖∞ / ‖f‖∞`.
    pub residual: f64,
}

/// Sort the roots by argument (infinity last) and give every other one to `A`.
pub fn default_pairing(roots: &[ProjectiveRoot]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (roots[i].sort_key(), roots[j].sort_key());
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(i.cmp(&j))
    });
    let mut picked: Vec<usize> = order.into_iter().step_by(2).collect();
    picked.sort_unstable();
    picked
}

fn half_degree(f: &Form<ComplexField>) -> Result<usize> {
    if f.degree() == 0 || f.degree() % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "need a form of positive even degree, got degree {}",
            f.degree()
        )));
    }
    Ok(f.degree() as usize / 2)
}

fn split_with(
    f: &Form<ComplexField>,
    lead: Complex64,
    roots: &[ProjectiveRoot],
    factors: &[Form<ComplexField>],
    pairing: Vec<usize>,
) -> Result<TwoSquares> {
    let d = roots.len() / 2;
    let mut seen = vec![false; roots.len()];
    for &i in &pairing {
        if i >= roots.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument(format!(
                "pairing must pick {d} distinct indices below {}",
                roots.len()
            )));
        }
    }
    if pairing.len() != d {
        return Err(Error::InvalidArgument(format!(
            "pairing must pick {d} roots, got {}",
            pairing.len()
        )));
    }
    let root_c = lead.sqrt();
    let mut a = Form::constant(&ComplexField, 2, root_c)?;
    let mut b = Form::constant(&ComplexField, 2, root_c)?;
    for (i, factor) in factors.iter().enumerate() {
        if seen[i] {
            a = a.multiply(factor)?;
        } else {
            b = b.multiply(factor)?;
        }
    }
    let half = Complex64::new(0.5, 0.0);
    let s1 = a.add(&b)?.scale(&half);
    let s2 = a.sub(&b)?.scale(&Complex64::new(0.0, 0.5));
    let sum = s1.power(2)?.add(&s2.power(2)?)?;
    let residual = relative_residual(f, &sum)?;
    Ok(TwoSquares {
        roots: roots.to_vec(),
        pairing,
        a,
        b,
        s1,
        s2,
        residual,
    })
}

/// Write `f` (binary, degree `2d`) as `s1² + s2²`, with `A` built from the
/// roots listed in `pairing` (default: [`default_pairing`]).
pub fn two_squares(f: &Form<ComplexField>, pairing: Option<&[usize]>) -> Result<TwoSquares> {
    half_degree(f)?;
    let (lead, roots) = binary_roots(f)?;
    let factors: Vec<_> = roots.iter().map(ProjectiveRoot::linear_factor).collect::<Result<_>>()?;
    let pairing = pairing
        .map(<[usize]>::to_vec)
        .unwrap_or_else(|| default_pairing(&roots));
    split_with(f, lead, &roots, &factors, pairing)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoSquareCount {
    pub d: u32,
    pub count: u64,
    /// `binomial(2d − 1, d)`.
    pub expected: u64,
    pub min_root_separation: f64,
    pub max_residual: f64,
    pub decompositions: Vec<TwoSquares>,
}

/// Largest `d` accepted by [`count_two_square_decompositions`].
pub const MAX_COUNT_HALF_DEGREE: usize = 8;

const MIN_SEPARATION: f64 = 1e-7;

/// Normalize `g` to unit max-norm with its first largest coefficient real and positive.
fn normalized(g: &Form<ComplexField>) -> Vec<Complex64> {
    let m = max_norm(g.coeffs());
    let pivot = g
        .coeffs()
        .iter()
        .find(|c| c.norm() >= m * (1.0 - 1e-9))
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let unit = pivot / pivot.norm();
    g.coeffs().iter().map(|c| c / (unit * m)).collect()
}

fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-6)
}

/// All ways of writing `f` as `s1² + s2²`, counted up to
/// `(s1, s2) ↦ (s1, s2)·O` for orthogonal `O`. Each unordered split of the
/// roots into two halves gives one; the list is deduplicated on the pair of
/// normalized factors before counting.
pub fn count_two_square_decompositions(f: &Form<ComplexField>) -> Result<TwoSquareCount> {
    let d = half_degree(f)?;
    if d > MAX_COUNT_HALF_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "enumeration is limited to d <= {MAX_COUNT_HALF_DEGREE} (got d = {d})"
        )));
    }
    let (lead, roots) = binary_roots(f)?;
    let mut min_root_separation = f64::INFINITY;
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            min_root_separation = min_root_separation.min(roots[i].chordal_distance(&roots[j]));
        }
    }
    if min_root_separation < MIN_SEPARATION {
        return Err(Error::Degenerate(format!(
            "roots closer than {MIN_SEPARATION:e} on the projective line (minimum {min_root_separation:e})"
        )));
    }
    let factors: Vec<_> = roots.iter().map(ProjectiveRoot::linear_factor).collect::<Result<_>>()?;
    // root 0 always goes to A, so each unordered split appears once
    let mut decompositions: Vec<TwoSquares> = Vec::new();
    let mut keys: Vec<(Vec<Complex64>, Vec<Complex64>)> = Vec::new();
    let mut rest: Vec<usize> = (1..d).collect();
    loop {
        let mut pairing = vec![0];
        pairing.extend(&rest);
        let split = split_with(f, lead, &roots, &factors, pairing)?;
        let (ka, kb) = (normalized(&split.a), normalized(&split.b));
        let duplicate = keys
            .iter()
            .any(|(x, y)| (close(x, &ka) && close(y, &kb)) || (close(x, &kb) && close(y, &ka)));
        if !duplicate {
            keys.push((ka, kb));
            decompositions.push(split);
        }
        if !next_combination(&mut rest, 2 * d) {
            break;
        }
    }
    let max_residual = decompositions.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(TwoSquareCount {
        d: d as u32,
        count: decompositions.len() as u64,
        expected: binomial(2 * d as u64 - 1, d as u64)?,
        min_root_separation,
        max_residual,
        decompositions,
    })
}

/// Advance an increasing selection from `1..end` in lexicographic order.
fn next_combination(sel: &mut [usize], end: usize) -> bool {
    let k = sel.len();
    for i in (0..k).rev() {
        if sel[i] < end - (k - i) {
            sel[i] += 1;
            for j in (i + 1)..k {
                sel[j] = sel[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
