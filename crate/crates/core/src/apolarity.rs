//! Apolarity, the root-of-unity point configuration, and derivative-vanishing
//! matrices.
//!
//! A dual form `g` acts on forms as the constant-coefficient differential
//! operator `g(∂_0, …, ∂_n)`. For a linear form `l` (identified with the point
//! of its coefficients), `l^{m−s} ∘ f = 0` holds exactly when every derivative
//! of `f` of order at most `s` vanishes at that point. The configuration used
//! throughout is the `k^n` points `(1, ξ^{i_1}, …, ξ^{i_n})` with `ξ` a
//! primitive `k`-th root of unity.
//!
//! For a homogeneous `f` of degree `D`, Euler's identity writes each
//! derivative of order `r − 1` as a combination of order-`r` derivatives
//! times coordinates, so vanishing of all order-`r` derivatives at a point
//! already forces the lower orders. The conditions matrix therefore carries
//! only the `binomial(r + n, n)` top-order rows per point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{Domain, PrimeField};
use crate::error::{Error, Result};
use crate::polyring::{binomial, check_characteristic, coordinate_powers, Form, MonomialBasis};
use crate::ranklab::{rank, DenseMatrix, RankReport};

/// `g` applied to `f` as a differential operator; lands in degree `deg f − deg g`.
pub fn contract<D: Domain>(f: &Form<D>, g: &Form<D>) -> Result<Form<D>> {
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch);
    }
    if f.num_vars() != g.num_vars() {
        return Err(Error::DimensionMismatch(
            "operator and form in different numbers of variables".into(),
        ));
    }
    if g.degree() > f.degree() {
        return Err(Error::InvalidArgument(format!(
            "cannot contract a degree-{} form by a degree-{} operator",
            f.degree(),
            g.degree()
        )));
    }
    check_characteristic(f.domain(), f.degree() as u64)?;
    let dom = f.domain();
    let mut acc = Form::zero(dom, f.num_vars(), f.degree() - g.degree())?;
    for (beta, c) in g.terms() {
        acc = acc.add(&f.derivative(&beta)?.scale(&c))?;
    }
    Ok(acc)
}

/// Is `f` (degree `m`) annihilated by `l^{m−s}`?
pub fn is_apolar_power<D: Domain>(f: &Form<D>, l: &Form<D>, s: u32) -> Result<bool> {
    if l.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: l.degree(),
        });
    }
    if l.is_zero() {
        return Err(Error::InvalidArgument("the linear form must be nonzero".into()));
    }
    if s > f.degree() {
        return Err(Error::InvalidArgument(format!(
            "order {s} exceeds degree {}",
            f.degree()
        )));
    }
    Ok(contract(f, &l.power(f.degree() - s)?)?.is_zero())
}

/// Do all derivatives of `f` of order at most `s` vanish at `point`?
pub fn derivatives_vanish<D: Domain>(f: &Form<D>, point: &[D::Elem], s: u32) -> Result<bool> {
    let dom = f.domain();
    for order in 0..=s.min(f.degree()) {
        for alpha in MonomialBasis::new(f.num_vars(), order)?.monomials() {
            if !dom.is_zero(&f.derivative(&alpha)?.evaluate(point)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The `k^n` points `(1, ξ^{i_1}, …, ξ^{i_n})`, listed in lexicographic order
/// of `(i_1, …, i_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration<D: Domain> {
    pub n: u32,
    pub k: u32,
    pub primitive_root: D::Elem,
    pub points: Vec<Vec<D::Elem>>,
    pub domain: D,
}

pub fn roots_of_unity_points<D: Domain>(n: u32, k: u32, domain: &D) -> Result<PointConfiguration<D>> {
    roots_of_unity_points_seeded(n, k, domain, 0)
}

/// As [`roots_of_unity_points`], with the seed used to pick the primitive
/// root. Any choice gives the same point set up to order.
pub fn roots_of_unity_points_seeded<D: Domain>(n: u32, k: u32, domain: &D, seed: u64) -> Result<PointConfiguration<D>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let xi = domain.primitive_root_of_unity(k as u64, seed)?;
    let roots: Vec<D::Elem> = (0..k).map(|i| domain.pow(&xi, i as u64)).collect();
    let count = (k as usize)
        .checked_pow(n)
        .ok_or_else(|| Error::Overflow(format!("{k}^{n} points")))?;
    let points = (0..count)
        .map(|mut idx| {
            let mut pt = vec![domain.zero(); n as usize + 1];
            pt[0] = domain.one();
            for j in (1..=n as usize).rev() {
                pt[j] = roots[idx % k as usize].clone();
                idx /= k as usize;
            }
            pt
        })
        .collect();
    Ok(PointConfiguration {
        n,
        k,
        primitive_root: xi,
        points,
        domain: domain.clone(),
    })
}

impl<D: Domain> PointConfiguration<D> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `l_P = Σ P_j x_j` for each point `P`.
    pub fn linear_forms(&self) -> Result<Vec<Form<D>>> {
        self.points.iter().map(|p| Form::linear(&self.domain, p)).collect()
    }

    /// Coordinates as strings: decimal residues, or `a+bi` for complex points.
    pub fn coordinate_strings(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .map(|p| p.iter().map(|c| self.domain.format_elem(c)).collect())
            .collect()
    }
}

/// One row per (point, `α` with `|α| = r`), one column per monomial of
/// degree `degree`; the entry is `∂^α(x^β)` evaluated at the point.
pub fn derivative_conditions_matrix_at<D: Domain>(
    domain: &D,
    points: &[Vec<D::Elem>],
    r: u32,
    degree: u32,
) -> Result<DenseMatrix<D>> {
    let num_vars = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidArgument("no points".into()))?;
    if points.iter().any(|p| p.len() != num_vars) {
        return Err(Error::DimensionMismatch("points of different lengths".into()));
    }
    if r > degree {
        return Err(Error::InvalidArgument(format!("order {r} exceeds degree {degree}")));
    }
    check_characteristic(domain, degree as u64)?;
    let cols_basis = MonomialBasis::new(num_vars, degree)?;
    let alphas = MonomialBasis::new(num_vars, r)?.monomials();
    let betas = cols_basis.monomials();
    let cols = cols_basis.size();
    // falling[e][a] = e (e−1) … (e−a+1)
    let falling: Vec<Vec<D::Elem>> = (0..=degree)
        .map(|e| {
            let mut row = vec![domain.one()];
            for a in 1..=e.min(r) {
                let next = domain.mul(&row[a as usize - 1], &domain.from_u64((e - a + 1) as u64));
                row.push(next);
            }
            row
        })
        .collect();
    let blocks: Vec<Vec<D::Elem>> = points
        .par_iter()
        .map(|pt| {
            let powers = coordinate_powers(domain, pt, degree);
            let mut block = Vec::with_capacity(alphas.len() * cols);
            for alpha in &alphas {
                for beta in &betas {
                    if beta.iter().zip(alpha).any(|(b, a)| b < a) {
                        block.push(domain.zero());
                        continue;
                    }
                    let mut v = domain.one();
                    for i in 0..num_vars {
                        let (b, a) = (beta[i] as usize, alpha[i] as usize);
                        v = domain.mul(&v, &falling[b][a]);
                        v = domain.mul(&v, &powers[i][b - a]);
                    }
                    block.push(v);
                }
            }
            block
        })
        .collect();
    DenseMatrix::from_row_major(domain, points.len() * alphas.len(), cols, blocks.concat())
}

pub fn derivative_conditions_matrix<D: Domain>(
    config: &PointConfiguration<D>,
    r: u32,
    degree: u32,
) -> Result<DenseMatrix<D>> {
    derivative_conditions_matrix_at(&config.domain, &config.points, r, degree)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Forms of degree `kd`.
    #[serde(rename = "kd")]
    Kd,
    /// Forms of degree `kd + k − 1`.
    #[serde(rename = "kd+k-1")]
    KdPlusKMinusOne,
}

impl Variant {
    pub fn degree(&self, k: u32, d: u32) -> u32 {
        match self {
            Variant::Kd => k * d,
            Variant::KdPlusKMinusOne => k * d + k - 1,
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kd" => Ok(Variant::Kd),
            "kd+k-1" | "kd+k−1" => Ok(Variant::KdPlusKMinusOne),
            other => Err(Error::InvalidArgument(format!(
                "unknown variant {other:?} (expected kd or kd+k-1)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingReport {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub variant: Variant,
    /// Degree of the forms under test.
    pub degree: u32,
    pub points: usize,
    pub rows: usize,
    pub cols: usize,
    /// Only the zero form of this degree has all derivatives of order `≤ d`
    /// vanishing at every configuration point.
    pub regular: bool,
    pub rank: RankReport,
    pub modulus: u64,
}

/// Check that a form of degree `kd` (or `kd + k − 1`) whose derivatives of
/// order `≤ d` vanish at all `k^n` configuration points must be zero.
pub fn verify_vanishing(n: u32, k: u32, d: u32, variant: Variant, field: &PrimeField) -> Result<VanishingReport> {
    if n < 1 || k < 2 || d < 1 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1, k >= 2, d >= 1 (got n={n}, k={k}, d={d})"
        )));
    }
    let degree = variant.degree(k, d);
    field.require_root_of_unity(k as u64)?;
    field.require_above(degree as u64)?;
    let config = roots_of_unity_points(n, k, field)?;
    let m = derivative_conditions_matrix(&config, d, degree)?;
    let report = rank(&m);
    Ok(VanishingReport {
        n,
        k,
        d,
        variant,
        degree,
        points: config.len(),
        rows: m.rows(),
        cols: m.cols(),
        regular: report.is_full_column_rank,
        rank: report,
        modulus: field.modulus(),
    })
}

/// The hyperplanes `x_i = ξ^s x_j` for `1 ≤ i < j ≤ n`, `0 ≤ s < k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrangement<D: Domain> {
    pub n: u32,
    pub k: u32,
    /// `(i, j, s)` for each hyperplane, aligned with `hyperplanes`.
    pub labels: Vec<(u32, u32, u32)>,
    pub hyperplanes: Vec<Form<D>>,
    /// Product of all hyperplane forms, of degree `binomial(n, 2)·k`.
    pub product_form: Form<D>,
}

pub fn arrangement<D: Domain>(n: u32, k: u32, domain: &D) -> Result<Arrangement<D>> {
    let num_vars = n as usize + 1;
    let mut product = Form::constant(domain, num_vars, domain.one())?;
    let mut labels = Vec::new();
    let mut hyperplanes = Vec::new();
    if n >= 2 {
        let xi = domain.primitive_root_of_unity(k as u64, 0)?;
        for i in 1..=n {
            for j in (i + 1)..=n {
                for s in 0..k {
                    let mut coeffs = vec![domain.zero(); num_vars];
                    coeffs[i as usize] = domain.one();
                    coeffs[j as usize] = domain.neg(&domain.pow(&xi, s as u64));
                    let h = Form::linear(domain, &coeffs)?;
                    product = product.multiply(&h)?;
                    labels.push((i, j, s));
                    hyperplanes.push(h);
                }
            }
        }
    }
    debug_assert_eq!(hyperplanes.len() as u64, binomial(n as u64, 2).unwrap_or(0) * k as u64);
    Ok(Arrangement {
        n,
        k,
        labels,
        hyperplanes,
        product_form: product,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Incidence {
    pub points_per_hyperplane: Vec<usize>,
    pub hyperplanes_per_point: Vec<usize>,
}

/// Incidence counts by exact evaluation of every hyperplane at every point.
pub fn incidence_check<D: Domain>(arr: &Arrangement<D>, config: &PointConfiguration<D>) -> Result<Incidence> {
    let dom = &config.domain;
    let mut per_point = vec![0; config.len()];
    let mut per_plane = Vec::with_capacity(arr.hyperplanes.len());
    for h in &arr.hyperplanes {
        let mut count = 0;
        for (idx, p) in config.points.iter().enumerate() {
            if dom.is_zero(&h.evaluate(p)?) {
                count += 1;
                per_point[idx] += 1;
            }
        }
        per_plane.push(count);
    }
    Ok(Incidence {
        points_per_hyperplane: per_plane,
        hyperplanes_per_point: per_point,
    })
}
