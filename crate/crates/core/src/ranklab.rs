//! Exact rank, solve and kernel over prime fields; least squares over complex doubles.
//!
//! Elimination always takes the first nonzero entry, scanning rows downward,
//! in the leftmost column not yet reduced. Row updates below the pivot are
//! independent of one another, so they may run on any number of threads
//! without changing a single residue.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::domain::{CoefficientDomain, ComplexField, Domain, ExactField, PrimeField};
use crate::error::{Error, Result};

/// Row panels smaller than this many entries are updated on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<D: Domain> {
    rows: usize,
    cols: usize,
    entries: Vec<D::Elem>,
    domain: D,
}

impl<D: Domain> DenseMatrix<D> {
    pub fn zeros(domain: &D, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![domain.zero(); rows * cols],
            domain: domain.clone(),
        }
    }

    pub fn from_row_major(domain: &D, rows: usize, cols: usize, entries: Vec<D::Elem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            domain: domain.clone(),
        })
    }

    pub fn from_rows(domain: &D, rows: Vec<Vec<D::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(domain, r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(domain: &D, n: usize) -> Self {
        let mut m = Self::zeros(domain, n, n);
        for i in 0..n {
            m.set(i, i, domain.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn entries(&self) -> &[D::Elem] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &D::Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: D::Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[D::Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.domain, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[D::Elem]) -> Result<Vec<D::Elem>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        let dom = &self.domain;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(dom.zero(), |acc, (a, b)| dom.add(&acc, &dom.mul(a, b)))
            })
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let dom = &self.domain;
        let mut out = Self::zeros(dom, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if dom.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = dom.add(out.get(i, j), &dom.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }
}

fn serialize_ms<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub is_full_column_rank: bool,
    pub pivot_columns: Vec<usize>,
    #[serde(rename = "elapsed_ms", serialize_with = "serialize_ms")]
    pub elapsed: Duration,
    pub domain: CoefficientDomain,
}

impl RankReport {
    pub fn is_full_row_rank(&self) -> bool {
        self.rank == self.rows
    }
}

/// Exact rank over `F_p` by Gaussian elimination.
pub fn rank(m: &DenseMatrix<PrimeField>) -> RankReport {
    let start = Instant::now();
    let f = m.domain;
    let p = f.modulus();
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.entries.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in c..cols {
                a.swap(r * cols + j, piv * cols + j);
            }
        }
        let inv = f.inv(&a[r * cols + c]).expect("pivot is nonzero");
        let (top, bottom) = a.split_at_mut((r + 1) * cols);
        let pivot_row = &top[r * cols + c..(r + 1) * cols];
        let update = |row: &mut [u64]| {
            let lead = row[c];
            if lead == 0 {
                return;
            }
            // row += (-lead / pivot) * pivot_row
            let factor = f.shoup(p - f.mul_mod(lead, inv));
            for (x, &y) in row[c..].iter_mut().zip(pivot_row) {
                *x = f.add_mod(*x, factor.mul(y));
            }
        };
        if bottom.len() * 2 >= PARALLEL_THRESHOLD && (cols - c) > 8 {
            bottom.par_chunks_mut(cols).for_each(update);
        } else {
            bottom.chunks_mut(cols).for_each(update);
        }
        pivots.push(c);
        r += 1;
    }
    RankReport {
        rank: r,
        rows,
        cols,
        is_full_column_rank: r == cols,
        pivot_columns: pivots,
        elapsed: start.elapsed(),
        domain: f.descriptor(),
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref<D: ExactField>(dom: &D, rows: usize, cols: usize, a: &mut [D::Elem]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !dom.is_zero(&a[i * cols + c])) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(r * cols + j, piv * cols + j);
            }
        }
        let inv = dom.inv(&a[r * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            a[r * cols + j] = dom.mul(&a[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i == r || dom.is_zero(&a[i * cols + c]) {
                continue;
            }
            let factor = a[i * cols + c].clone();
            for j in c..cols {
                let t = dom.mul(&factor, &a[r * cols + j]);
                a[i * cols + j] = dom.sub(&a[i * cols + j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome<E> {
    Solution(Vec<E>),
    /// Row `row` of the reduced augmented system reads `0 = nonzero`.
    Inconsistent {
        row: usize,
    },
}

/// One solution of `M x = b`, with every free variable set to zero.
pub fn solve<D: ExactField>(m: &DenseMatrix<D>, b: &[D::Elem]) -> Result<SolveOutcome<D::Elem>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows
        )));
    }
    let dom = &m.domain;
    let w = m.cols + 1;
    let mut aug = Vec::with_capacity(m.rows * w);
    for i in 0..m.rows {
        aug.extend_from_slice(m.row(i));
        aug.push(b[i].clone());
    }
    let pivots = rref(dom, m.rows, w, &mut aug);
    if let Some(pos) = pivots.iter().position(|&c| c == m.cols) {
        return Ok(SolveOutcome::Inconsistent { row: pos });
    }
    let mut x = vec![dom.zero(); m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r * w + m.cols].clone();
    }
    Ok(SolveOutcome::Solution(x))
}

/// A basis of the right kernel `{x : M x = 0}`.
pub fn kernel<D: ExactField>(m: &DenseMatrix<D>) -> Vec<Vec<D::Elem>> {
    let dom = &m.domain;
    let mut a = m.entries.clone();
    let pivots = rref(dom, m.rows, m.cols, &mut a);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![dom.zero(); m.cols];
            v[free] = dom.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = dom.neg(&a[r * m.cols + free]);
            }
            v
        })
        .collect()
}

pub fn kernel_dimension<D: ExactField>(m: &DenseMatrix<D>) -> usize {
    let mut a = m.entries.clone();
    m.cols - rref(&m.domain, m.rows, m.cols, &mut a).len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub x: Vec<Complex64>,
    pub residual_norm: f64,
}

/// Minimizer of `‖M x − b‖₂` from a singular value decomposition; among
/// minimizers, the one of least norm.
pub fn least_squares(m: &DenseMatrix<ComplexField>, b: &[Complex64]) -> Result<LeastSquares> {
    if m.rows == 0 {
        return Err(Error::InvalidArgument("least squares needs at least one row".into()));
    }
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows
        )));
    }
    if m.entries
        .iter()
        .chain(b)
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite("least-squares input".into()));
    }
    if m.cols == 0 {
        let residual_norm = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        return Ok(LeastSquares {
            x: Vec::new(),
            residual_norm,
        });
    }
    let a = DMatrix::from_row_slice(m.rows, m.cols, &m.entries);
    let rhs = DVector::from_column_slice(b);
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = f64::EPSILON * m.rows.max(m.cols) as f64 * sigma_max;
    let x = svd
        .solve(&rhs, eps)
        .map_err(|e| Error::Internal(format!("svd solve: {e}")))?;
    let residual_norm = (&a * &x - &rhs).norm();
    Ok(LeastSquares {
        x: x.iter().cloned().collect(),
        residual_norm,
    })
}
