//! Numeric fitting of `f ≈ Σ g_i^k` by damped Gauss–Newton.
//!
//! The residual is `r(g) = Σ g_i^k − f` as a coefficient vector. Its
//! derivative in the direction `(v_i)` is `Σ k g_i^{k−1} v_i`, so the
//! Jacobian is the multiplication map of the forms `k g_i^{k−1}` into degree
//! `kd`. Every step solves `min ‖J δ + r‖² + λ‖δ‖²` by least squares on the
//! stacked system `[J; √λ I]`; `λ` shrinks after a step that lowers the
//! residual and grows after one that does not.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::serialize_forms;
use crate::derive_seed;
use crate::domain::ComplexField;
use crate::error::{Error, Result};
use crate::polyring::Form;
use crate::ranklab::{least_squares, DenseMatrix};
use crate::regularity::multiplication_matrix;

/// Restarts run in groups of this size; each group runs in parallel and the
/// search stops after the first group containing a converged attempt.
pub const RESTART_WAVE: usize = 4;

const MIN_DAMPING: f64 = 1e-15;
const MAX_DAMPING: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub max_iter: usize,
    /// Attempts after the first, each from a fresh random start.
    pub restarts: usize,
    /// Target relative residual `‖r‖₂ / ‖f‖₂`.
    pub tol: f64,
    /// Initial damping `λ`.
    pub damping: f64,
    pub seed: u64,
    /// Starting summands for the first attempt.
    pub initial: Option<Vec<Form<ComplexField>>>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            restarts: 10,
            tol: 1e-8,
            damping: 1e-3,
            seed: 0,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSumFit {
    #[serde(serialize_with = "serialize_forms")]
    pub summands: Vec<Form<ComplexField>>,
    pub k: u32,
    pub p: usize,
    /// `‖Σ g_i^k − f‖₂ / ‖f‖₂`.
    pub residual: f64,
    pub converged: bool,
    /// Iterations of the returned attempt.
    pub iterations: usize,
    /// Index of the returned attempt; 0 is the first start.
    pub restarts_used: usize,
    /// Attempts actually run.
    pub attempts: usize,
    pub seed: u64,
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Coefficients of `Σ g_i^k − f`.
pub fn power_sum_residual(f: &Form<ComplexField>, summands: &[Form<ComplexField>], k: u32) -> Result<Vec<Complex64>> {
    let mut acc = f.neg();
    for g in summands {
        acc = acc.add(&g.power(k)?)?;
    }
    Ok(acc.into_coeffs())
}

/// The multiplication map of `k g_i^{k−1}` into degree `k·d`: the derivative
/// of [`power_sum_residual`] with respect to the coefficients of the `g_i`.
pub fn power_sum_jacobian(summands: &[Form<ComplexField>], k: u32) -> Result<DenseMatrix<ComplexField>> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let d = summands
        .first()
        .map(Form::degree)
        .ok_or_else(|| Error::InvalidArgument("no summands".into()))?;
    let kc = Complex64::new(k as f64, 0.0);
    let tangents: Vec<Form<ComplexField>> = summands
        .iter()
        .map(|g| Ok(g.power(k - 1)?.scale(&kc)))
        .collect::<Result<_>>()?;
    multiplication_matrix(&tangents, k * d)
}

/// Largest relative gap between `J v` and the central difference
/// `(r(g + h v) − r(g − h v)) / 2h` over `directions` seeded directions.
pub fn jacobian_check(summands: &[Form<ComplexField>], k: u32, step: f64, directions: usize, seed: u64) -> Result<f64> {
    let j = power_sum_jacobian(summands, k)?;
    let first = &summands[0];
    let zero = Form::zero(&ComplexField, first.num_vars(), k * first.degree())?;
    let mut worst: f64 = 0.0;
    for t in 0..directions {
        let dirs: Vec<Form<ComplexField>> = (0..summands.len())
            .map(|i| {
                Form::random(
                    &ComplexField,
                    first.num_vars(),
                    first.degree(),
                    derive_seed(seed, &[t as u64, i as u64]),
                )
            })
            .collect::<Result<_>>()?;
        let v: Vec<Complex64> = dirs.iter().flat_map(|g| g.coeffs().iter().copied()).collect();
        let analytic = j.mul_vec(&v)?;
        let h = Complex64::new(step, 0.0);
        let shifted = |sign: f64| -> Result<Vec<Form<ComplexField>>> {
            summands
                .iter()
                .zip(&dirs)
                .map(|(g, v)| g.add(&v.scale(&(h * sign))))
                .collect()
        };
        let plus = power_sum_residual(&zero, &shifted(1.0)?, k)?;
        let minus = power_sum_residual(&zero, &shifted(-1.0)?, k)?;
        let numeric: Vec<Complex64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * step)).collect();
        let gap: Vec<Complex64> = numeric.iter().zip(&analytic).map(|(a, b)| a - b).collect();
        worst = worst.max(norm2(&gap) / norm2(&analytic).max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

struct Attempt {
    summands: Vec<Form<ComplexField>>,
    residual: f64,
    iterations: usize,
}

/// `p` random degree-`d` forms scaled so that `‖Σ g_i^k‖ = ‖f‖`.
fn random_start(f: &Form<ComplexField>, p: usize, k: u32, d: u32, seed: u64) -> Result<Vec<Form<ComplexField>>> {
    let gs: Vec<Form<ComplexField>> = (0..p)
        .map(|i| Form::random(&ComplexField, f.num_vars(), d, derive_seed(seed, &[i as u64])))
        .collect::<Result<_>>()?;
    let zero = Form::zero(&ComplexField, f.num_vars(), f.degree())?;
    let size = norm2(&power_sum_residual(&zero, &gs, k)?);
    let target = norm2(f.coeffs());
    if size == 0.0 || !size.is_finite() {
        return Ok(gs);
    }
    let s = Complex64::new((target / size).powf(1.0 / k as f64), 0.0);
    Ok(gs.iter().map(|g| g.scale(&s)).collect())
}

fn descend(f: &Form<ComplexField>, k: u32, mut gs: Vec<Form<ComplexField>>, opts: &FitOptions) -> Result<Attempt> {
    let fnorm = norm2(f.coeffs());
    let d = gs[0].degree();
    let block = gs[0].coeffs().len();
    let mut r = power_sum_residual(f, &gs, k)?;
    let mut rel = norm2(&r) / fnorm;
    let mut lambda = opts.damping;
    let mut iterations = 0;
    while iterations < opts.max_iter && rel > opts.tol && rel.is_finite() && lambda < MAX_DAMPING {
        iterations += 1;
        let j = power_sum_jacobian(&gs, k)?;
        let (rows, cols) = (j.rows(), j.cols());
        let mut entries = j.entries().to_vec();
        let root = Complex64::new(lambda.sqrt(), 0.0);
        for c in 0..cols {
            let mut row = vec![Complex64::new(0.0, 0.0); cols];
            row[c] = root;
            entries.extend(row);
        }
        let stacked = DenseMatrix::from_row_major(&ComplexField, rows + cols, cols, entries)?;
        let mut rhs: Vec<Complex64> = r.iter().map(|z| -z).collect();
        rhs.resize(rows + cols, Complex64::new(0.0, 0.0));
        let step = match least_squares(&stacked, &rhs) {
            Ok(ls) => ls.x,
            Err(Error::NonFinite(_)) => break,
            Err(e) => return Err(e),
        };
        let trial: Vec<Form<ComplexField>> = gs
            .iter()
            .zip(step.chunks(block))
            .map(|(g, s)| g.add(&Form::from_coeffs(&ComplexField, g.num_vars(), d, s.to_vec())?))
            .collect::<Result<_>>()?;
        let r_trial = power_sum_residual(f, &trial, k)?;
        let rel_trial = norm2(&r_trial) / fnorm;
        if rel_trial.is_finite() && rel_trial < rel {
            gs = trial;
            r = r_trial;
            rel = rel_trial;
            lambda = (lambda * 0.3).max(MIN_DAMPING);
        } else {
            lambda *= 10.0;
        }
    }
    let residual = if rel.is_finite() { rel } else { f64::INFINITY };
    Ok(Attempt {
        summands: gs,
        residual,
        iterations,
    })
}

/// Fit `f ≈ Σ_{i<p} g_i^k` with `g_i` of degree `deg f / k`. Attempts run in
/// waves of [`RESTART_WAVE`]; the best attempt by (residual, index) is
/// returned whether or not it reached `tol`.
pub fn gauss_newton_powersum(f: &Form<ComplexField>, p: usize, k: u32, opts: &FitOptions) -> Result<PowerSumFit> {
    if p == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "need p >= 1 and k >= 1 (got p={p}, k={k})"
        )));
    }
    if f.is_zero() {
        return Err(Error::InvalidArgument("target form is zero".into()));
    }
    if !f.degree().is_multiple_of(k) {
        return Err(Error::DegreeMismatch {
            expected: k * (f.degree() / k + 1),
            found: f.degree(),
        });
    }
    if !(opts.tol > 0.0 && opts.damping > 0.0) {
        return Err(Error::InvalidArgument("tol and damping must be positive".into()));
    }
    if f.coeffs().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("target coefficients".into()));
    }
    let d = f.degree() / k;
    if let Some(init) = &opts.initial {
        if init.len() != p || init.iter().any(|g| g.degree() != d || g.num_vars() != f.num_vars()) {
            return Err(Error::InvalidArgument(format!(
                "initial guess must be {p} forms of degree {d}"
            )));
        }
    }
    let total = opts.restarts + 1;
    let mut results: Vec<(usize, Attempt)> = Vec::new();
    let mut start = 0;
    while start < total {
        let wave: Vec<usize> = (start..(start + RESTART_WAVE).min(total)).collect();
        let outcomes: Vec<Result<Attempt>> = wave
            .par_iter()
            .map(|&idx| {
                let init = match (&opts.initial, idx) {
                    (Some(g), 0) => g.clone(),
                    _ => random_start(f, p, k, d, derive_seed(opts.seed, &[idx as u64]))?,
                };
                descend(f, k, init, opts)
            })
            .collect();
        for (idx, out) in wave.into_iter().zip(outcomes) {
            results.push((idx, out?));
        }
        if results.iter().any(|(_, a)| a.residual <= opts.tol) {
            break;
        }
        start += RESTART_WAVE;
    }
    let attempts = results.len();
    let (best_idx, best) = results
        .into_iter()
        .min_by(|(i, a), (j, b)| a.residual.total_cmp(&b.residual).then(i.cmp(j)))
        .ok_or_else(|| Error::Internal("no attempts ran".into()))?;
    Ok(PowerSumFit {
        converged: best.residual <= opts.tol,
        summands: best.summands,
        k,
        p,
        residual: best.residual,
        iterations: best.iterations,
        restarts_used: best_idx,
        attempts,
        seed: opts.seed,
    })
}
