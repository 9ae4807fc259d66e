//! Roots of univariate complex polynomials: Aberth–Ehrlich iteration with a
//! Newton polish.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 500;

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `Σ coeffs[j] t^j`, with multiplicity. The top coefficient
/// must be nonzero.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite("polynomial coefficients".into()));
    }
    let degree = coeffs.len().saturating_sub(1);
    let lead = *coeffs
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty polynomial".into()))?;
    if lead == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("leading coefficient is zero".into()));
    }
    if degree == 0 {
        return Ok(Vec::new());
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }

    // start on a circle around the centroid, radius from the constant term
    let centre = -monic[degree - 1] / degree as f64;
    let radius = {
        let r = monic[0].norm().powf(1.0 / degree as f64);
        if r > 0.0 && r.is_finite() {
            r
        } else {
            1.0 + monic.iter().take(degree).map(|c| c.norm()).fold(0.0, f64::max)
        }
    };
    let mut z: Vec<Complex64> = (0..degree)
        .map(|i| centre + Complex64::from_polar(radius, std::f64::consts::TAU * i as f64 / degree as f64 + 0.4))
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut moved = false;
        for i in 0..degree {
            let (p, dp) = horner(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // derivative vanished: nudge off the critical point
                let nudge = 1e-8 * (1.0 + z[i].norm());
                z[i] += Complex64::new(nudge, 1e-8);
                moved = true;
                continue;
            }
            z[i] -= step;
            if step.norm() > 4.0 * f64::EPSILON * (1.0 + z[i].norm()) {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }

    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let candidate = *zi - p / dp;
            if horner(&monic, candidate).0.norm() < p.norm() {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite("root iteration diverged".into()));
    }
    Ok(z)
}
