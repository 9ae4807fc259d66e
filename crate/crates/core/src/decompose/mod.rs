//! Explicit decompositions: binary forms as two squares, exact ideal
//! membership in root-of-unity powers, and numeric sums of `k`-th powers.

mod powersum;
mod represent;
mod roots;
mod two_squares;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::ser::{SerializeSeq, Serializer};

use crate::domain::{ComplexField, Domain};
use crate::error::Result;
use crate::polyring::{Form, MonomialBasis};

pub use powersum::{
    gauss_newton_powersum, jacobian_check, power_sum_jacobian, power_sum_residual, FitOptions, PowerSumFit,
    RESTART_WAVE,
};
pub use represent::{corollary_representation, CorollaryRepresentation};
pub use roots::polynomial_roots;
pub use two_squares::{
    binary_roots, count_two_square_decompositions, default_pairing, relative_residual, two_squares, ProjectiveRoot,
    TwoSquareCount, TwoSquares, MAX_COUNT_HALF_DEGREE,
};

/// Complex form with independent standard normal real coefficients.
pub fn random_real_form(num_vars: usize, degree: u32, seed: u64) -> Result<Form<ComplexField>> {
    let size = MonomialBasis::new(num_vars, degree)?.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..size)
        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), 0.0))
        .collect();
    Form::from_coeffs(&ComplexField, num_vars, degree, coeffs)
}

pub(crate) fn serialize_form<D: Domain, S: Serializer>(f: &Form<D>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

pub(crate) fn serialize_forms<D: Domain, S: Serializer>(forms: &[Form<D>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(forms.len()))?;
    for f in forms {
        seq.serialize_element(&f.to_string())?;
    }
    seq.end()
}
