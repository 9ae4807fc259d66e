//! Exact membership of a form of degree `kd` in the ideal generated by the
//! `(k−1)d`-th powers of the root-of-unity linear forms.

use serde::Serialize;

use super::serialize_forms;
use crate::apolarity::roots_of_unity_points;
use crate::domain::{Domain, ExactField};
use crate::error::{Error, Result};
use crate::polyring::{check_characteristic, dim_space, Form};
use crate::ranklab::{solve, SolveOutcome};
use crate::regularity::multiplication_matrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct CorollaryRepresentation<D: Domain> {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    /// `l_i^{(k−1)d}` in configuration order.
    #[serde(serialize_with = "serialize_forms")]
    pub generators: Vec<Form<D>>,
    /// `h_i` of degree `d` with `f = Σ h_i · l_i^{(k−1)d}`.
    #[serde(serialize_with = "serialize_forms")]
    pub summands: Vec<Form<D>>,
}

/// Find degree-`d` forms `h_i` with `f = Σ h_i l_i^{(k−1)d}` over the `k^n`
/// root-of-unity linear forms `l_i`. The identity is re-checked by
/// polynomial arithmetic before returning.
pub fn corollary_representation<D: ExactField>(
    f: &Form<D>,
    n: u32,
    k: u32,
    d: u32,
) -> Result<CorollaryRepresentation<D>> {
    if k < 2 || d < 1 {
        return Err(Error::InvalidArgument(format!(
            "need k >= 2 and d >= 1 (got k={k}, d={d})"
        )));
    }
    if f.num_vars() != n as usize + 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected {} variables, got {}",
            n + 1,
            f.num_vars()
        )));
    }
    if f.degree() != k * d {
        return Err(Error::DegreeMismatch {
            expected: k * d,
            found: f.degree(),
        });
    }
    let dom = f.domain();
    check_characteristic(dom, (k * d) as u64)?;
    let config = roots_of_unity_points(n, k, dom)?;
    let generators: Vec<Form<D>> = config
        .linear_forms()?
        .iter()
        .map(|l| l.power((k - 1) * d))
        .collect::<Result<_>>()?;
    let m = multiplication_matrix(&generators, k * d)?;
    let x = match solve(&m, f.coeffs())? {
        SolveOutcome::Solution(x) => x,
        SolveOutcome::Inconsistent { row } => {
            return Err(Error::Internal(format!(
            "f = {f} is not in the ideal of the {} powers (n={n}, k={k}, d={d}, domain {:?}, inconsistent row {row})",
            generators.len(),
            dom.descriptor()
        )))
        }
    };
    let block = dim_space(n, d)? as usize;
    let summands: Vec<Form<D>> = x
        .chunks(block)
        .map(|c| Form::from_coeffs(dom, n as usize + 1, d, c.to_vec()))
        .collect::<Result<_>>()?;
    let mut back = Form::zero(dom, n as usize + 1, k * d)?;
    for (h, g) in summands.iter().zip(&generators) {
        back = back.add(&h.multiply(g)?)?;
    }
    if &back != f {
        return Err(Error::Internal(format!(
            "multiply-back failed for f = {f} (n={n}, k={k}, d={d})"
        )));
    }
    Ok(CorollaryRepresentation {
        n,
        k,
        d,
        generators,
        summands,
    })
}
