//! Hilbert functions of quotients by power ideals.
//!
//! `HF(A/I, t) = dim S^t − rank(⊕_j S^{t−e_j} → S^t)`, one rank per degree.
//! The comparison series for generators of degrees `e_1, …, e_p` in `n + 1`
//! variables is `Π_j (1 − z^{e_j}) / (1 − z)^{n+1}` with every coefficient
//! from the first non-positive one onward replaced by zero. That is the
//! value conjectured for general forms; it is taken from the
//! literature on generic Hilbert series rather than derived here.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::PrimeField;
use crate::error::{Error, Result};
use crate::polyring::{binomial, dim_space, Form};
use crate::ranklab::rank;
use crate::regularity::{multiplication_matrix, GeneratorStyle, PowerIdealSpec};

/// `HF(A/I, t)` for `t = 0..=t_max`. Generators above degree `t` do not
/// contribute at `t`.
pub fn hilbert_function(gens: &[Form<PrimeField>], num_vars: usize, t_max: u32) -> Result<Vec<u64>> {
    if num_vars == 0 {
        return Err(Error::InvalidArgument("need at least one variable".into()));
    }
    if let Some(g) = gens.first() {
        g.domain().require_above(t_max as u64)?;
    }
    if gens.iter().any(|g| g.num_vars() != num_vars) {
        return Err(Error::DimensionMismatch(
            "generators in different numbers of variables".into(),
        ));
    }
    let n = num_vars as u32 - 1;
    (0..=t_max)
        .into_par_iter()
        .map(|t| {
            let ambient = dim_space(n, t)?;
            let active: Vec<Form<PrimeField>> = gens.iter().filter(|g| g.degree() <= t).cloned().collect();
            if active.is_empty() {
                return Ok(ambient);
            }
            let m = multiplication_matrix(&active, t)?;
            Ok(ambient - rank(&m).rank as u64)
        })
        .collect()
}

/// Coefficients of `Π (1 − z^e) / (1 − z)^{n+1}` up to `z^{t_max}`, zeroed from
/// the first non-positive coefficient onward.
pub fn conjectured_series(n: u32, degrees: &[u32], t_max: u32) -> Vec<u64> {
    let len = t_max as usize + 1;
    let mut c: Vec<BigInt> = (0..len)
        .map(|t| BigInt::from(binomial(t as u64 + n as u64, n as u64).unwrap_or(u64::MAX)))
        .collect();
    for &e in degrees {
        let e = e as usize;
        if e == 0 {
            c.iter_mut().for_each(|x| x.set_zero());
            continue;
        }
        for t in (e..len).rev() {
            let prev = c[t - e].clone();
            c[t] -= prev;
        }
    }
    let mut out = Vec::with_capacity(len);
    let mut dead = false;
    for x in c {
        dead = dead || !x.is_positive();
        out.push(if dead { 0 } else { x.to_u64().unwrap_or(u64::MAX) });
    }
    out
}

/// `(Σ_{i∈I} x_i)^d` for every odd-size `I ⊆ {0, …, n}`, ordered by the
/// bitmask of `I`.
pub fn odd_subset_generators(n: u32, d: u32, field: &PrimeField) -> Result<Vec<Form<PrimeField>>> {
    if d < 1 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if n >= 32 {
        return Err(Error::Overflow(format!("2^{n} subsets")));
    }
    let num_vars = n as usize + 1;
    (1u64..(1 << num_vars))
        .filter(|mask| mask.count_ones() % 2 == 1)
        .map(|mask| {
            let coeffs: Vec<u64> = (0..num_vars).map(|i| (mask >> i) & 1).collect();
            Form::linear(field, &coeffs)?.power(d)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertTable {
    pub n: u32,
    /// Generator degrees `e_1, …, e_p`.
    pub degrees: Vec<u32>,
    pub values: Vec<u64>,
    pub conjectured: Vec<u64>,
    pub matches: Vec<bool>,
    pub style: Option<String>,
    pub modulus: u64,
    pub seed: Option<u64>,
}

impl HilbertTable {
    /// Table for explicit generators.
    pub fn from_generators(gens: &[Form<PrimeField>], num_vars: usize, t_max: u32, field: &PrimeField) -> Result<Self> {
        if gens.iter().any(|g| g.domain() != field) {
            return Err(Error::DomainMismatch);
        }
        let values = hilbert_function(gens, num_vars, t_max)?;
        let degrees: Vec<u32> = gens.iter().map(Form::degree).collect();
        let n = num_vars as u32 - 1;
        let conjectured = conjectured_series(n, &degrees, t_max);
        let matches = values.iter().zip(&conjectured).map(|(a, b)| a == b).collect();
        Ok(Self {
            n,
            degrees,
            values,
            conjectured,
            matches,
            style: None,
            modulus: field.modulus(),
            seed: None,
        })
    }

    pub fn all_match(&self) -> bool {
        self.matches.iter().all(|&m| m)
    }

    /// First degree where the function and the series differ.
    pub fn first_mismatch(&self) -> Option<u32> {
        self.matches.iter().position(|m| !m).map(|t| t as u32)
    }

    /// Columns `t,hf,conjectured,match`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,hf,conjectured,match\n");
        for (t, ((v, c), m)) in self.values.iter().zip(&self.conjectured).zip(&self.matches).enumerate() {
            out.push_str(&format!("{t},{v},{c},{m}\n"));
        }
        out
    }
}

/// `k·d + k`, just past the degrees where regularity is decided.
pub fn default_t_max(k: u32, d: u32) -> u32 {
    k * d + k
}

/// Hilbert table of the power ideal described by `spec`, next to the series.
pub fn compare(spec: &PowerIdealSpec, t_max: u32, field: &PrimeField) -> Result<HilbertTable> {
    spec.validate()?;
    if spec.style == GeneratorStyle::RootOfUnityLinearPowers {
        field.require_root_of_unity(spec.k as u64)?;
    }
    let gens = spec.ideal_generators(field)?;
    let mut table = HilbertTable::from_generators(&gens, spec.n as usize + 1, t_max, field)?;
    table.style = Some(spec.style.name().to_string());
    table.seed = Some(spec.seed);
    Ok(table)
}

/// Every generator of `style` in the power ideal for `(n, k, d)`.
pub fn full_family(n: u32, k: u32, d: u32, style: GeneratorStyle, seed: u64) -> Result<PowerIdealSpec> {
    let count = match &style {
        GeneratorStyle::RootOfUnityLinearPowers | GeneratorStyle::RandomGeneralForms => (k as usize)
            .checked_pow(n)
            .ok_or_else(|| Error::Overflow(format!("{k}^{n}")))?,
        GeneratorStyle::OddSubsetLinearPowers => 1usize << n,
        GeneratorStyle::Explicit(list) => list.len(),
    };
    PowerIdealSpec::new(n, k, d, count, style, seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub t: u32,
    pub hf: u64,
    pub conjectured: u64,
}

/// Scan `1 ≤ n ≤ n_max`, `2 ≤ k ≤ k_max`, `1 ≤ d ≤ d_max` for root-of-unity
/// power ideals whose Hilbert function leaves the series, up to
/// [`default_t_max`]. One entry per mismatching triple, at its first bad degree.
pub fn root_of_unity_mismatches(n_max: u32, k_max: u32, d_max: u32, field: &PrimeField) -> Result<Vec<Mismatch>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for k in 2..=k_max {
            for d in 1..=d_max {
                let spec = full_family(n, k, d, GeneratorStyle::RootOfUnityLinearPowers, 0)?;
                let table = compare(&spec, default_t_max(k, d), field)?;
                if let Some(t) = table.first_mismatch() {
                    let i = t as usize;
                    out.push(Mismatch {
                        n,
                        k,
                        d,
                        t,
                        hf: table.values[i],
                        conjectured: table.conjectured[i],
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::random_form;
    use crate::ranklab::{kernel_dimension, DenseMatrix};
    use proptest::prelude::*;

    fn field() -> PrimeField {
        PrimeField::auto(6).unwrap()
    }

    #[test]
    fn trivial_ideals() {
        let f = field();
        let vars: Vec<_> = (0..3).map(|i| Form::variable(&f, 3, i).unwrap()).collect();
        assert_eq!(hilbert_function(&vars, 3, 4).unwrap(), vec![1, 0, 0, 0, 0]);
        let sq = Form::parse(&f, 2, "x0^2").unwrap();
        assert_eq!(hilbert_function(&[sq], 2, 5).unwrap(), vec![1, 2, 2, 2, 2, 2]);
        assert_eq!(hilbert_function(&[], 3, 3).unwrap(), vec![1, 3, 6, 10]);
    }

    #[test]
    fn two_binary_quadrics() {
        let f = field();
        let a = random_form(1, 2, &f, 1).unwrap();
        let b = random_form(1, 2, &f, 2).unwrap();
        let table = HilbertTable::from_generators(&[a.clone(), b.clone()], 2, 4, &f).unwrap();
        assert_eq!(table.values, vec![1, 2, 1, 0, 0]);
        assert!(table.all_match());
        // degree 2 by hand: a and b independent in the 3-dimensional S^2
        let m = DenseMatrix::from_rows(&f, vec![a.coeffs().to_vec(), b.coeffs().to_vec()]).unwrap();
        assert_eq!(kernel_dimension(&m), 1);
    }

    #[test]
    fn series_examples() {
        assert_eq!(conjectured_series(1, &[2, 2], 5), vec![1, 2, 1, 0, 0, 0]);
        assert_eq!(conjectured_series(2, &[], 4), vec![1, 3, 6, 10, 15]);
        // a single generator of degree e: dim S^t − dim S^{t−e}
        for (n, e) in [(1u32, 3u32), (2, 2), (3, 4)] {
            let s = conjectured_series(n, &[e], 10);
            for t in 0..=10u32 {
                let lower = if t >= e { dim_space(n, t - e).unwrap() } else { 0 };
                assert_eq!(s[t as usize], dim_space(n, t).unwrap() - lower);
            }
        }
        // three quadrics in three variables: (1 + z)^3
        assert_eq!(conjectured_series(2, &[2, 2, 2], 5), vec![1, 3, 3, 1, 0, 0]);
    }

    #[test]
    fn odd_subset_examples() {
        let f = field();
        let g = odd_subset_generators(1, 3, &f).unwrap();
        assert_eq!(
            g,
            vec![Form::parse(&f, 2, "x0^3").unwrap(), Form::parse(&f, 2, "x1^3").unwrap()]
        );
        let g = odd_subset_generators(2, 2, &f).unwrap();
        let expected: Vec<_> = ["x0^2", "x1^2", "x2^2"]
            .iter()
            .map(|s| Form::parse(&f, 3, s).unwrap())
            .chain([Form::parse(&f, 3, "x0 + x1 + x2").unwrap().power(2).unwrap()])
            .collect();
        assert_eq!(g, expected);
        for n in 0..=6 {
            assert_eq!(odd_subset_generators(n, 1, &f).unwrap().len(), 1 << n);
        }
    }

    #[test]
    fn odd_subset_family_matches_series() {
        let f = field();
        let spec = full_family(2, 2, 2, GeneratorStyle::OddSubsetLinearPowers, 0).unwrap();
        let table = compare(&spec, 6, &f).unwrap();
        assert!(table.all_match(), "{table:?}");
    }

    #[test]
    fn random_generators_match_in_few_variables() {
        let f = field();
        for (n, k, d) in [(1, 2, 2), (1, 3, 2), (2, 2, 2), (2, 3, 1), (2, 2, 3)] {
            let spec = full_family(n, k, d, GeneratorStyle::RandomGeneralForms, 5).unwrap();
            let table = compare(&spec, default_t_max(k, d), &f).unwrap();
            assert!(table.all_match(), "n={n} k={k} d={d}: {table:?}");
        }
    }

    #[test]
    fn grid_search_finds_a_root_of_unity_mismatch() {
        let f = field();
        let found = root_of_unity_mismatches(3, 3, 2, &f).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().all(|m| m.hf != m.conjectured));
    }

    #[test]
    fn csv_layout() {
        let f = field();
        let a = random_form(1, 2, &f, 1).unwrap();
        let table = HilbertTable::from_generators(&[a], 2, 2, &f).unwrap();
        assert_eq!(
            table.to_csv(),
            "t,hf,conjectured,match\n0,1,1,true\n1,2,2,true\n2,2,2,true\n"
        );
    }

    #[test]
    fn rejects_small_modulus() {
        let small = PrimeField::new(5).unwrap();
        let g = Form::parse(&small, 2, "x0^2").unwrap();
        assert!(matches!(
            hilbert_function(&[g], 2, 7),
            Err(Error::UnsupportedCharacteristic { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn adding_generators_never_raises_values(seed in any::<u64>(), n in 1u32..3, p in 1usize..4) {
            let f = field();
            let gens: Vec<_> = (0..=p)
                .map(|i| random_form(n, 1 + (i as u32 % 2), &f, seed.wrapping_add(i as u64)).unwrap())
                .collect();
            let smaller = hilbert_function(&gens[..p], n as usize + 1, 5).unwrap();
            let larger = hilbert_function(&gens, n as usize + 1, 5).unwrap();
            prop_assert!(larger.iter().zip(&smaller).all(|(a, b)| a <= b));
        }

        #[test]
        fn series_stays_zero(n in 0u32..4, degrees in proptest::collection::vec(1u32..4, 0..6)) {
            let s = conjectured_series(n, &degrees, 15);
            if let Some(first) = s.iter().position(|&c| c == 0) {
                prop_assert!(s[first..].iter().all(|&c| c == 0));
            }
            prop_assert_eq!(s[0], if degrees.is_empty() || degrees.iter().all(|&e| e > 0) { 1 } else { 0 });
        }

        #[test]
        fn function_starts_at_one(seed in any::<u64>(), n in 1u32..3) {
            let f = field();
            let g = random_form(n, 2, &f, seed).unwrap();
            let hf = hilbert_function(&[g], n as usize + 1, 3).unwrap();
            prop_assert_eq!(hf[0], 1);
            prop_assert_eq!(hf[1], n as u64 + 1);
        }
    }
}
