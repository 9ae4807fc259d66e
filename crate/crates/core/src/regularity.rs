//! Multiplication maps of power ideals and `kd`-regularity certificates.
//!
//! A general form of degree `kd` is a sum of `p` `k`-th powers of degree-`d`
//! forms exactly when, for general `g_1, …, g_p`, the ideal
//! `(g_1^{k−1}, …, g_p^{k−1})` contains every form of degree `kd`. That is
//! a rank condition on the multiplication map
//! `⊕_j S^{t−e_j} → S^t, (v_j) ↦ Σ q_j v_j` at `t = kd`.
//!
//! Ranks are computed over a large prime field at one random specialization.
//! Full rank there is a certificate for the generic case (rank is lower
//! semicontinuous); a rank deficiency is only evidence, and is reported as
//! `probable`.

use std::time::Duration;

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::apolarity::roots_of_unity_points;
use crate::derive_seed;
use crate::domain::{Domain, PrimeField};
use crate::error::{Error, Result};
use crate::hilbert::odd_subset_generators;
use crate::polyring::{dim_space, random_form, rank_unchecked, Form, MonomialBasis};
use crate::ranklab::{rank, DenseMatrix, RankReport};

/// Matrix of `⊕_j S^{t−e_j} → S^t`. Rows follow the degree-`t` basis;
/// columns come in one block per generator, and column `(j, m)` holds the
/// coefficients of `gens[j] · m` for the `m`-th monomial of degree `t − e_j`.
pub fn multiplication_matrix<D: Domain>(gens: &[Form<D>], t: u32) -> Result<DenseMatrix<D>> {
    let first = gens
        .first()
        .ok_or_else(|| Error::InvalidArgument("multiplication map needs at least one generator".into()))?;
    let dom = first.domain();
    let num_vars = first.num_vars();
    for g in gens {
        if g.domain() != dom {
            return Err(Error::DomainMismatch);
        }
        if g.num_vars() != num_vars {
            return Err(Error::DimensionMismatch(
                "generators in different numbers of variables".into(),
            ));
        }
        if g.degree() > t {
            return Err(Error::DegreeMismatch {
                expected: t,
                found: g.degree(),
            });
        }
    }
    let target = MonomialBasis::new(num_vars, t)?;
    let blocks: Vec<MonomialBasis> = gens
        .iter()
        .map(|g| MonomialBasis::new(num_vars, t - g.degree()))
        .collect::<Result<_>>()?;
    let cols: usize = blocks.iter().map(MonomialBasis::size).sum();
    let rows = target.size();
    let mut entries = vec![dom.zero(); rows * cols];
    let mut col = 0;
    let mut sum = vec![0u32; num_vars];
    for (g, block) in gens.iter().zip(&blocks) {
        let terms = g.terms();
        for m in block.monomials() {
            for (e, c) in &terms {
                for ((s, a), b) in sum.iter_mut().zip(e).zip(&m) {
                    *s = a + b;
                }
                let r = rank_unchecked(&sum);
                entries[r * cols + col] = c.clone();
            }
            col += 1;
        }
    }
    DenseMatrix::from_row_major(dom, rows, cols, entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorStyle {
    /// Uniformly random coefficients: a stand-in for general forms.
    RandomGeneralForms,
    /// `g_i = l_i^d` for the linear forms `l_i = x0 + ξ^{i1} x1 + … + ξ^{in} xn`.
    RootOfUnityLinearPowers,
    /// `g_I = (Σ_{i∈I} x_i)^d` over odd-size subsets `I ⊆ {0, …, n}`.
    OddSubsetLinearPowers,
    /// Forms in the text format, all of degree `d`.
    Explicit(Vec<String>),
}

impl GeneratorStyle {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RandomGeneralForms => "random-general-forms",
            Self::RootOfUnityLinearPowers => "root-of-unity-linear-powers",
            Self::OddSubsetLinearPowers => "odd-subset-linear-powers",
            Self::Explicit(_) => "explicit",
        }
    }
}

/// The ideal generated by `g_1^{k−1}, …, g_p^{k−1}` with `g_i` of degree `d`
/// in `n + 1` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerIdealSpec {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    #[serde(rename = "p")]
    pub p_count: usize,
    pub style: GeneratorStyle,
    pub seed: u64,
}

impl PowerIdealSpec {
    pub fn new(n: u32, k: u32, d: u32, p_count: usize, style: GeneratorStyle, seed: u64) -> Result<Self> {
        let spec = Self {
            n,
            k,
            d,
            p_count,
            style,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.d < 1 || self.n < 1 || self.p_count < 1 {
            return Err(Error::InvalidArgument(format!(
                "power ideal needs k >= 2, d >= 1, n >= 1, p >= 1 (got k={}, d={}, n={}, p={})",
                self.k, self.d, self.n, self.p_count
            )));
        }
        let available = match &self.style {
            GeneratorStyle::RandomGeneralForms => None,
            GeneratorStyle::RootOfUnityLinearPowers => Some((self.k as usize).pow(self.n)),
            GeneratorStyle::OddSubsetLinearPowers => Some(1usize << self.n),
            GeneratorStyle::Explicit(list) => Some(list.len()),
        };
        if let Some(avail) = available {
            if self.p_count > avail {
                return Err(Error::InvalidArgument(format!(
                    "style {} provides {avail} generators, {} requested",
                    self.style.name(),
                    self.p_count
                )));
            }
        }
        Ok(())
    }

    /// Congruence the modulus must satisfy for this style.
    pub fn required_congruence(&self) -> u64 {
        match self.style {
            GeneratorStyle::RootOfUnityLinearPowers => self.k as u64,
            _ => 1,
        }
    }

    /// The degree-`d` forms `g_i` (before raising to the power `k − 1`).
    pub fn base_generators(&self, field: &PrimeField) -> Result<Vec<Form<PrimeField>>> {
        self.validate()?;
        let num_vars = self.n as usize + 1;
        let gens = match &self.style {
            GeneratorStyle::RandomGeneralForms => (0..self.p_count)
                .map(|i| random_form(self.n, self.d, field, derive_seed(self.seed, &[i as u64])))
                .collect::<Result<Vec<_>>>()?,
            GeneratorStyle::RootOfUnityLinearPowers => {
                let config = roots_of_unity_points(self.n, self.k, field)?;
                config
                    .linear_forms()?
                    .into_iter()
                    .take(self.p_count)
                    .map(|l| l.power(self.d))
                    .collect::<Result<Vec<_>>>()?
            }
            GeneratorStyle::OddSubsetLinearPowers => odd_subset_generators(self.n, self.d, field)?
                .into_iter()
                .take(self.p_count)
                .collect(),
            GeneratorStyle::Explicit(list) => {
                let forms = list
                    .iter()
                    .take(self.p_count)
                    .map(|s| Form::parse(field, num_vars, s))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(bad) = forms.iter().find(|g| g.degree() != self.d && !g.is_zero()) {
                    return Err(Error::DegreeMismatch {
                        expected: self.d,
                        found: bad.degree(),
                    });
                }
                forms
                    .into_iter()
                    .map(|g| {
                        if g.is_zero() {
                            Form::zero(field, num_vars, self.d)
                        } else {
                            Ok(g)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(gens)
    }

    /// `g_i^{k−1}` for every generator.
    pub fn ideal_generators(&self, field: &PrimeField) -> Result<Vec<Form<PrimeField>>> {
        self.base_generators(field)?
            .iter()
            .map(|g| g.power(self.k - 1))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certainty {
    /// Backed by an exact full-rank witness (or an exact counting argument).
    Certified,
    /// Only rank-deficient specializations were observed.
    Probable,
}

fn serialize_ms<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityCertificate {
    #[serde(flatten)]
    pub spec: PowerIdealSpec,
    #[serde(rename = "t")]
    pub target_degree: u32,
    pub rank: usize,
    #[serde(rename = "ambient")]
    pub ambient_dim: usize,
    pub regular: bool,
    pub certainty: Certainty,
    pub modulus: u64,
    #[serde(rename = "elapsed_ms", serialize_with = "serialize_ms")]
    pub elapsed: Duration,
}

/// Largest prime below 2^62 that fits the spec's congruence and exceeds `t`.
pub fn default_field(spec: &PowerIdealSpec) -> Result<PrimeField> {
    PrimeField::auto(spec.required_congruence())
}

/// Does the ideal of `spec` contain all of `S^t`?
pub fn is_t_regular(spec: &PowerIdealSpec, t: u32, field: &PrimeField) -> Result<RegularityCertificate> {
    spec.validate()?;
    field.require_above(t as u64)?;
    if spec.style == GeneratorStyle::RootOfUnityLinearPowers {
        field.require_root_of_unity(spec.k as u64)?;
    }
    let gens = spec.ideal_generators(field)?;
    let gen_degree = (spec.k - 1) * spec.d;
    if t < gen_degree {
        return Err(Error::DegreeMismatch {
            expected: gen_degree,
            found: t,
        });
    }
    let m = multiplication_matrix(&gens, t)?;
    let report: RankReport = rank(&m);
    let regular = report.is_full_row_rank();
    Ok(RegularityCertificate {
        spec: spec.clone(),
        target_degree: t,
        rank: report.rank,
        ambient_dim: report.rows,
        regular,
        certainty: if regular {
            Certainty::Certified
        } else {
            Certainty::Probable
        },
        modulus: field.modulus(),
        elapsed: report.elapsed,
    })
}

/// One (generator count, seed) trial of [`min_power_generators`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub p: usize,
    pub seed: u64,
    pub rank: usize,
    pub ambient: usize,
    pub regular: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinGenerators {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    /// `⌈dim S^{kd} / dim S^d⌉`: fewer generators cannot span by counting.
    pub counting_bound: u64,
    /// `k^n`, where success is guaranteed.
    pub upper_bound: u64,
    /// Smallest count that produced a full-rank witness; `None` if none did.
    pub p_min: Option<u64>,
    /// `certified` when `p_min` equals the counting bound; otherwise the
    /// smaller counts were only observed to fail.
    pub certainty: Certainty,
    pub probes: Vec<Probe>,
    pub modulus: u64,
    pub seed: u64,
}

/// Smallest number of random degree-`d` forms whose `(k−1)`-st powers
/// generate an ideal containing `S^{kd}`. Each count is tried with `trials`
/// independent seeds before it is declared insufficient.
pub fn min_power_generators(
    n: u32,
    k: u32,
    d: u32,
    trials: usize,
    seed: u64,
    field: &PrimeField,
) -> Result<MinGenerators> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let top = dim_space(n, k * d)?;
    let bottom = dim_space(n, d)?;
    let counting_bound = top.div_ceil(bottom);
    let upper_bound = (k as u64).pow(n);
    let mut probes = Vec::new();
    let mut p_min = None;
    for p in counting_bound.max(1)..=upper_bound {
        for trial in 0..trials {
            let probe_seed = derive_seed(seed, &[p, trial as u64]);
            let spec = PowerIdealSpec::new(n, k, d, p as usize, GeneratorStyle::RandomGeneralForms, probe_seed)?;
            let cert = is_t_regular(&spec, k * d, field)?;
            probes.push(Probe {
                p: p as usize,
                seed: probe_seed,
                rank: cert.rank,
                ambient: cert.ambient_dim,
                regular: cert.regular,
            });
            if cert.regular {
                p_min = Some(p);
                break;
            }
        }
        if p_min.is_some() {
            break;
        }
    }
    let certainty = match p_min {
        Some(p) if p == counting_bound.max(1) => Certainty::Certified,
        _ => Certainty::Probable,
    };
    Ok(MinGenerators {
        n,
        k,
        d,
        counting_bound,
        upper_bound,
        p_min,
        certainty,
        probes,
        modulus: field.modulus(),
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: Ratio<u64>,
    pub ratio_value: f64,
    /// `k^n`.
    pub bound: u64,
    pub ratio_below_bound: bool,
}

fn serialize_ratio<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// `dim S^{kd} / dim S^d` next to `k^n`, the value it approaches from below as `d` grows.
pub fn expected_lower_bound(n: u32, k: u32, d: u32) -> Result<LowerBound> {
    let top = dim_space(n, k * d)?;
    let bottom = dim_space(n, d)?;
    let ratio = Ratio::new(top, bottom);
    let bound = (k as u64)
        .checked_pow(n)
        .ok_or_else(|| Error::Overflow(format!("{k}^{n}")))?;
    let ratio_below_bound = (*ratio.numer() as u128) < (bound as u128) * (*ratio.denom() as u128);
    Ok(LowerBound {
        ratio,
        ratio_value: top as f64 / bottom as f64,
        bound,
        ratio_below_bound,
    })
}

/// Generic number of `m`-th powers of linear forms in `n + 1` variables needed
/// for a general degree-`m` form: `⌈binomial(m+n, n)/(n+1)⌉`, except for
/// quadrics (`n + 1`), cubics in five variables (8), and quartics in three,
/// four and five variables (6, 10, 15).
pub fn ah_generic_rank(n: u32, m: u32) -> Result<u64> {
    if n < 1 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and m >= 1 (got n={n}, m={m})"
        )));
    }
    let exception = match (m, n) {
        (2, _) => Some(n as u64 + 1),
        (3, 4) => Some(8),
        (4, 2) => Some(6),
        (4, 3) => Some(10),
        (4, 4) => Some(15),
        _ => None,
    };
    match exception {
        Some(v) => Ok(v),
        None => Ok(dim_space(n, m)?.div_ceil(n as u64 + 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranklab::rank;

    fn field() -> PrimeField {
        PrimeField::auto(12).unwrap()
    }

    #[test]
    fn linear_generators_give_permutation_matrices() {
        let f = field();
        let x0 = Form::variable(&f, 2, 0).unwrap();
        let x1 = Form::variable(&f, 2, 1).unwrap();
        let m = multiplication_matrix(std::slice::from_ref(&x0), 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 1));
        assert_eq!(rank(&m).rank, 1);
        let m = multiplication_matrix(&[x0, x1], 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m, DenseMatrix::identity(&f, 2));
    }

    /// At `t = 2d − 1` the map is square and equals the transposed
    /// Sylvester matrix, so full rank there means a nonzero resultant.
    #[test]
    fn coprime_binary_forms_span_degree_2d() {
        let f = field();
        for d in 1..=6 {
            let a = random_form(1, d, &f, 10 + d as u64).unwrap();
            let b = random_form(1, d, &f, 20 + d as u64).unwrap();
            let sylvester = multiplication_matrix(&[a.clone(), b.clone()], 2 * d - 1).unwrap();
            assert_eq!(sylvester.rows(), sylvester.cols());
            // resultant nonzero <=> coprime
            assert!(rank(&sylvester).is_full_row_rank());
            let m = multiplication_matrix(&[a, b], 2 * d).unwrap();
            assert_eq!(m.rows() as u64, dim_space(1, 2 * d).unwrap());
            assert_eq!(rank(&m).rank, 2 * d as usize + 1);
        }
    }

    #[test]
    fn column_count_is_sum_of_block_dimensions() {
        let f = field();
        let gens = vec![
            random_form(2, 1, &f, 1).unwrap(),
            random_form(2, 2, &f, 2).unwrap(),
            random_form(2, 4, &f, 3).unwrap(),
        ];
        let m = multiplication_matrix(&gens, 5).unwrap();
        let expected: u64 = [4, 3, 1].iter().map(|&s| dim_space(2, s).unwrap()).sum();
        assert_eq!(m.cols() as u64, expected);
        assert!(multiplication_matrix(&gens, 3).is_err());
    }

    #[test]
    fn binary_forms_are_sums_of_two_squares() {
        let f = field();
        for d in 1..=8 {
            let spec = PowerIdealSpec::new(1, 2, d, 2, GeneratorStyle::RandomGeneralForms, d as u64).unwrap();
            let cert = is_t_regular(&spec, 2 * d, &f).unwrap();
            assert!(cert.regular, "d = {d}");
            assert_eq!(cert.certainty, Certainty::Certified);
        }
    }

    #[test]
    fn one_square_is_not_enough() {
        let f = field();
        let spec = PowerIdealSpec::new(1, 2, 3, 1, GeneratorStyle::RandomGeneralForms, 0).unwrap();
        let cert = is_t_regular(&spec, 6, &f).unwrap();
        assert!(!cert.regular);
        assert_eq!(cert.rank, 4);
        assert_eq!(cert.ambient_dim, 7);
        assert_eq!(cert.certainty, Certainty::Probable);
    }

    #[test]
    fn four_root_of_unity_quadrics_in_three_variables() {
        let f = field();
        let spec = PowerIdealSpec::new(2, 2, 2, 4, GeneratorStyle::RootOfUnityLinearPowers, 0).unwrap();
        let cert = is_t_regular(&spec, 4, &f).unwrap();
        assert!(cert.regular);
        assert_eq!(cert.ambient_dim, 15);
    }

    #[test]
    fn regularity_survives_other_primes_and_seeds() {
        let specs = [(1, 2, 3, 2), (2, 2, 2, 4), (2, 3, 1, 4), (3, 2, 2, 7)];
        let mut ceiling = crate::domain::DEFAULT_PRIME_CEILING;
        for trial in 0..10u64 {
            let f = PrimeField::auto_below(ceiling, 1).unwrap();
            ceiling = f.modulus();
            let (n, k, d, p) = specs[trial as usize % specs.len()];
            let spec = PowerIdealSpec::new(n, k, d, p, GeneratorStyle::RandomGeneralForms, 100 + trial).unwrap();
            assert!(is_t_regular(&spec, k * d, &f).unwrap().regular, "trial {trial}");
        }
    }

    #[test]
    fn root_of_unity_style_needs_congruence() {
        let f = PrimeField::auto(2).unwrap();
        let spec = PowerIdealSpec::new(1, 3, 1, 3, GeneratorStyle::RootOfUnityLinearPowers, 0).unwrap();
        if !(f.modulus() - 1).is_multiple_of(3) {
            assert!(matches!(is_t_regular(&spec, 3, &f), Err(Error::Configuration(_))));
        }
        let small = PrimeField::new(5).unwrap();
        let spec = PowerIdealSpec::new(1, 2, 3, 2, GeneratorStyle::RandomGeneralForms, 0).unwrap();
        assert!(matches!(
            is_t_regular(&spec, 6, &small),
            Err(Error::UnsupportedCharacteristic { .. })
        ));
        assert!(PowerIdealSpec::new(1, 1, 3, 2, GeneratorStyle::RandomGeneralForms, 0).is_err());
        assert!(PowerIdealSpec::new(2, 2, 1, 5, GeneratorStyle::RootOfUnityLinearPowers, 0).is_err());
    }

    #[test]
    fn minimal_generator_counts() {
        let f = field();
        assert_eq!(min_power_generators(1, 2, 4, 3, 0, &f).unwrap().p_min, Some(2));
        let cubes = min_power_generators(1, 3, 1, 3, 0, &f).unwrap();
        assert_eq!(cubes.p_min, Some(2));
        assert_eq!(cubes.certainty, Certainty::Certified);
    }

    /// Independent count: every (p, trial) probe below `p_min` must be rank
    /// deficient, and the expected generic rank of `p` general forms of
    /// degree `d` in degree `2d` is `p·dim S^d − binomial(p, 2)` (the Koszul
    /// relations `g_i·g_j − g_j·g_i`), capped by `dim S^{2d}`.
    #[test]
    fn squares_of_quadrics_in_four_variables() {
        let f = field();
        let res = min_power_generators(3, 2, 2, 3, 0, &f).unwrap();
        let ambient = dim_space(3, 4).unwrap();
        let per = dim_space(3, 2).unwrap();
        let koszul = |p: u64| (p * per - p * (p - 1) / 2).min(ambient);
        let expected = (1..=8).find(|&p| koszul(p) == ambient).unwrap();
        assert_eq!(expected, 5);
        assert_eq!(res.p_min, Some(expected));
        for probe in &res.probes {
            if !probe.regular {
                assert_eq!(probe.rank as u64, koszul(probe.p as u64));
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        let lb = expected_lower_bound(1, 2, 3).unwrap();
        assert_eq!(lb.ratio, Ratio::new(7, 4));
        assert_eq!(lb.bound, 2);
        assert!(lb.ratio_below_bound);
        assert_eq!(expected_lower_bound(2, 2, 2).unwrap().ratio, Ratio::new(15, 6));
        let mut prev = 0.0;
        for d in 1..=50 {
            let lb = expected_lower_bound(2, 2, d).unwrap();
            assert!(lb.ratio_value > prev && lb.ratio_below_bound);
            prev = lb.ratio_value;
        }
    }

    #[test]
    fn ah_values() {
        assert_eq!(ah_generic_rank(2, 3).unwrap(), 4);
        assert_eq!(ah_generic_rank(2, 4).unwrap(), 6);
        assert_eq!(ah_generic_rank(2, 2).unwrap(), 3);
        assert_eq!(ah_generic_rank(1, 5).unwrap(), 3);
        for n in 1..=5 {
            for m in 1..=8 {
                let v = ah_generic_rank(n, m).unwrap();
                let exceptional = m == 2 || matches!((m, n), (3, 4) | (4, 2) | (4, 3) | (4, 4));
                if !exceptional {
                    assert!(v * (n as u64 + 1) >= dim_space(n, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn certificate_json_fields() {
        let f = field();
        let spec = PowerIdealSpec::new(1, 2, 2, 2, GeneratorStyle::RandomGeneralForms, 5).unwrap();
        let cert = is_t_regular(&spec, 4, &f).unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "ambient",
                "certainty",
                "d",
                "elapsed_ms",
                "k",
                "modulus",
                "n",
                "p",
                "rank",
                "regular",
                "seed",
                "style",
                "t"
            ]
        );
        assert_eq!(v["style"], "random-general-forms");
    }
}
