//! Computations around sums of `k`-th powers of forms.

pub mod apolarity;
pub mod decompose;
pub mod domain;
mod error;
pub mod hilbert;
pub mod polyring;
pub mod ranklab;
pub mod regularity;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/exact-rank.md")]
    mod exact_rank {}
    #[doc = include_str!("../../../book/src/regularity.md")]
    mod regularity {}
    #[doc = include_str!("../../../book/src/apolarity.md")]
    mod apolarity {}
    #[doc = include_str!("../../../book/src/decompositions.md")]
    mod decompositions {}
    #[doc = include_str!("../../../book/src/hilbert.md")]
    mod hilbert {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub use domain::{CoefficientDomain, ComplexField, Domain, ExactField, PrimeField, RationalField};
pub use error::{Error, Result};
pub use polyring::{dim_space, parse_form, random_form, Form, MonomialBasis};

/// Mix a base seed with indices into an independent stream seed (splitmix64).
pub(crate) fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}
