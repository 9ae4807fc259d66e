use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `binomial(a, b)` with overflow reported instead of wrapped.
pub fn binomial(a: u64, b: u64) -> Result<u64> {
    if b > a {
        return Ok(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) is divisible by (i + 1) at every step
        acc = acc
            .checked_mul((a - i) as u128)
            .ok_or_else(|| Error::Overflow(format!("binomial({a}, {b})")))?
            / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow(format!("binomial({a}, {b})")));
        }
    }
    Ok(acc as u64)
}

/// Small binomials on the hot path. Callers guarantee no overflow, which
/// holds whenever the enclosing basis size was validated.
#[inline]
pub(crate) fn binom_small(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

/// Dimension of the space of forms of degree `d` in `n + 1` variables.
pub fn dim_space(n: u32, d: u32) -> Result<u64> {
    binomial(d as u64 + n as u64, n as u64)
}

/// The monomials of one degree in a fixed number of variables, in the
/// library's single graded colex order.
///
/// An exponent vector `(e_0, …, e_n)` is encoded by stars and bars: with
/// partial sums `s_j = e_1 + … + e_j`, the bar positions `b_j = s_j + j − 1`
/// form an `n`-subset of `[0, d + n)`, and the rank is that subset's colex
/// rank `Σ_j binomial(b_j, j)`. So `x0^d` has rank 0, `x1^d` is last, and
/// for two variables the order is `x0^d, x0^{d−1}x1, …, x1^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialBasis {
    num_vars: usize,
    degree: u32,
    size: usize,
}

impl MonomialBasis {
    pub fn new(num_vars: usize, degree: u32) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidArgument(
                "a polynomial ring needs at least one variable".into(),
            ));
        }
        let size = dim_space(num_vars as u32 - 1, degree)?;
        let size = usize::try_from(size).map_err(|_| Error::Overflow(format!("basis size {size}")))?;
        Ok(Self { num_vars, degree, size })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self, expo: &[u32]) -> Result<usize> {
        if expo.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector has {} entries, basis has {} variables",
                expo.len(),
                self.num_vars
            )));
        }
        let total: u64 = expo.iter().map(|&e| e as u64).sum();
        if total != self.degree as u64 {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: total as u32,
            });
        }
        Ok(rank_unchecked(expo))
    }

    pub fn unrank(&self, index: usize) -> Result<Vec<u32>> {
        if index >= self.size {
            return Err(Error::IndexOutOfRange { index, size: self.size });
        }
        let mut out = vec![0; self.num_vars];
        self.unrank_into(index, &mut out);
        Ok(out)
    }

    pub(crate) fn unrank_into(&self, mut index: usize, out: &mut [u32]) {
        let n = self.num_vars - 1;
        let top = self.degree as usize + n;
        let mut partial = vec![0usize; n + 1];
        let mut upper = top;
        for j in (1..=n).rev() {
            // largest b < upper with binomial(b, j) <= index
            let mut b = upper - 1;
            while binom_small(b, j) > index {
                b -= 1;
            }
            index -= binom_small(b, j);
            partial[j] = b + 1 - j;
            upper = b;
        }
        let mut prev = 0;
        for j in 1..=n {
            out[j] = (partial[j] - prev) as u32;
            prev = partial[j];
        }
        out[0] = self.degree - prev as u32;
    }

    /// All exponent vectors in rank order.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        (0..self.size)
            .map(|i| {
                let mut e = vec![0; self.num_vars];
                self.unrank_into(i, &mut e);
                e
            })
            .collect()
    }
}

/// Rank of an exponent vector in the basis of its own total degree.
#[inline]
pub(crate) fn rank_unchecked(expo: &[u32]) -> usize {
    let mut partial = 0usize;
    let mut rank = 0usize;
    for (j, &e) in expo.iter().enumerate().skip(1) {
        partial += e as usize;
        rank += binom_small(partial + j - 1, j);
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_counts() {
        assert_eq!(dim_space(2, 4).unwrap(), 15);
        assert_eq!(dim_space(3, 0).unwrap(), 1);
        assert_eq!(dim_space(3, 2).unwrap(), 10);
        assert!(matches!(dim_space(40, 1_000_000), Err(Error::Overflow(_))));
    }

    #[test]
    fn binary_quadratic_order() {
        let b = MonomialBasis::new(2, 2).unwrap();
        assert_eq!(b.monomials(), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn last_monomial_has_top_rank() {
        for nv in 1..5 {
            for d in 0..6 {
                let b = MonomialBasis::new(nv, d).unwrap();
                let mut last = vec![0; nv];
                last[if nv > 1 { 1 } else { 0 }] = d;
                assert_eq!(b.rank(&last).unwrap(), b.size() - 1);
            }
        }
    }

    #[test]
    fn rank_unrank_round_trip_exhaustive() {
        fn compositions(nv: usize, d: u32) -> Vec<Vec<u32>> {
            if nv == 1 {
                return vec![vec![d]];
            }
            (0..=d)
                .flat_map(|e| {
                    compositions(nv - 1, d - e).into_iter().map(move |mut rest| {
                        rest.insert(0, e);
                        rest
                    })
                })
                .collect()
        }
        for n in 0..=3usize {
            for d in 0..=6 {
                let b = MonomialBasis::new(n + 1, d).unwrap();
                let all = compositions(n + 1, d);
                assert_eq!(all.len(), b.size());
                let mut seen = vec![false; b.size()];
                for e in &all {
                    let r = b.rank(e).unwrap();
                    assert!(!seen[r]);
                    seen[r] = true;
                    assert_eq!(&b.unrank(r).unwrap(), e);
                }
            }
        }
    }

    #[test]
    fn rank_errors() {
        let b = MonomialBasis::new(3, 2).unwrap();
        assert!(matches!(b.rank(&[1, 0, 0]), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(b.unrank(6), Err(Error::IndexOutOfRange { .. })));
        assert!(b.rank(&[1, 1]).is_err());
    }
}
