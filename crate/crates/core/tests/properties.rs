use proptest::prelude::*;
use waring::decompose::{binary_roots, random_real_form, two_squares, ProjectiveRoot};
use waring::hilbert::{conjectured_series, hilbert_function};
use waring::ranklab::{rank, DenseMatrix};
use waring::regularity::{ah_generic_rank, expected_lower_bound, multiplication_matrix};
use waring::{dim_space, parse_form, random_form, PrimeField};

fn small_field() -> PrimeField {
    PrimeField::new(1_000_003).unwrap()
}

fn binomial(a: u64, b: u64) -> u64 {
    (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_of_transpose(seed in any::<u64>(), rows in 1usize..12, cols in 1usize..12) {
        let field = small_field();
        let entries = random_form(1, (rows * cols - 1) as u32, &field, seed).unwrap().into_coeffs();
        let m = DenseMatrix::from_row_major(&field, rows, cols, entries).unwrap();
        let r = rank(&m);
        prop_assert_eq!(r.rank, rank(&m.transpose()).rank);
        prop_assert!(r.rank <= rows.min(cols));
        prop_assert_eq!(r.is_full_column_rank, r.rank == cols);
    }

    #[test]
    fn multiplication_matrix_shape(seed in any::<u64>(), n in 1u32..3, degs in prop::collection::vec(1u32..4, 1..4), extra in 0u32..3) {
        let field = small_field();
        let t = degs.iter().copied().max().unwrap() + extra;
        let gens: Vec<_> = degs.iter().enumerate()
            .map(|(i, &e)| random_form(n, e, &field, seed ^ i as u64).unwrap())
            .collect();
        let m = multiplication_matrix(&gens, t).unwrap();
        let cols: u64 = degs.iter().map(|&e| dim_space(n, t - e).unwrap()).sum();
        prop_assert_eq!(m.cols() as u64, cols);
        prop_assert_eq!(m.rows() as u64, dim_space(n, t).unwrap());
    }

    #[test]
    fn text_round_trip_through_public_api(seed in any::<u64>(), n in 0u32..3, d in 0u32..5) {
        let field = small_field();
        let f = random_form(n, d, &field, seed).unwrap();
        let back = parse_form(&field, n as usize + 1, &f.to_string()).unwrap();
        if f.is_zero() {
            prop_assert!(back.is_zero());
        } else {
            prop_assert_eq!(back, f);
        }
    }

    #[test]
    fn binary_hilbert_function_is_generic(seed in any::<u64>(), degs in prop::collection::vec(1u32..4, 1..4)) {
        // in two variables random forms always match the series
        let field = PrimeField::auto(1).unwrap();
        let gens: Vec<_> = degs.iter().enumerate()
            .map(|(i, &e)| random_form(1, e, &field, seed.wrapping_add(i as u64)).unwrap())
            .collect();
        let hf = hilbert_function(&gens, 2, 10).unwrap();
        prop_assert_eq!(hf, conjectured_series(1, &degs, 10));
    }

    #[test]
    fn series_never_revives(n in 1u32..5, degs in prop::collection::vec(1u32..5, 1..7)) {
        let s = conjectured_series(n, &degs, 30);
        prop_assert_eq!(s[0], 1);
        if let Some(z) = s.iter().position(|&v| v == 0) {
            prop_assert!(s[z..].iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn two_squares_multiply_back(seed in any::<u64>(), d in 1u32..7) {
        let f = random_real_form(2, 2 * d, seed).unwrap();
        let (_, roots) = binary_roots(&f).unwrap();
        let mut sep = f64::INFINITY;
        for i in 0..roots.len() {
            for j in (i + 1)..roots.len() {
                sep = sep.min(roots[i].chordal_distance(&roots[j]));
            }
        }
        prop_assume!(sep >= 1e-2);
        let s = two_squares(&f, None).unwrap();
        prop_assert!(s.residual <= 1e-8, "residual {}", s.residual);
        prop_assert_eq!(s.roots.iter().filter(|r| matches!(r, ProjectiveRoot::Infinity)).count(), 0);
    }
}

#[test]
fn generic_rank_covers_dimension() {
    for n in 1..=6 {
        for m in 1..=8 {
            let r = ah_generic_rank(n, m).unwrap();
            assert!(
                r * (n as u64 + 1) >= binomial((m + n) as u64, n as u64),
                "(n,m)=({n},{m})"
            );
        }
    }
}

#[test]
fn ratio_approaches_power_from_below() {
    for n in 1..=3 {
        for k in 2..=3 {
            let mut last = 0.0;
            for d in 1..=40 {
                let lb = expected_lower_bound(n, k, d).unwrap();
                assert!(lb.ratio_below_bound);
                assert!(lb.ratio_value > last);
                last = lb.ratio_value;
            }
        }
    }
}
