//! Dense homogeneous polynomials over a pluggable [`Domain`](crate::Domain).

mod basis;
mod form;
mod text;

pub use basis::{binomial, dim_space, MonomialBasis};
pub use form::{random_form, Form};
pub use text::parse_form;

pub(crate) use basis::rank_unchecked;
pub(crate) use form::{check_characteristic, coordinate_powers};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{ComplexField, Domain, PrimeField, RationalField};
    use crate::Error;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(10_007).unwrap()
    }

    fn big() -> PrimeField {
        PrimeField::auto(1).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let f = fp();
        let a = Form::parse(&f, 2, "x0 + x1").unwrap();
        let b = Form::parse(&f, 2, "x0 - x1").unwrap();
        assert_eq!(a.multiply(&b).unwrap(), Form::parse(&f, 2, "x0^2 - x1^2").unwrap());
        let one = Form::constant(&f, 2, 1).unwrap();
        assert_eq!(a.multiply(&one).unwrap(), a);
    }

    #[test]
    fn square_of_binomial() {
        let f = fp();
        let a = Form::parse(&f, 2, "x0 + x1").unwrap();
        assert_eq!(
            a.power(2).unwrap(),
            Form::parse(&f, 2, "x0^2 + 2*x0*x1 + x1^2").unwrap()
        );
        assert_eq!(a.power(0).unwrap(), Form::constant(&f, 2, 1).unwrap());
    }

    #[test]
    fn cube_matches_iterated_multiply() {
        let f = big();
        for seed in 0..5 {
            let g = random_form(2, 3, &f, seed).unwrap();
            let iter = g.multiply(&g).unwrap().multiply(&g).unwrap();
            assert_eq!(g.power(3).unwrap(), iter);
        }
    }

    #[test]
    fn product_evaluates_pointwise() {
        let f = big();
        let g = random_form(2, 3, &f, 11).unwrap();
        let h = random_form(2, 3, &f, 12).unwrap();
        let gh = g.multiply(&h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let pt: Vec<u64> = (0..3).map(|_| f.sample(&mut rng)).collect();
            let lhs = gh.evaluate(&pt).unwrap();
            let rhs = f.mul(&g.evaluate(&pt).unwrap(), &h.evaluate(&pt).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn derivative_examples() {
        let f = fp();
        let xy = Form::parse(&f, 2, "x0*x1").unwrap();
        assert_eq!(xy.derivative(&[1, 1]).unwrap(), Form::constant(&f, 2, 1).unwrap());
        let g = Form::parse(&f, 3, "x0^2 + 3*x0*x1").unwrap();
        assert!(g.derivative(&[0, 0, 1]).unwrap().is_zero());
        assert!(matches!(g.derivative(&[2, 1, 0]), Err(Error::InvalidArgument(_))));
        let small = PrimeField::new(3).unwrap();
        let cube = Form::parse(&small, 2, "x0^3").unwrap();
        assert!(matches!(
            cube.derivative(&[1, 0]),
            Err(Error::UnsupportedCharacteristic { .. })
        ));
    }

    #[test]
    fn mixed_partials_commute() {
        let f = big();
        let g = random_form(2, 5, &f, 3).unwrap();
        let a = g.derivative(&[1, 0, 0]).unwrap().derivative(&[0, 1, 0]).unwrap();
        let b = g.derivative(&[0, 1, 0]).unwrap().derivative(&[1, 0, 0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, g.derivative(&[1, 1, 0]).unwrap());
    }

    #[test]
    fn evaluation_examples() {
        let f = fp();
        let g = random_form(3, 4, &f, 1).unwrap();
        let sum = g.coeffs().iter().fold(0, |acc, c| f.add(&acc, c));
        assert_eq!(g.evaluate(&[1, 1, 1, 1]).unwrap(), sum);
        let mono = Form::parse(&f, 3, "x0^5").unwrap();
        assert_eq!(mono.evaluate(&[3, 0, 0]).unwrap(), 243);
        assert!(mono.evaluate(&[1, 2]).is_err());
    }

    #[test]
    fn evaluation_is_homogeneous() {
        let f = big();
        let g = random_form(2, 6, &f, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let lambda = f.sample(&mut rng);
            let pt: Vec<u64> = (0..3).map(|_| f.sample(&mut rng)).collect();
            let scaled: Vec<u64> = pt.iter().map(|x| f.mul(x, &lambda)).collect();
            let lhs = g.evaluate(&scaled).unwrap();
            let rhs = f.mul(&f.pow(&lambda, 6), &g.evaluate(&pt).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn random_forms_are_seeded() {
        let f = big();
        assert_eq!(random_form(2, 3, &f, 7).unwrap(), random_form(2, 3, &f, 7).unwrap());
        assert_ne!(random_form(2, 3, &f, 7).unwrap(), random_form(2, 3, &f, 8).unwrap());
        assert_eq!(
            random_form(3, 5, &f, 0).unwrap().coeffs().len() as u64,
            dim_space(3, 5).unwrap()
        );
        let c = ComplexField;
        assert_eq!(random_form(1, 2, &c, 4).unwrap(), random_form(1, 2, &c, 4).unwrap());
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        fn check<D: Domain>(dom: &D) {
            for seed in 0..20 {
                let a = Form::random(dom, 3, 2, 3 * seed).unwrap();
                let b = Form::random(dom, 3, 2, 3 * seed + 1).unwrap();
                let c = Form::random(dom, 3, 3, 3 * seed + 2).unwrap();
                assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
                let lhs = a.add(&b).unwrap().multiply(&c).unwrap();
                let rhs = a.multiply(&c).unwrap().add(&b.multiply(&c).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                let l = a.multiply(&b).unwrap().multiply(&c).unwrap();
                let r = a.multiply(&b.multiply(&c).unwrap()).unwrap();
                assert_eq!(l, r);
            }
        }
        check(&big());
        check(&RationalField);
    }

    #[test]
    fn euler_identity() {
        let f = big();
        for seed in 0..5 {
            let g = random_form(3, 5, &f, seed).unwrap();
            let mut acc = Form::zero(&f, 4, 5).unwrap();
            for i in 0..4 {
                let mut alpha = vec![0; 4];
                alpha[i] = 1;
                let xi = Form::variable(&f, 4, i).unwrap();
                acc = acc.add(&xi.multiply(&g.derivative(&alpha).unwrap()).unwrap()).unwrap();
            }
            assert_eq!(acc, g.scale(&5));
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism() {
        let f = big();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for seed in 0..10 {
            let a = random_form(2, 3, &f, 2 * seed).unwrap();
            let b = random_form(2, 3, &f, 2 * seed + 1).unwrap();
            let pt: Vec<u64> = (0..3).map(|_| rng.random_range(0..f.modulus())).collect();
            let (ea, eb) = (a.evaluate(&pt).unwrap(), b.evaluate(&pt).unwrap());
            assert_eq!(a.add(&b).unwrap().evaluate(&pt).unwrap(), f.add(&ea, &eb));
            assert_eq!(a.multiply(&b).unwrap().evaluate(&pt).unwrap(), f.mul(&ea, &eb));
        }
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let a = Form::parse(&fp(), 2, "x0").unwrap();
        let b = Form::parse(&PrimeField::new(10_009).unwrap(), 2, "x0").unwrap();
        assert_eq!(a.multiply(&b), Err(Error::DomainMismatch));
    }

    #[test]
    fn text_examples() {
        let f = fp();
        let g = Form::parse(&f, 2, "3*x0^2*x1 - x1^3").unwrap();
        assert_eq!(g.to_string(), "3*x0^2*x1 - x1^3");
        assert_eq!(Form::parse(&f, 2, " 3 * x0 ^2 * x1-x1^3 ").unwrap(), g);
        assert_eq!(Form::parse(&f, 3, "0").unwrap().degree(), 0);
        assert!(Form::parse(&f, 2, "x0^2 + x1").is_err());
        assert!(Form::parse(&f, 2, "x2").is_err());
        assert!(Form::parse(&f, 2, "x0 + ").is_err());
        let q = Form::parse(&RationalField, 2, "0.5*x0 - 1/3*x1").unwrap();
        assert_eq!(q.to_string(), "1/2*x0 - 1/3*x1");
        let c = Form::parse(&ComplexField, 2, "(1+2i)*x0 - 2.5*x1").unwrap();
        assert_eq!(c.coeffs()[0], Complex64::new(1.0, 2.0));
        assert_eq!(Form::parse(&ComplexField, 2, &c.to_string()).unwrap(), c);
    }

    proptest! {
        #[test]
        fn prime_field_text_round_trip(seed in any::<u64>(), n in 0u32..4, d in 0u32..5) {
            let f = fp();
            let g = random_form(n, d, &f, seed).unwrap();
            prop_assume!(!g.is_zero());
            prop_assert_eq!(Form::parse(&f, n as usize + 1, &g.to_string()).unwrap(), g);
        }

        #[test]
        fn complex_text_round_trip(seed in any::<u64>(), n in 0u32..3, d in 1u32..4) {
            let g = random_form(n, d, &ComplexField, seed).unwrap();
            prop_assert_eq!(Form::parse(&ComplexField, n as usize + 1, &g.to_string()).unwrap(), g);
        }
    }
}
