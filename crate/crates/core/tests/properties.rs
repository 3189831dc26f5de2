mod common;

use common::*;
use dxm_core::jetcalc::{compose_jets, compose_jets_by_partitions, enumerate_partition_terms, partial_bell_table, Jet};
use dxm_core::numeric::{log_binomial, log_factorial};
use dxm_core::poly::Poly;
use dxm_core::weightforge::{construct_endomorphism_weights, construct_refuting_weights};
use dxm_core::{Complex64, DomainSpec, RationalMap, WeightSequence};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn poly(max_degree: usize) -> impl Strategy<Value = Poly<Complex64>> {
    prop::collection::vec(complex(), 2..=max_degree + 1).prop_map(Poly::new)
}

proptest! {
    #[test]
    fn log_factorial_matches_log_gamma(n in 0usize..300) {
        let oracle = statrs::function::gamma::ln_gamma(n as f64 + 1.0);
        prop_assert!((log_factorial(n) - oracle).abs() <= 1e-10 * oracle.abs().max(1.0));
    }

    #[test]
    fn log_binomial_is_symmetric(n in 0usize..200, k in 0usize..200) {
        prop_assume!(k <= n);
        prop_assert!((log_binomial(n, k) - log_binomial(n, n - k)).abs() < 1e-9);
    }

    #[test]
    fn composition_routes_agree(p in poly(5), q in poly(5), a in complex(), order in 1usize..9) {
        let inner = Jet::of_poly(&q, a, order);
        let outer = Jet::of_poly(&p, inner.value(), order);
        let bell = compose_jets(&outer, &inner).unwrap();
        let parts = compose_jets_by_partitions(&outer, &inner, 24).unwrap();
        for (x, y) in bell.deriv.iter().zip(&parts.deriv) {
            prop_assert!((x - y).norm() <= 1e-9 * y.norm().max(1.0));
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn bell_table_matches_partition_sums(x in prop::collection::vec(-2.0f64..2.0, 10), n in 1usize..10) {
        let table = partial_bell_table(&x, n);
        for m in 1..=n {
            let direct: f64 = enumerate_partition_terms(n, m).unwrap().iter().map(|t| t.monomial(&x)).sum();
            prop_assert!((table[n][m] - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn factorial_powers_are_algebra_weights(alpha in 1.0f64..3.0) {
        let w = WeightSequence::factorial_power(alpha).unwrap();
        prop_assert!(w.check_algebra_condition(30).ok);
    }

    #[test]
    fn sup_norm_is_attained_on_the_circle(p in poly(4)) {
        let d = DomainSpec::disc();
        let s = d.sup_norm(|z| Ok(p.eval(&z).norm()), true).unwrap();
        prop_assert!((s.argmax.norm() - 1.0).abs() < 1e-12);
        // Maximum modulus: no interior sample exceeds the boundary estimate.
        let interior = d.with_interior_grid(24).interior_points();
        prop_assert!(interior.iter().all(|z| p.eval(z).norm() <= s.value + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn constructed_endomorphism_weights_are_valid(a in 0.05f64..0.6, b in 0.0f64..0.35) {
        let phi = RationalMap::from_coeffs(
            &[Complex64::new(b, 0.0), Complex64::new(0.0, a)],
            &[Complex64::new(1.0, 0.0)],
            DomainSpec::disc(),
        ).unwrap();
        let short = construct_endomorphism_weights(&phi, 6).unwrap();
        let long = construct_endomorphism_weights(&phi, 9).unwrap();
        prop_assert_eq!(&short.log_m[..], &long.log_m[..=6]);
        let w = long.to_weight_sequence().unwrap();
        prop_assert!(w.check_algebra_condition(9).ok);
        for n in 2..=9 {
            let r = (log_factorial(n) - long.log_m[n]) / n as f64;
            prop_assert!(r <= -log_factorial(n) / n as f64 + 1e-12);
        }
    }

    #[test]
    fn refutation_growth_certificates_hold(alpha in 0.2f64..0.7) {
        // (z - alpha) / (1 - alpha z) has |phi'(1)| = (1 + alpha) / (1 - alpha).
        let phi = RationalMap::from_coeffs(
            &[Complex64::new(-alpha, 0.0), Complex64::new(1.0, 0.0)],
            &[Complex64::new(1.0, 0.0), Complex64::new(-alpha, 0.0)],
            DomainSpec::disc(),
        ).unwrap();
        let cw = construct_refuting_weights(&phi, Complex64::new(1.0, 0.0), 7).unwrap();
        let k = (1.0 + alpha) / (1.0 - alpha);
        for g in &cw.growth {
            prop_assert!(g.ratio >= k.powi(g.n as i32) / 6.0);
            prop_assert!((g.required - k.powi(g.n as i32) / 6.0).abs() <= 1e-9 * g.required);
        }
        prop_assert!(cw.to_weight_sequence().unwrap().check_algebra_condition(7).ok);
    }
}

#[test]
fn fixtures_are_self_maps() {
    for phi in [
        half(),
        rotation(),
        mobius_half(),
        square(),
        cubic(),
        involution(),
        unresolved(),
    ] {
        phi.validate().unwrap();
    }
}
