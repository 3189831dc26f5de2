mod common;

use common::*;
use dxm_core::jetcalc::{
    compose_jets, enumerate_partition_terms, exponential_formula_check, Holomorphic, Jet, WitnessFc, WitnessFr,
};
use dxm_core::numeric::ExactComplex;
use dxm_core::poly::Poly;
use dxm_core::{Complex64, DomainSpec};
use num_bigint::BigInt;
use num_rational::BigRational;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn partition_terms() {
    let t = enumerate_partition_terms(3, 2).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].a[..2], [1, 1]);
    assert_eq!(t[0].coeff, 3);
    let t = enumerate_partition_terms(6, 6).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!((t[0].a[0], t[0].coeff), (6, 1));
    let mut t: Vec<(Vec<u32>, u128)> = enumerate_partition_terms(4, 2)
        .unwrap()
        .iter()
        .map(|t| (t.a[..4].to_vec(), t.coeff))
        .collect();
    t.sort();
    assert_eq!(t, vec![(vec![0, 2, 0, 0], 3), (vec![1, 0, 1, 0], 4)]);
}

#[test]
fn chain_rule_cases() {
    let inner = Jet::new(c(0.3, 0.1), vec![c(0.5, 0.2), c(1.5, -0.5), c(-2.0, 1.0)]).unwrap();
    let outer = Jet::new(c(0.5, 0.2), vec![c(1.0, 0.0), c(0.7, 0.1), c(-0.4, 0.9)]).unwrap();
    let out = compose_jets(&outer, &inner).unwrap();
    let expect = outer.deriv[2] * inner.deriv[1] * inner.deriv[1] + outer.deriv[1] * inner.deriv[2];
    assert!((out.deriv[2] - expect).norm() < 1e-14);

    let id = Jet::identity(c(0.5, 0.2), 2);
    assert_eq!(compose_jets(&outer, &id).unwrap().deriv, outer.deriv);
}

#[test]
fn exact_square_of_quadratic() {
    let q = |n: i64| {
        ExactComplex::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::from_integer(BigInt::from(0)),
        )
    };
    let phi = Poly::new(vec![q(0), q(1), q(1)]);
    let f = Poly::new(vec![q(0), q(0), q(1)]);
    let inner = Jet::of_poly(&phi, q(0), 3);
    let outer = Jet::of_poly(&f, inner.value(), 3);
    assert_eq!(compose_jets(&outer, &inner).unwrap().deriv[3], q(12));
}

#[test]
fn exponential_formula_small_cases() {
    let x: Vec<BigRational> = [1, 1, 0, 0]
        .iter()
        .map(|&v| BigRational::from_integer(BigInt::from(v)))
        .collect();
    assert!(exponential_formula_check(&x, 2, 4));
    assert!(exponential_formula_check(&x, 1, 6));
    assert!(exponential_formula_check(&x, 0, 6));
}

#[test]
fn witness_fr() {
    let d = DomainSpec::disc();
    let fr = WitnessFr::new(c(1.0, 0.0), 0.0, 2.0, &d).unwrap();
    assert!((fr.jet_at(c(1.0, 0.0), 0).unwrap().deriv[0] - c(1.0, 0.0)).norm() < 1e-15);
    assert!((fr.supnorm_deriv(3) - 48.0).abs() < 1e-12);
    let w = dxm_core::WeightSequence::factorial_power(2.0).unwrap();
    let fr1 = WitnessFr::new(c(1.0, 0.0), 0.0, 1.0, &d).unwrap();
    let (norm, _) = fr1.d_norm(&w, 40).unwrap();
    assert!((norm - std::f64::consts::E).abs() < 1e-12);
}

#[test]
fn witness_fc() {
    let fc = WitnessFc::new(c(2.0, 0.0), &DomainSpec::disc()).unwrap();
    assert!((fc.jet_at(c(0.0, 0.0), 0).unwrap().deriv[0] - c(-0.5, 0.0)).norm() < 1e-15);
    assert!((WitnessFc::supnorm_deriv(2, 0.5).unwrap() - 16.0).abs() < 1e-12);
    // Second derivative of 1/(z - c) at distance 1/2 by central differences.
    let fc = WitnessFc::new(c(1.5, 0.0), &DomainSpec::disc()).unwrap();
    let h = 1e-3;
    let f = |x: f64| fc.jet_at(c(x, 0.0), 0).unwrap().deriv[0].re;
    let fd = (f(1.0 + h) - 2.0 * f(1.0) + f(1.0 - h)) / (h * h);
    assert!((fd.abs() / 16.0 - 1.0).abs() < 1e-5);
    let _ = one();
}
