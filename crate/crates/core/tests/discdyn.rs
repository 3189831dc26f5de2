mod common;

use common::*;
use dxm_core::discdyn::{BlaschkeKind, ClassificationCase};
use dxm_core::numeric::exact_ratio;
use dxm_core::poly::Poly;
use dxm_core::{Complex64, DomainSpec, Error, RationalMap};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn validation() {
    assert!(RationalMap::from_exact(real_poly(&[(0, 1), (1, 2)]), one(), DomainSpec::disc()).is_ok());
    assert!(RationalMap::from_exact(
        real_poly(&[(-1, 1), (2, 1)]),
        real_poly(&[(-2, 1), (1, 1)]),
        DomainSpec::disc()
    )
    .is_ok());
    let doubled = RationalMap::from_exact(real_poly(&[(0, 1), (2, 1)]), one(), DomainSpec::disc());
    assert!(matches!(doubled, Err(Error::NotSelfMap { .. })));
}

#[test]
fn iterates() {
    let phi2 = cubic().iterate(2).unwrap();
    let (num, den) = phi2.exact().unwrap();
    let expect = real_poly(&[
        (7, 16),
        (0, 1),
        (0, 1),
        (3, 16),
        (0, 1),
        (0, 1),
        (-3, 16),
        (0, 1),
        (0, 1),
        (1, 16),
    ]);
    assert_eq!(num, &expect);
    assert_eq!(den, &one());
    assert_eq!(cubic().iterate(1).unwrap().exact(), cubic().exact());
    let h3 = half().iterate(3).unwrap();
    assert_eq!(
        h3.exact().unwrap().0,
        &Poly::new(vec![exact_ratio(0, 1), exact_ratio(1, 8)])
    );
}

#[test]
fn fixed_points() {
    let fp = involution().fixed_points().unwrap();
    assert_eq!(fp.len(), 1);
    assert!((fp[0].z - c(2.0 - 3f64.sqrt(), 0.0)).norm() < 1e-10);
    assert!((fp[0].abs_multiplier - 1.0).abs() < 1e-8);

    let mut sq: Vec<(f64, f64)> = square()
        .fixed_points()
        .unwrap()
        .iter()
        .map(|p| (p.z.re, p.abs_multiplier))
        .collect();
    sq.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert!(sq.len() == 2 && sq[0].0.abs() < 1e-12 && sq[0].1 < 1e-12);
    assert!((sq[1].0 - 1.0).abs() < 1e-12 && (sq[1].1 - 2.0).abs() < 1e-9);

    let h = half().fixed_points().unwrap();
    assert!(h.len() == 1 && h[0].z.norm() < 1e-12);
}

#[test]
fn denjoy_wolff_points() {
    assert!(half().denjoy_wolff().unwrap().point.norm() < 1e-9);
    let parabolic = disc_map(real_poly(&[(1, 4), (1, 2), (1, 4)]), one());
    assert!((parabolic.denjoy_wolff().unwrap().point - c(1.0, 0.0)).norm() < 1e-6);
    let dw = cubic().denjoy_wolff().unwrap().point;
    // Real root of z^3 + 2z - 1 by bisection.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid.powi(3) + 2.0 * mid - 1.0 > 0.0 {
            hi = mid
        } else {
            lo = mid
        }
    }
    assert!((dw - c(lo, 0.0)).norm() < 1e-9 && (lo - 0.4534).abs() < 1e-4);
}

#[test]
fn inner_detection() {
    let rot = RationalMap::from_coeffs(
        &[c(0.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3)],
        &[c(1.0, 0.0)],
        DomainSpec::disc(),
    )
    .unwrap();
    let check = rot.is_inner().unwrap();
    assert!(check.inner && check.blaschke.unwrap().kind == BlaschkeKind::Rotation);
    let check = involution().is_inner().unwrap();
    let b = check.blaschke.unwrap();
    assert!(check.inner && b.kind == BlaschkeKind::Mobius);
    assert!((b.zeros[0] - c(0.5, 0.0)).norm() < 1e-12);
    assert!(!cubic().is_inner().unwrap().inner);
}

#[test]
fn classification() {
    assert_eq!(square().classify(8).unwrap().case, ClassificationCase::Inner);
    let parabolic = disc_map(real_poly(&[(1, 4), (1, 2), (1, 4)]), one());
    assert_eq!(parabolic.classify(8).unwrap().case, ClassificationCase::Case3aII);
    let cls = cubic().classify(16).unwrap();
    assert_eq!(cls.case, ClassificationCase::NoBoundaryFixedUpToN { n_max: 16 });
    assert!((cls.denjoy_wolff.unwrap() - c(0.4534, 0.0)).norm() < 1e-4);
}
