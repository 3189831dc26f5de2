mod common;

use common::*;
use dxm_core::{Complex64, DomainSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn sup_norms() {
    let d = DomainSpec::disc();
    let s = d.sup_norm(|z| Ok(z.norm()), true).unwrap();
    assert!((s.value - 1.0).abs() < 1e-12 && (s.argmax.norm() - 1.0).abs() < 1e-12);
    let p = DomainSpec::interval()
        .sup_norm(|z| Ok((z * (1.0 - z)).norm()), false)
        .unwrap();
    assert!((p.value - 0.25).abs() < 1e-12 && (p.argmax.re - 0.5).abs() < 1e-6);
    for f in [
        |z: Complex64| Ok(z.powi(5).norm()),
        |z: Complex64| Ok(((1.0 + z) / 2.0).norm()),
    ] {
        assert!((d.sup_norm(f, true).unwrap().value - 1.0).abs() < 1e-9);
    }
}

#[test]
fn second_iterate_of_cubic() {
    // phi_2 = 7/16 + 3 z^3/16 - 3 z^6/16 + z^9/16 peaks at 9/14 on the circle.
    let phi2 = cubic().iterate(2).unwrap();
    let s = phi2.sup_abs().unwrap();
    assert!((s.value - 9.0 / 14.0).abs() < 1e-9, "{}", s.value);
}

#[test]
fn tangents() {
    let d = DomainSpec::disc();
    assert!(d.external_circular_tangent(c(1.0, 0.0)).unwrap().is_some());
    assert!(d.external_circular_tangent(c(0.0, 0.0)).unwrap().is_none());
    assert!(DomainSpec::interval()
        .external_circular_tangent(c(0.5, 0.0))
        .unwrap()
        .is_some());
}

#[test]
fn interior_image_decomposition() {
    let d = DomainSpec::disc();
    assert!(d.interior_image_search(&half()).unwrap().passes);
    let small = d.interior_image_decomposition(&half(), 0.25).unwrap();
    assert!(small.passes && small.k_count == 0);
    let phi2 = cubic().iterate(2).unwrap();
    assert!(d.interior_image_search(&phi2).unwrap().passes);
    assert!(!d.interior_image_search(&square()).unwrap().passes);
}
