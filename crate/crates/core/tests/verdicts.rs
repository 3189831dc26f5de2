mod common;

use common::*;
use dxm_core::endocheck::{full_verdict, Rule, VerdictOptions, VerdictResult};
use dxm_core::WeightSequence;

fn run(name: &str, phi: &dxm_core::RationalMap) -> dxm_core::Verdict {
    let w = WeightSequence::factorial_power(2.0).unwrap();
    let t = std::time::Instant::now();
    let v = full_verdict(phi, &w, &VerdictOptions::default()).unwrap();
    eprintln!(
        "{name}: {:?} via {:?} label {:?} family {:?} ({:?})",
        v.result,
        v.rule,
        v.label,
        v.family,
        t.elapsed()
    );
    v
}

#[test]
fn reference_maps() {
    let v = run("half", &half());
    assert_eq!(v.result, VerdictResult::Endomorphism);
    let v = run("rotation", &rotation());
    assert_eq!(v.result, VerdictResult::Endomorphism);
    let v = run("mobius", &mobius_half());
    assert_eq!(v.result, VerdictResult::NotEndomorphism);
    let v = run("square", &square());
    assert_eq!(v.result, VerdictResult::NotEndomorphism);
    let v = run("cubic", &cubic());
    assert_eq!(v.result, VerdictResult::NotEndomorphism);
    assert_eq!(v.rule, Some(Rule::ExpandingTangent));
    assert_eq!(v.family.as_ref().unwrap().n1, Some(2));
    let v = run("involution", &involution());
    assert_eq!(v.result, VerdictResult::NotEndomorphism);
    let v = run("unresolved", &unresolved());
    assert_eq!(v.result, VerdictResult::Unknown);
    assert_eq!(v.label.as_deref(), Some("unresolved-case"));
}
