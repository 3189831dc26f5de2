use dxm_core::weights::WeightSequence;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn builtin_values() {
    let w2 = WeightSequence::factorial_power(2.0).unwrap();
    assert!(close(w2.log_m(3).unwrap(), 36f64.ln(), 1e-14));
    let w1 = WeightSequence::factorial_power(1.0).unwrap();
    assert!(close(w1.log_m(5).unwrap().exp(), 120.0, 1e-12));
    let wl = WeightSequence::factorial_log_power();
    assert!(close(wl.log_m(4).unwrap().exp(), 24.0 * 5f64.ln().powi(4), 1e-12));
}

#[test]
fn algebra_condition() {
    assert!(
        WeightSequence::factorial_power(2.0)
            .unwrap()
            .check_algebra_condition(40)
            .ok
    );
    assert!(
        WeightSequence::factorial_power(1.0)
            .unwrap()
            .check_algebra_condition(40)
            .ok
    );
    let bad = WeightSequence::table("m2-is-one", vec![0.0, 0.0, 0.0, 1.0]).unwrap();
    let check = bad.check_algebra_condition(3);
    assert!(!check.ok);
    assert_eq!(check.violation, Some((1, 1)));
}

#[test]
fn nonanalyticity_trace() {
    let w2 = WeightSequence::factorial_power(2.0).unwrap();
    let trace = w2.nonanalyticity_trace(60);
    let r10 = trace.iter().find(|t| t.0 == 10).unwrap().1;
    // (n!/(n!)^2)^(1/n) = (10!)^(-1/10).
    assert!((r10 - 3628800f64.powf(-0.1)).abs() < 1e-12, "{r10}");
    assert!((trace.last().unwrap().1 - 0.043).abs() < 1e-3);
    let w1 = WeightSequence::factorial_power(1.0).unwrap();
    assert!(w1.nonanalyticity_trace(20).iter().all(|t| (t.1 - 1.0).abs() < 1e-12));
}

#[test]
fn quasi_analytic_sums() {
    let w1 = WeightSequence::factorial_power(1.0).unwrap();
    let s = w1.quasi_analytic_partial_sums(10);
    assert!((s.last().unwrap() - 2.928968253968254).abs() < 1e-12);
    let w2 = WeightSequence::factorial_power(2.0).unwrap();
    let s = w2.quasi_analytic_partial_sums(3);
    assert!((s[0] - 1.0).abs() < 1e-15);
    assert!((s[1] - 1.25).abs() < 1e-15);
    assert!((s[2] - (1.25 + 1.0 / 9.0)).abs() < 1e-15);
    assert_eq!(w2.quasi_analytic_partial_sums(1).len(), 1);
}

#[test]
fn ratio_condition() {
    let r2 = WeightSequence::factorial_power(2.0).unwrap().check_ratio_condition(30);
    assert!(r2.holds);
    assert!((r2.constant - 1.0).abs() < 1e-12);
    let r15 = WeightSequence::factorial_power(1.5).unwrap().check_ratio_condition(30);
    assert!(!r15.holds);
    // Row maxima grow without bound for n!^1.5.
    assert!(r15.row_maxima.windows(2).rev().take(5).all(|w| w[1] > w[0]));
}

#[test]
fn report_json_shape() {
    let w = WeightSequence::factorial_power(2.0).unwrap();
    let v = serde_json::to_value(w.report(30)).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 5);
    assert!(v.get("thm1b").is_some());
}
