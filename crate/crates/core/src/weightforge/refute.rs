//! Weights for which `phi` fails to induce an endomorphism.

use num_complex::Complex64;

use super::{algebra_bound, log_sum, Bound, ConstructedWeights, ConstructionKind, GrowthCertificate, Provenance};
use super::{MAX_HALVINGS, SAFETY_FACTOR, SLACK};
use crate::discdyn::RationalMap;
use crate::endocheck::norms::snap_to_boundary;
use crate::endocheck::{derivative_sups, evaluate_rule, Certificate, Rule, VerdictOptions};
use crate::error::{Error, Result};
use crate::jetcalc::{compose_jets, Jet};
use crate::numeric::log_factorial;
use crate::tol::STRICT_DEAD_ZONE;
use crate::weights::WeightSequence;

/// `ln ||F_c^(m)||_inf = ln m! - (m + 1) ln d`.
pub(super) fn log_fc(m: usize, d: f64) -> f64 {
    log_factorial(m) - (m + 1) as f64 * d.ln()
}

/// A boundary point where `|phi'| > 1` and `phi(b)` has an external tangent,
/// chosen as in the verdict rules.
pub fn expanding_point(phi: &RationalMap) -> Result<Option<Complex64>> {
    let w = WeightSequence::factorial_power(2.0)?;
    let out = evaluate_rule(Rule::ExpandingTangent, phi, &w, &VerdictOptions::default());
    Ok(match out.certificate {
        Some(Certificate::ExpandingTangent { b, .. }) => Some(b),
        _ => None,
    })
}

/// `ln |(F_c ∘ phi)^(n)(b)| + (n + 1) ln d` for `c = image + normal * d`,
/// computed with the outer jet pre-scaled by `d^(n+1)` so tiny `d` does not
/// overflow.
pub(super) fn scaled_composed_log(inner: &Jet<Complex64>, normal: Complex64, d: f64, n: usize) -> Result<f64> {
    // F_c^(m)(image) = (-1)^m m! / (-normal d)^(m+1).
    let minus_nu_inv = (-normal).inv();
    let mut deriv = Vec::with_capacity(n + 1);
    let mut p = minus_nu_inv;
    for m in 0..=n {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let mag = (log_factorial(m) + (n - m) as f64 * d.ln()).exp();
        deriv.push(p * sign * mag);
        p *= minus_nu_inv;
    }
    let outer = Jet::new(inner.value(), deriv)?;
    Ok(compose_jets(&outer, &inner.truncate(n))?.deriv[n].norm().ln())
}

/// Builds `M_0 = M_1 = 1` and poles `c_n = phi(b) + d_n nu` at distance
/// `d_n` from the set, such that for `2 <= n <= n_max`:
///
/// * `M_n > 2^-n ||phi^(n)||`, `M_n >= (n!)^2` and the algebra condition hold,
/// * `||F_{c_k}^(n)|| / M_n <= 2^-n ||F_{c_k}^(k)|| / M_k` for every `k < n`,
/// * (a) `|(F_{c_n} ∘ phi)^(n)(b)| >= ||F_{c_n}^(n)|| |phi'(b)|^n / 2`,
/// * (b) `||F_{c_n}^(n)|| / M_n >= sum_{m<n} ||F_{c_n}^(m)|| / M_m`.
///
/// Then `||F_{c_n} ∘ phi|| / ||F_{c_n}|| >= |phi'(b)|^n / 6`.
pub fn construct_refuting_weights(phi: &RationalMap, b: Complex64, n_max: usize) -> Result<ConstructedWeights> {
    let domain = phi.domain();
    if !domain.contains(b) {
        return Err(Error::PointOutsideDomain(b));
    }
    if n_max < 2 {
        return Err(Error::Hypothesis("n_max must be at least 2".into()));
    }
    let (image, d1) = phi.eval_with_derivative(b)?;
    let abs_derivative = d1.norm();
    if abs_derivative <= 1.0 + STRICT_DEAD_ZONE {
        return Err(Error::Hypothesis(format!(
            "|phi'({b})| = {abs_derivative} is not above 1"
        )));
    }
    let image = snap_to_boundary(domain, image);
    let tangent = domain
        .external_circular_tangent(image)?
        .ok_or_else(|| Error::Hypothesis(format!("phi({b}) = {image} has no external tangent")))?;
    let normal = tangent.normal;
    let inner = phi.jet(b, n_max)?;

    let derivative_bounds: Vec<f64> = derivative_sups(phi, domain, n_max)?
        .into_iter()
        .map(|(v, _)| SAFETY_FACTOR * v)
        .collect();

    let ln2 = std::f64::consts::LN_2;
    let ln_abs = abs_derivative.ln();
    let mut log_m = vec![0.0; n_max + 1];
    let mut dists = vec![1.0; n_max + 1];
    let mut provenance = Vec::with_capacity(n_max + 1);
    let mut scaled = vec![f64::NAN; n_max + 1];
    for n in 0..=1 {
        let (_, mut p) = Provenance::choose(
            n,
            vec![Bound {
                name: "start".into(),
                log_value: -SLACK.ln(),
            }],
        );
        p.distance = Some(1.0);
        provenance.push(p);
    }
    for n in 2..=n_max {
        let ln2n = n as f64 * ln2;
        let mut bounds = vec![
            Bound {
                name: "(i)".into(),
                log_value: derivative_bounds[n].ln() - ln2n,
            },
            Bound {
                name: "(ii)".into(),
                log_value: 2.0 * log_factorial(n),
            },
            Bound {
                name: "(iii)".into(),
                log_value: algebra_bound(&log_m, n),
            },
        ];
        for k in 0..n {
            bounds.push(Bound {
                name: format!("decay[{k}]"),
                log_value: ln2n + log_fc(n, dists[k]) - log_fc(k, dists[k]) + log_m[k],
            });
        }
        let (l, mut p) = Provenance::choose(n, bounds);
        log_m[n] = l;

        let mut d = 0.5f64.powi(n as i32);
        let mut accepted = None;
        for h in 0..=MAX_HALVINGS {
            let s = scaled_composed_log(&inner, normal, d, n)?;
            let a_ok = s >= log_factorial(n) + n as f64 * ln_abs - ln2;
            let lhs = log_fc(n, d) - log_m[n];
            let rhs = log_sum((0..n).map(|m| log_fc(m, d) - log_m[m]));
            if a_ok && lhs >= rhs {
                accepted = Some((h, s));
                break;
            }
            d *= 0.5;
        }
        let Some((h, s)) = accepted else {
            return Err(Error::Construction {
                index: n,
                reason: format!(
                    "no distance 2^-k, k <= {}, satisfies the witness inequalities",
                    n + MAX_HALVINGS
                ),
            });
        };
        dists[n] = d;
        scaled[n] = s;
        p.distance = Some(d);
        p.halvings = Some(h);
        provenance.push(p);
    }

    let c_points: Vec<Complex64> = dists.iter().map(|&d| image + normal * d).collect();
    let growth = (2..=n_max)
        .map(|n| growth_certificate(n, &log_m, &dists, scaled[n], abs_derivative))
        .collect();

    Ok(ConstructedWeights {
        kind: ConstructionKind::Refutation,
        name: "constructed-refutation".into(),
        log_m,
        provenance,
        c_points,
        distances: dists,
        normal: Some(normal),
        a_trace: vec![None; n_max + 1],
        derivative_bounds,
        slack: SLACK,
        safety_factor: SAFETY_FACTOR,
        b: Some(b),
        abs_derivative: Some(abs_derivative),
        growth,
    })
}

/// Lower bound for `||F_{c_n} ∘ phi|| / ||F_{c_n}||` from the built prefix.
/// Terms past `n_max` are at most `2^-(m-n)` times the `n`-th one by the
/// decay constraints, so their sum is at most `2^-n_max` times it.
pub(super) fn growth_certificate(
    n: usize,
    log_m: &[f64],
    dists: &[f64],
    scaled_log: f64,
    abs_derivative: f64,
) -> GrowthCertificate {
    let n_max = log_m.len() - 1;
    let d = dists[n];
    let log_term = |m: usize| log_fc(m, d) - log_m[m];
    let composed_log = scaled_log - (n + 1) as f64 * d.ln() - log_m[n];
    let tail = log_term(n) - n_max as f64 * std::f64::consts::LN_2;
    let norm_log = log_sum((0..=n_max).map(log_term).chain(std::iter::once(tail)));
    let ratio_log = composed_log - norm_log;
    GrowthCertificate {
        n,
        composed_term: composed_log.exp(),
        witness_norm: norm_log.exp(),
        ratio: ratio_log.exp(),
        required: abs_derivative.powi(n as i32) / 6.0,
    }
}
