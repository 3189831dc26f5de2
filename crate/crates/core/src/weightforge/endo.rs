//! Weights fast enough that `phi` induces an endomorphism.

use num_complex::Complex64;

use super::constants::{cauchy_bound, faa_di_bruno_constants};
use super::{algebra_bound, log_sum, Bound, ConstructedWeights, ConstructionKind, Provenance};
use super::{SAFETY_FACTOR, SLACK};
use crate::discdyn::RationalMap;
use crate::endocheck::derivative_sups;
use crate::error::{Error, Result};
use crate::numeric::log_factorial;
use crate::tol::STRICT_DEAD_ZONE;

/// Interior grid used to sample the sets `K_n`.
pub(super) const K_GRID: usize = 96;

/// Points of the closed disc mapped onto the circle, with `|phi'|` there.
pub(super) fn boundary_preimages(phi: &RationalMap) -> Result<Vec<(Complex64, f64)>> {
    let points = if phi.is_inner()?.inner {
        phi.domain().boundary_points()
    } else {
        phi.contact_set()?
    };
    points
        .into_iter()
        .map(|z| Ok((z, phi.eval_with_derivative(z)?.1.norm())))
        .collect()
}

/// Builds `M_0 = M_1 = 1` and, for `2 <= n <= n_max`, the smallest `M_n`
/// (up to the slack) such that
///
/// * (i) `M_n >= (n!)^2`,
/// * (ii) `M_n >= C(n, k) M_k M_{n-k}`,
/// * (iii) `sum_{m<n} C_{n,m} M_m <= 2^-n M_n`,
/// * (iv) `A_n <= 2^-n M_n` when `K_n = {|phi'|^n > 2}` is nonempty,
///
/// which forces `||(F ∘ phi)^(n)|| / M_n <= 2 ||F^(n)|| / M_n + 2^-n ||F||`.
///
/// Requires `|phi'| <= 1` wherever `|phi| = 1`; only the disc is supported.
pub fn construct_endomorphism_weights(phi: &RationalMap, n_max: usize) -> Result<ConstructedWeights> {
    let domain = phi.domain();
    if !domain.is_disc() {
        return Err(Error::Unsupported(
            "this construction needs a Jordan-curve boundary; [0, 1] has empty interior".into(),
        ));
    }
    if n_max < 1 {
        return Err(Error::Hypothesis("n_max must be at least 1".into()));
    }
    let preimages = boundary_preimages(phi)?;
    if let Some((z, d)) = worst_preimage(&preimages) {
        if d > 1.0 + STRICT_DEAD_ZONE {
            return Err(Error::Hypothesis(format!(
                "|phi'({z})| = {d} > 1 at a point mapped onto the circle"
            )));
        }
    }

    let derivative_bounds: Vec<f64> = derivative_sups(phi, domain, n_max)?
        .into_iter()
        .map(|(v, _)| SAFETY_FACTOR * v)
        .collect();

    let samples = domain.with_interior_grid(K_GRID).all_points();
    let abs_derivative: Vec<f64> = samples
        .iter()
        .map(|&z| Ok(phi.eval_with_derivative(z)?.1.norm()))
        .collect::<Result<_>>()?;

    let mut log_m = vec![0.0; n_max + 1];
    let mut provenance = Vec::with_capacity(n_max + 1);
    let mut a_trace = vec![None; n_max + 1];
    for n in 0..=n_max.min(1) {
        provenance.push(
            Provenance::choose(
                n,
                vec![Bound {
                    name: "start".into(),
                    log_value: -SLACK.ln(),
                }],
            )
            .1,
        );
    }
    for n in 2..=n_max {
        let ln2n = n as f64 * std::f64::consts::LN_2;
        let c = faa_di_bruno_constants(&derivative_bounds, n)?;
        let lower = log_sum((0..n).filter(|&m| c[m] > 0.0).map(|m| c[m].ln() + log_m[m]));
        let mut bounds = vec![
            Bound {
                name: "(i)".into(),
                log_value: 2.0 * log_factorial(n),
            },
            Bound {
                name: "(ii)".into(),
                log_value: algebra_bound(&log_m, n),
            },
            Bound {
                name: "(iii)".into(),
                log_value: ln2n + lower,
            },
        ];
        let k: Vec<Complex64> = samples
            .iter()
            .zip(&abs_derivative)
            .filter(|(_, d)| n as f64 * d.ln() > std::f64::consts::LN_2)
            .map(|(z, _)| *z)
            .collect();
        if !k.is_empty() {
            let a = cauchy_bound(phi, n, &k, SAFETY_FACTOR)?;
            a_trace[n] = Some(a.value);
            bounds.push(Bound {
                name: "(iv)".into(),
                log_value: ln2n + a.value.ln(),
            });
        }
        let (l, mut p) = Provenance::choose(n, bounds);
        p.k_count = Some(k.len());
        log_m[n] = l;
        provenance.push(p);
    }
    // Indices 0 and 1 are fixed at 1 regardless of the slack.
    log_m[0] = 0.0;
    if n_max >= 1 {
        log_m[1] = 0.0;
    }

    Ok(ConstructedWeights {
        kind: ConstructionKind::Endomorphism,
        name: "constructed-endomorphism".into(),
        log_m,
        provenance,
        c_points: Vec::new(),
        distances: Vec::new(),
        normal: None,
        a_trace,
        derivative_bounds,
        slack: SLACK,
        safety_factor: SAFETY_FACTOR,
        b: None,
        abs_derivative: None,
        growth: Vec::new(),
    })
}

/// The preimage with the largest `|phi'|`, ties broken towards the real
/// axis and then the smallest argument.
fn worst_preimage(points: &[(Complex64, f64)]) -> Option<(Complex64, f64)> {
    let top = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    points
        .iter()
        .copied()
        .filter(|p| p.1 >= top * (1.0 - 1e-9))
        .min_by(|a, b| {
            a.0.im
                .abs()
                .total_cmp(&b.0.im.abs())
                .then(a.0.arg().total_cmp(&b.0.arg()))
        })
}
