//! Re-checks a constructed weight through routes other than the ones used
//! to build it: partial Bell constants, shifted sample grids, exact
//! binomials and direct witness jets.

use num_complex::Complex64;
use serde::Serialize;

use super::constants::{cauchy_bound, faa_di_bruno_constants_bell};
use super::endo::K_GRID;
use super::refute::{growth_certificate, log_fc, scaled_composed_log};
use super::{log_sum, ConstructedWeights, ConstructionKind};
use crate::discdyn::RationalMap;
use crate::domain::DomainSpec;
use crate::endocheck::norms::snap_to_boundary;
use crate::endocheck::{derivative_sups, Composed};
use crate::error::{Error, Result};
use crate::jetcalc::Holomorphic;
use crate::jetcalc::WitnessFc;
use crate::numeric::{binomial, log_factorial};

/// Sample offset of the shifted grids, as a fraction of one step.
const SHIFT: f64 = 0.5;
/// Below this distance `c_n` is too close to `phi(b)` for direct jets.
const RESOLVED_DISTANCE: f64 = 1e-6;
/// Highest order of the term-bound spot check.
const SPOT_CHECK_ORDER: usize = 12;
/// Poles of the test functions `1/(z - c)` in the term-bound spot check.
const SPOT_POLES: [(f64, f64); 3] = [(1.5, 0.0), (0.0, -1.2), (-0.73, 0.82)];

/// One inequality `lhs <= rhs`, both in log scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub n: usize,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub kind: ConstructionKind,
    pub n_max: usize,
    pub rows: Vec<CheckRow>,
    pub failures: usize,
    pub ok: bool,
}

#[derive(Default)]
struct Rows(Vec<CheckRow>);

impl Rows {
    fn le(&mut self, n: usize, check: impl Into<String>, lhs: f64, rhs: f64) {
        let tol = 1e-9 * rhs.abs().max(1.0);
        let ok = lhs.is_finite() && rhs.is_finite() && lhs <= rhs + tol || lhs == f64::NEG_INFINITY;
        self.0.push(CheckRow {
            n,
            check: check.into(),
            lhs,
            rhs,
            ok,
        });
    }

    fn eq(&mut self, n: usize, check: impl Into<String>, value: f64, target: f64) {
        let ok = (value - target).abs() <= 1e-12;
        self.0.push(CheckRow {
            n,
            check: check.into(),
            lhs: value,
            rhs: target,
            ok,
        });
    }
}

/// Returns `cw` with `M_n` multiplied by `factor`; a negative control for
/// the verifier.
pub fn tamper(cw: &ConstructedWeights, n: usize, factor: f64) -> ConstructedWeights {
    let mut out = cw.clone();
    out.log_m[n] += factor.ln();
    out
}

/// Runs every check and reports them all.
pub fn check_construction(cw: &ConstructedWeights, phi: &RationalMap) -> Result<VerificationReport> {
    let n_max = cw.n_max();
    let mut rows = Rows::default();
    common_checks(cw, &mut rows);
    let shifted = phi.domain().with_offset(SHIFT);
    let fresh = derivative_sups(phi, &shifted, n_max)?;
    match cw.kind {
        ConstructionKind::Endomorphism => endomorphism_checks(cw, phi, &fresh, &mut rows)?,
        ConstructionKind::Refutation => refutation_checks(cw, phi, &fresh, &mut rows)?,
    }
    let failures = rows.0.iter().filter(|r| !r.ok).count();
    Ok(VerificationReport {
        kind: cw.kind,
        n_max,
        rows: rows.0,
        failures,
        ok: failures == 0,
    })
}

/// Like [`check_construction`], failing with [`Error::Verification`] if any
/// inequality is violated.
pub fn verify_construction(cw: &ConstructedWeights, phi: &RationalMap) -> Result<VerificationReport> {
    let report = check_construction(cw, phi)?;
    if report.ok {
        return Ok(report);
    }
    let failed: Vec<String> = report
        .rows
        .iter()
        .filter(|r| !r.ok)
        .take(5)
        .map(|r| format!("n = {} {}: {} > {}", r.n, r.check, r.lhs, r.rhs))
        .collect();
    Err(Error::Verification(format!(
        "{} of {} checks failed; first: {}",
        report.failures,
        report.rows.len(),
        failed.join("; ")
    )))
}

fn common_checks(cw: &ConstructedWeights, rows: &mut Rows) {
    let lm = &cw.log_m;
    rows.eq(0, "M_0 = 1", lm[0], 0.0);
    rows.eq(1, "M_1 = 1", lm[1], 0.0);
    for n in 2..lm.len() {
        // r_n = (n!/M_n)^(1/n) <= (1/n!)^(1/n) forces r_n -> 0.
        let r = (log_factorial(n) - lm[n]) / n as f64;
        rows.le(n, "nonanalytic", r, -log_factorial(n) / n as f64);
        for k in 1..n {
            let c = (binomial(n, k) as f64).ln();
            rows.le(n, format!("algebra[{k}]"), c + lm[k] + lm[n - k], lm[n]);
        }
    }
}

fn endomorphism_checks(
    cw: &ConstructedWeights,
    phi: &RationalMap,
    fresh: &[(f64, Complex64)],
    rows: &mut Rows,
) -> Result<()> {
    let lm = &cw.log_m;
    let n_max = cw.n_max();
    let ln2 = std::f64::consts::LN_2;
    for (k, (sup, _)) in fresh.iter().enumerate().take(n_max + 1).skip(1) {
        rows.le(k, format!("sup[{k}]"), sup.ln(), cw.derivative_bounds[k].ln());
    }
    let shifted = phi.domain().with_offset(SHIFT).with_interior_grid(K_GRID + 1);
    let samples = shifted.all_points();
    let abs_derivative: Vec<f64> = samples
        .iter()
        .map(|&z| Ok(phi.eval_with_derivative(z)?.1.norm()))
        .collect::<Result<_>>()?;
    for n in 2..=n_max {
        let ln2n = n as f64 * ln2;
        let c = faa_di_bruno_constants_bell(&cw.derivative_bounds, n);
        let lower = log_sum((0..n).filter(|&m| c[m] > 0.0).map(|m| c[m].ln() + lm[m]));
        rows.le(n, "(iii)", ln2n + lower, lm[n]);
        if let Some(a) = cw.a_trace.get(n).copied().flatten() {
            rows.le(n, "(iv)", ln2n + a.ln(), lm[n]);
        }
        let k: Vec<Complex64> = samples
            .iter()
            .zip(&abs_derivative)
            .filter(|(_, d)| n as f64 * d.ln() > ln2)
            .map(|(z, _)| *z)
            .collect();
        if !k.is_empty() {
            let a = cauchy_bound(phi, n, &k, 1.0)?;
            rows.le(n, "(iv) shifted", ln2n + a.sampled.ln(), lm[n]);
        }
    }

    // ||(F ∘ phi)^(n)|| / M_n <= 2 ||F^(n)|| / M_n + 2^-n ||F|| for test F.
    let top = n_max.min(SPOT_CHECK_ORDER);
    for &(re, im) in &SPOT_POLES {
        let fc = WitnessFc::new(Complex64::new(re, im), phi.domain())?;
        let composed = Composed { outer: &fc, inner: phi };
        let sups = derivative_sups(&composed, phi.domain(), top)?;
        let norm = log_sum((0..=n_max).map(|m| log_fc(m, fc.distance) - lm[m]));
        for n in 2..=top {
            let rhs = log_sum([ln2 + log_fc(n, fc.distance) - lm[n], norm - n as f64 * ln2]);
            rows.le(n, format!("term bound c = {}", fc.c), sups[n].0.ln() - lm[n], rhs);
        }
    }
    Ok(())
}

fn refutation_checks(
    cw: &ConstructedWeights,
    phi: &RationalMap,
    fresh: &[(f64, Complex64)],
    rows: &mut Rows,
) -> Result<()> {
    let lm = &cw.log_m;
    let n_max = cw.n_max();
    let ln2 = std::f64::consts::LN_2;
    let b =
        cw.b.ok_or_else(|| Error::Verification("refutation without a base point".into()))?;
    let domain: &DomainSpec = phi.domain();
    let dists = &cw.distances;
    if dists.len() != n_max + 1 || cw.c_points.len() != n_max + 1 || dists.iter().any(|d| d.is_nan() || *d <= 0.0) {
        return Err(Error::Verification("distances d_n missing or not positive".into()));
    }
    let (image, d1) = phi.eval_with_derivative(b)?;
    let abs_derivative = d1.norm();
    let inner = phi.jet(b, n_max)?;
    let image = snap_to_boundary(domain, image);
    let normal = domain
        .external_circular_tangent(image)?
        .ok_or_else(|| Error::Verification(format!("phi({b}) has no external tangent")))?
        .normal;
    for (n, (&c, &d)) in cw.c_points.iter().zip(dists).enumerate() {
        if d > RESOLVED_DISTANCE {
            rows.le(
                n,
                "distance",
                (domain.distance_to(c) / d - 1.0).abs().ln(),
                (1e-6f64).ln(),
            );
        }
    }

    for n in 2..=n_max {
        let ln2n = n as f64 * ln2;
        rows.le(n, "(i) shifted", fresh[n].0.ln() - ln2n, lm[n]);
        for k in 0..n {
            rows.le(
                n,
                format!("decay[{k}]"),
                ln2n + log_fc(n, dists[k]) - log_fc(k, dists[k]) + lm[k],
                lm[n],
            );
        }
        let d = dists[n];
        let c = cw.c_points[n];
        // Direct jets of 1/(z - c) while c is resolved, the scaled route otherwise.
        let direct = if d <= RESOLVED_DISTANCE {
            Err(Error::Evaluation(c))
        } else {
            WitnessFc::new(c, domain)
        };
        let direct = direct.and_then(|fc| {
            let jet = Composed { outer: &fc, inner: phi }.jet_at(b, n)?;
            let v = jet.deriv[n].norm();
            if v.is_finite() && v > 0.0 {
                Ok(v.ln() + (n + 1) as f64 * d.ln())
            } else {
                Err(Error::Evaluation(b))
            }
        });
        let scaled = match direct {
            Ok(s) => s,
            Err(_) => scaled_composed_log(&inner, normal, d, n)?,
        };
        rows.le(
            n,
            "(a)",
            log_factorial(n) + n as f64 * abs_derivative.ln() - ln2,
            scaled,
        );
        rows.le(
            n,
            "(b)",
            log_sum((0..n).map(|m| log_fc(m, d) - lm[m])),
            log_fc(n, d) - lm[n],
        );
        let g = growth_certificate(n, lm, dists, scaled, abs_derivative);
        rows.le(n, "growth", g.required.ln(), g.ratio.ln());
    }
    Ok(())
}
