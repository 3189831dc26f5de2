//! Sampled sup norms of derivatives and truncated `D(X, M)` norms of
//! compositions.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::discdyn::RationalMap;
use crate::domain::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::jetcalc::{compose_jets, Holomorphic, Jet, WitnessFr};
use crate::numeric::{golden_max, log_sum_exp};
use crate::tol::STRICT_DEAD_ZONE;
use crate::weights::WeightSequence;

/// Peaks refined per derivative order.
const PEAKS_PER_ORDER: usize = 3;

/// `ε` in the displayed lower bound for `||F_R ∘ phi||`.
pub const GROWTH_EPSILON: f64 = 1e-3;

/// Tail ratios above this flag a truncated sum as unreliable.
pub const UNDER_TRUNCATED_RATIO: f64 = 0.5;

/// `outer ∘ inner` as a function object.
pub struct Composed<'a> {
    pub outer: &'a dyn Holomorphic,
    pub inner: &'a dyn Holomorphic,
}

impl Holomorphic for Composed<'_> {
    fn jet_at(&self, z: Complex64, order: usize) -> Result<Jet<Complex64>> {
        let inner = self.inner.jet_at(z, order)?;
        let outer = self.outer.jet_at(inner.value(), order)?;
        compose_jets(&outer, &inner)
    }
}

/// `(sup |f^(n)|, argmax)` for `n = 0..=order`, estimated on the domain
/// samples with golden-section refinement of the best peaks of each order.
///
/// On the disc only the circle is sampled (maximum modulus principle).
pub fn derivative_sups(f: &dyn Holomorphic, domain: &DomainSpec, order: usize) -> Result<Vec<(f64, Complex64)>> {
    let ts = domain.boundary_parameters();
    let table: Vec<Vec<f64>> = ts
        .par_iter()
        .map(|&t| {
            let z = domain.boundary_point(t);
            let jet = f.jet_at(z, order)?;
            let row: Vec<f64> = jet.deriv.iter().map(|d| d.norm()).collect();
            if row.iter().all(|v| v.is_finite()) {
                Ok(row)
            } else {
                Err(Error::Evaluation(z))
            }
        })
        .collect::<Result<_>>()?;

    let h = domain.boundary_step();
    (0..=order)
        .into_par_iter()
        .map(|n| {
            let column: Vec<f64> = table.iter().map(|row| row[n]).collect();
            let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
            for (t, v) in ts.iter().zip(&column) {
                if *v > best.0 {
                    best = (*v, domain.boundary_point(*t));
                }
            }
            for k in top_peaks(&column, domain.is_disc()) {
                let (lo, hi) = match domain.kind {
                    DomainKind::ClosedDisc => (ts[k] - h, ts[k] + h),
                    DomainKind::Interval01 => ((ts[k] - h).max(0.0), (ts[k] + h).min(1.0)),
                };
                let (t, v) = golden_max(
                    |t| {
                        f.jet_at(domain.boundary_point(t), n)
                            .map_or(f64::NEG_INFINITY, |j| j.deriv[n].norm())
                    },
                    lo,
                    hi,
                    domain.refine_iters,
                );
                if v.is_finite() && v > best.0 {
                    best = (v, domain.boundary_point(t));
                }
            }
            Ok(best)
        })
        .collect()
}

fn top_peaks(values: &[f64], periodic: bool) -> Vec<usize> {
    let n = values.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| {
            let left = match k {
                0 if periodic => values[n - 1],
                0 => f64::NEG_INFINITY,
                _ => values[k - 1],
            };
            let right = match k + 1 {
                j if j < n => values[j],
                _ if periodic => values[0],
                _ => f64::NEG_INFINITY,
            };
            values[k] >= left && values[k] >= right
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    peaks.truncate(PEAKS_PER_ORDER);
    peaks
}

/// A truncated `D(X, M)` norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport {
    pub truncation: usize,
    /// `||g^(n)||_inf` for `n = 0..=truncation`.
    pub sup_norms: Vec<f64>,
    /// `sum_{n <= k} ||g^(n)||_inf / M_n`.
    pub partial_sums: Vec<f64>,
    /// Ratio of the last two terms of the series.
    pub tail_ratio: f64,
}

impl NormReport {
    pub fn value(&self) -> f64 {
        *self.partial_sums.last().expect("truncation >= 0 gives one term")
    }

    fn from_sups(sup_norms: Vec<f64>, w: &WeightSequence) -> Result<Self> {
        let truncation = sup_norms.len() - 1;
        let mut logs = Vec::with_capacity(sup_norms.len());
        for (n, s) in sup_norms.iter().enumerate() {
            logs.push(s.ln() - w.log_m(n)?);
        }
        // Cumulative sums in the log domain keep tiny terms from vanishing
        // next to huge ones and large terms from overflowing early.
        let mut partial_sums = Vec::with_capacity(logs.len());
        let mut acc = f64::NEG_INFINITY;
        for l in &logs {
            acc = log_sum_exp([acc, *l]);
            partial_sums.push(acc.exp());
        }
        let tail_ratio = match truncation {
            0 => 0.0,
            n if logs[n - 1] == f64::NEG_INFINITY => 0.0,
            n => (logs[n] - logs[n - 1]).exp(),
        };
        Ok(NormReport {
            truncation,
            sup_norms,
            partial_sums,
            tail_ratio,
        })
    }
}

/// The truncated norm of `F ∘ phi` in `D(X, M)`.
pub fn composed_norm(
    f: &dyn Holomorphic,
    phi: &RationalMap,
    w: &WeightSequence,
    truncation: usize,
) -> Result<NormReport> {
    let g = Composed { outer: f, inner: phi };
    let sups = derivative_sups(&g, phi.domain(), truncation)?;
    NormReport::from_sups(sups.into_iter().map(|(v, _)| v).collect(), w)
}

/// The truncated norm of `F` itself on `domain`.
pub fn direct_norm(
    f: &dyn Holomorphic,
    domain: &DomainSpec,
    w: &WeightSequence,
    truncation: usize,
) -> Result<NormReport> {
    let sups = derivative_sups(f, domain, truncation)?;
    NormReport::from_sups(sups.into_iter().map(|(v, _)| v).collect(), w)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub r: f64,
    /// `sum m! R^m / M_m`, truncated.
    pub norm_f: f64,
    pub norm_f_phi: f64,
    pub ratio: f64,
    /// `sum m! ((1 - ε) R |phi'(b)|)^m / M_m`, truncated.
    pub lower_bound: f64,
    pub tail_ratio: f64,
    pub under_truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthExperiment {
    pub b: Complex64,
    pub image: Complex64,
    pub abs_derivative: f64,
    pub theta: f64,
    pub truncation: usize,
    pub epsilon: f64,
    pub rows: Vec<GrowthRow>,
    /// Ratios strictly increase along the given radii.
    pub monotone: bool,
    pub under_truncated: bool,
    /// Monotone and nowhere under-truncated.
    pub unbounded_growth_demonstrated: bool,
}

/// Norms of `F_R` and `F_R ∘ phi` for each `R`, with `F_R` built on the
/// external tangent at `phi(b)`.
pub fn witness_growth_experiment(
    phi: &RationalMap,
    w: &WeightSequence,
    b: Complex64,
    radii: &[f64],
    truncation: usize,
) -> Result<GrowthExperiment> {
    let domain = phi.domain();
    if domain.distance_to(b) > crate::tol::SELF_MAP_TOLERANCE {
        return Err(Error::PointOutsideDomain(b));
    }
    let (image, d) = phi.eval_with_derivative(b)?;
    let abs_derivative = d.norm();
    if abs_derivative <= 1.0 + STRICT_DEAD_ZONE {
        return Err(Error::Hypothesis(format!(
            "|phi'(b)| = {abs_derivative} does not exceed 1"
        )));
    }
    let tangent = domain
        .external_circular_tangent(snap_to_boundary(domain, image))?
        .ok_or_else(|| Error::Hypothesis(format!("phi(b) = {image} has no external circular tangent")))?;

    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let fr = WitnessFr::new(tangent.point, tangent.theta, r, domain)?;
        let (norm_f, tail_f) = fr.d_norm(w, truncation)?;
        let composed = composed_norm(&fr, phi, w, truncation)?;
        let c = (1.0 - GROWTH_EPSILON) * r * abs_derivative;
        let lower_logs: Vec<f64> = (0..=truncation)
            .map(|m| Ok(crate::numeric::log_factorial(m) + m as f64 * c.ln() - w.log_m(m)?))
            .collect::<Result<_>>()?;
        let lower_bound = log_sum_exp(lower_logs).exp();
        let tail_ratio = tail_f.max(composed.tail_ratio);
        rows.push(GrowthRow {
            r,
            norm_f,
            norm_f_phi: composed.value(),
            ratio: composed.value() / norm_f,
            lower_bound,
            tail_ratio,
            under_truncated: tail_ratio > UNDER_TRUNCATED_RATIO,
        });
    }
    let monotone = rows.windows(2).all(|p| p[1].ratio > p[0].ratio);
    let under_truncated = rows.iter().any(|r| r.under_truncated);
    Ok(GrowthExperiment {
        b,
        image,
        abs_derivative,
        theta: tangent.theta,
        truncation,
        epsilon: GROWTH_EPSILON,
        rows,
        monotone,
        under_truncated,
        unbounded_growth_demonstrated: monotone && !under_truncated,
    })
}

/// Moves a disc point within the inner-function tolerance of the circle onto
/// it, so that roundoff in `phi(b)` does not hide a tangent.
pub(crate) fn snap_to_boundary(domain: &DomainSpec, v: Complex64) -> Complex64 {
    let r = v.norm();
    if domain.is_disc() && (r - 1.0).abs() <= crate::tol::INNER_TOLERANCE && r > 0.0 {
        v / r
    } else {
        v
    }
}
