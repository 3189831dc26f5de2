//! The two supported ambient sets, `[0, 1]` and the closed unit disc:
//! sampling, sup-norm estimates, external tangents and the region split used
//! by the interior-image rule.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discdyn::RationalMap;
use crate::error::{Error, Result};
use crate::numeric::{cis, golden_max};
use crate::tol::{MARGIN_SAFETY, SELF_MAP_TOLERANCE, TANGENT_TOLERANCE};

pub const MIN_BOUNDARY_SAMPLES: usize = 64;

/// Number of local maxima of the sampled modulus that get refined.
const REFINED_PEAKS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Interval01,
    ClosedDisc,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub boundary_samples: usize,
    /// Points per axis of the square grid laid over the disc.
    pub interior_grid: usize,
    pub refine_iters: usize,
    /// Shift of the boundary grid as a fraction of one step, in `[0, 1)`.
    pub sample_offset: f64,
}

impl DomainSpec {
    pub fn new(kind: DomainKind) -> Self {
        DomainSpec {
            kind,
            boundary_samples: 2048,
            interior_grid: 256,
            refine_iters: 40,
            sample_offset: 0.0,
        }
    }

    pub fn disc() -> Self {
        Self::new(DomainKind::ClosedDisc)
    }

    pub fn interval() -> Self {
        Self::new(DomainKind::Interval01)
    }

    pub fn with_boundary_samples(mut self, n: usize) -> Result<Self> {
        if n < MIN_BOUNDARY_SAMPLES {
            return Err(Error::Sampling(format!(
                "need at least {MIN_BOUNDARY_SAMPLES} boundary samples, got {n}"
            )));
        }
        self.boundary_samples = n;
        Ok(self)
    }

    pub fn with_interior_grid(mut self, n: usize) -> Self {
        self.interior_grid = n;
        self
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.sample_offset = offset.rem_euclid(1.0);
        self
    }

    pub fn is_disc(&self) -> bool {
        self.kind == DomainKind::ClosedDisc
    }

    /// Distance from `z` to the set, zero inside.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        match self.kind {
            DomainKind::ClosedDisc => (z.norm() - 1.0).max(0.0),
            DomainKind::Interval01 => {
                let x = z.re.clamp(0.0, 1.0);
                (z - Complex64::new(x, 0.0)).norm()
            }
        }
    }

    /// Membership up to the self-map tolerance.
    pub fn contains(&self, z: Complex64) -> bool {
        self.distance_to(z) <= SELF_MAP_TOLERANCE
    }

    /// Boundary parametrisation: angle on the circle, abscissa on the interval.
    pub fn boundary_point(&self, t: f64) -> Complex64 {
        match self.kind {
            DomainKind::ClosedDisc => cis(t),
            DomainKind::Interval01 => Complex64::new(t.clamp(0.0, 1.0), 0.0),
        }
    }

    /// Parameter values of the boundary samples. The circle grid is periodic;
    /// the interval grid includes both endpoints.
    pub fn boundary_parameters(&self) -> Vec<f64> {
        let n = self.boundary_samples;
        match self.kind {
            DomainKind::ClosedDisc => (0..n)
                .map(|k| TAU * (k as f64 + self.sample_offset) / n as f64)
                .collect(),
            DomainKind::Interval01 => {
                let mut ts: Vec<f64> = (0..=n)
                    .map(|k| ((k as f64 + self.sample_offset) / n as f64).min(1.0))
                    .collect();
                if self.sample_offset > 0.0 {
                    ts.insert(0, 0.0);
                }
                ts
            }
        }
    }

    pub fn boundary_points(&self) -> Vec<Complex64> {
        self.boundary_parameters()
            .into_iter()
            .map(|t| self.boundary_point(t))
            .collect()
    }

    /// Grid points strictly inside the disc; the interval has no interior.
    pub fn interior_points(&self) -> Vec<Complex64> {
        if !self.is_disc() || self.interior_grid < 2 {
            return Vec::new();
        }
        let g = self.interior_grid;
        let step = 2.0 / (g - 1) as f64;
        let mut pts = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                let z = Complex64::new(-1.0 + i as f64 * step, -1.0 + j as f64 * step);
                if z.norm() < 1.0 {
                    pts.push(z);
                }
            }
        }
        pts
    }

    /// Boundary followed by interior samples.
    pub fn all_points(&self) -> Vec<Complex64> {
        let mut pts = self.boundary_points();
        pts.extend(self.interior_points());
        pts
    }

    /// Step between consecutive boundary parameters.
    pub fn boundary_step(&self) -> f64 {
        match self.kind {
            DomainKind::ClosedDisc => TAU / self.boundary_samples as f64,
            DomainKind::Interval01 => 1.0 / self.boundary_samples as f64,
        }
    }

    /// Sampled estimate of `sup_X |f|`, a lower bound for the true value.
    ///
    /// With `analytic_hint` on the disc only the circle is sampled (maximum
    /// modulus principle). The best boundary peaks are refined by golden
    /// section search.
    pub fn sup_norm<F>(&self, f: F, analytic_hint: bool) -> Result<SupNorm>
    where
        F: Fn(Complex64) -> Result<f64> + Sync,
    {
        let ts = self.boundary_parameters();
        let values: Vec<f64> = ts
            .par_iter()
            .map(|&t| {
                let z = self.boundary_point(t);
                f(z).and_then(|v| {
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::Evaluation(z))
                    }
                })
            })
            .collect::<Result<_>>()?;

        let mut best = SupNorm {
            value: f64::NEG_INFINITY,
            argmax: Complex64::new(0.0, 0.0),
            boundary_samples: ts.len(),
            interior_samples: 0,
            refine_iters: self.refine_iters,
        };
        for (t, v) in ts.iter().zip(&values) {
            if *v > best.value {
                best.value = *v;
                best.argmax = self.boundary_point(*t);
            }
        }

        for k in self.peak_indices(&values) {
            let h = self.boundary_step();
            let (lo, hi) = match self.kind {
                DomainKind::ClosedDisc => (ts[k] - h, ts[k] + h),
                DomainKind::Interval01 => ((ts[k] - h).max(0.0), (ts[k] + h).min(1.0)),
            };
            let (t, v) = golden_max(
                |t| f(self.boundary_point(t)).unwrap_or(f64::NEG_INFINITY),
                lo,
                hi,
                self.refine_iters,
            );
            if v.is_finite() && v > best.value {
                best.value = v;
                best.argmax = self.boundary_point(t);
            }
        }

        if !(analytic_hint && self.is_disc()) {
            let interior = self.interior_points();
            best.interior_samples = interior.len();
            let inner: Vec<(f64, Complex64)> = interior
                .par_iter()
                .map(|&z| f(z).map(|v| (v, z)))
                .collect::<Result<_>>()?;
            for (v, z) in inner {
                if v > best.value {
                    best.value = v;
                    best.argmax = z;
                }
            }
        }
        Ok(best)
    }

    /// Indices of the largest local maxima of sampled values.
    fn peak_indices(&self, values: &[f64]) -> Vec<usize> {
        let n = values.len();
        let periodic = self.is_disc();
        let mut peaks: Vec<usize> = (0..n)
            .filter(|&k| {
                let left = if k > 0 {
                    Some(values[k - 1])
                } else if periodic {
                    Some(values[n - 1])
                } else {
                    None
                };
                let right = if k + 1 < n {
                    Some(values[k + 1])
                } else if periodic {
                    Some(values[0])
                } else {
                    None
                };
                left.is_none_or(|l| values[k] >= l) && right.is_none_or(|r| values[k] >= r)
            })
            .collect();
        peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        peaks.truncate(REFINED_PEAKS);
        peaks
    }

    /// Whether `c` is touched by a closed disc lying otherwise outside the
    /// set. `None` means no such disc exists.
    pub fn external_circular_tangent(&self, c: Complex64) -> Result<Option<TangentWitness>> {
        if !self.contains(c) {
            return Err(Error::PointOutsideDomain(c));
        }
        Ok(match self.kind {
            DomainKind::ClosedDisc => {
                if (c.norm() - 1.0).abs() > TANGENT_TOLERANCE {
                    None
                } else {
                    let normal = c / c.norm();
                    Some(TangentWitness {
                        point: c,
                        theta: -normal.arg(),
                        normal,
                        center: normal * 2.0,
                        r_min: 0.0,
                    })
                }
            }
            DomainKind::Interval01 => {
                let normal = Complex64::new(0.0, -1.0);
                Some(TangentWitness {
                    point: c,
                    theta: FRAC_PI_2,
                    normal,
                    center: c + normal,
                    r_min: 0.0,
                })
            }
        })
    }

    /// Samples `X`, collects `K = {|phi'| >= 1 - eps}` and measures how far
    /// `phi(K)` stays from the boundary.
    pub fn interior_image_decomposition(&self, phi: &RationalMap, eps: f64) -> Result<RegionDecomposition> {
        let pts = self.all_points();
        let evals: Vec<(Complex64, Complex64)> = pts
            .par_iter()
            .map(|&z| phi.eval_with_derivative(z))
            .collect::<Result<_>>()?;
        let mut k_points = Vec::new();
        let mut max_phi = f64::NEG_INFINITY;
        for (z, (v, d)) in pts.iter().zip(&evals) {
            if d.norm() >= 1.0 - eps {
                k_points.push(*z);
                max_phi = max_phi.max(v.norm());
            }
        }
        // Points where |phi| touches 1 are easily missed by the grid, so the
        // boundary peaks of |phi| are refined and kept when they lie in K.
        let ts = self.boundary_parameters();
        let boundary_abs: Vec<f64> = evals[..ts.len()].iter().map(|(v, _)| v.norm()).collect();
        let h = self.boundary_step();
        for k in self.peak_indices(&boundary_abs) {
            let (lo, hi) = match self.kind {
                DomainKind::ClosedDisc => (ts[k] - h, ts[k] + h),
                DomainKind::Interval01 => ((ts[k] - h).max(0.0), (ts[k] + h).min(1.0)),
            };
            let (t, _) = golden_max(
                |t| phi.eval(self.boundary_point(t)).map_or(f64::NEG_INFINITY, |v| v.norm()),
                lo,
                hi,
                self.refine_iters,
            );
            let z = self.boundary_point(t);
            let (v, d) = phi.eval_with_derivative(z)?;
            if d.norm() >= 1.0 - eps {
                k_points.push(z);
                max_phi = max_phi.max(v.norm());
            }
        }
        let (margin, max_phi_on_k) = if k_points.is_empty() {
            (1.0, 0.0)
        } else if self.is_disc() {
            (1.0 - max_phi, max_phi)
        } else {
            // [0, 1] has empty interior in the plane.
            (0.0, max_phi)
        };
        Ok(RegionDecomposition {
            k_count: k_points.len(),
            k_points,
            eps,
            max_phi_on_k,
            margin,
            passes: margin > MARGIN_SAFETY,
            boundary_samples: self.boundary_samples,
            interior_grid: if self.is_disc() { self.interior_grid } else { 0 },
        })
    }

    /// Largest `eps = 2^-k`, `k = 0..=30`, whose decomposition passes, or the
    /// smallest tried when none does.
    pub fn interior_image_search(&self, phi: &RationalMap) -> Result<RegionDecomposition> {
        let mut last = None;
        for k in 0..=30 {
            let d = self.interior_image_decomposition(phi, 0.5f64.powi(k))?;
            if d.passes {
                return Ok(d);
            }
            last = Some(d);
        }
        Ok(last.expect("at least one epsilon tried"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: Complex64,
    pub boundary_samples: usize,
    pub interior_samples: usize,
    pub refine_iters: usize,
}

/// A disc touching the set at `point` only: for every radius `r` the disc
/// centred at `point + r * normal` qualifies. `theta = -arg(normal)` is the
/// rotation used by the `F_R` witness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TangentWitness {
    pub point: Complex64,
    pub theta: f64,
    pub normal: Complex64,
    /// Centre of the unit-radius tangent disc.
    pub center: Complex64,
    pub r_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionDecomposition {
    #[serde(skip)]
    pub k_points: Vec<Complex64>,
    pub k_count: usize,
    pub eps: f64,
    pub max_phi_on_k: f64,
    pub margin: f64,
    pub passes: bool,
    pub boundary_samples: usize,
    pub interior_grid: usize,
}
