//! Fixed points, boundary periodic orbits, the Denjoy-Wolff point and the
//! fixed-point classification of self-maps of the closed disc.

use num_complex::Complex64;
use serde::Serialize;

use super::inner::{contact_polynomial, contact_polynomial_c64};
use super::RationalMap;
use crate::error::{Error, Result};
use crate::numeric::ExactComplex;
use crate::poly::Poly;
use crate::roots::{distinct_roots, polish_root, polynomial_roots};
use crate::tol::{BOUNDARY_FIXED_TOLERANCE, STRICT_DEAD_ZONE};

const DW_SEEDS: [Complex64; 3] = [
    Complex64::new(0.0, 0.0),
    Complex64::new(0.3, 0.0),
    Complex64::new(0.0, 0.5),
];
const DW_MAX_STEPS: usize = 100_000;
const DW_STEP_TOLERANCE: f64 = 1e-12;
const DW_AGREEMENT: f64 = 1e-8;
/// Orbits that end this close to the circle are matched against boundary
/// fixed points instead of being required to converge.
const DW_BOUNDARY_CAPTURE: f64 = 1e-2;
/// Matching tolerance for orbit points of `phi` on the contact set.
const ORBIT_MATCH: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Interior,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedPointInfo {
    pub z: Complex64,
    pub location: Location,
    /// `phi_p'(z)` where `p` is the period.
    pub multiplier: Complex64,
    pub abs_multiplier: f64,
    pub period: usize,
    /// `|phi_p(z) - z|`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicOrbit {
    pub points: Vec<Complex64>,
    pub multiplier: Complex64,
}

impl PeriodicOrbit {
    pub fn period(&self) -> usize {
        self.points.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DenjoyWolffMethod {
    /// All seed orbits converged and agree.
    Converged,
    /// Orbits approach the circle slowly; matched to a boundary fixed point.
    BoundaryMatch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenjoyWolff {
    pub point: Complex64,
    pub boundary: bool,
    pub multiplier: Complex64,
    pub method: DenjoyWolffMethod,
    pub steps: usize,
    /// `(k, |z_k - z_{k-1}|)` along the first seed orbit at powers of two.
    pub trace: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "case")]
pub enum ClassificationCase {
    #[serde(rename = "inner")]
    Inner,
    #[serde(rename = "no_boundary_fixed_up_to_n")]
    NoBoundaryFixedUpToN { n_max: usize },
    #[serde(rename = "case3a_i")]
    Case3aI,
    #[serde(rename = "case3a_ii")]
    Case3aII,
    #[serde(rename = "case3b")]
    Case3b,
    #[serde(rename = "unknown")]
    Unknown { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    #[serde(flatten)]
    pub case: ClassificationCase,
    pub denjoy_wolff: Option<Complex64>,
    /// Fixed points of `phi` in the closed disc, then the points of `S_N`.
    pub evidence: Vec<FixedPointInfo>,
    /// The `N` whose `S_N` decided case 3, or the bound used otherwise.
    pub n_used: usize,
    /// Points of the circle where `|phi| = 1`.
    pub contact_set: Vec<Complex64>,
}

impl RationalMap {
    /// Fixed points in the domain, from the roots of `num - z den`.
    pub fn fixed_points(&self) -> Result<Vec<FixedPointInfo>> {
        let candidates = match self.exact() {
            Some((n, d)) => {
                let f = n - &(&Poly::identity() * d);
                if f.is_zero() {
                    return Err(Error::DegenerateFixedPoints);
                }
                simple_roots_exact(&f)?
            }
            None => {
                let f = &self.num - &(&Poly::identity() * &self.den);
                if f.is_zero() || f.l1_norm() <= 1e-14 * (1.0 + self.den.l1_norm()) {
                    return Err(Error::DegenerateFixedPoints);
                }
                distinct_roots(&f, 1e-6)?.into_iter().map(|c| c.center).collect()
            }
        };
        let mut out = Vec::new();
        for z in candidates {
            if let Some(info) = self.classify_fixed_point(z, 1)? {
                out.push(info);
            }
        }
        out.sort_by(|a, b| a.z.norm().total_cmp(&b.z.norm()));
        Ok(out)
    }

    /// Accepts a candidate fixed point of `phi_period`, snapping points
    /// within tolerance of the boundary onto it.
    fn classify_fixed_point(&self, z: Complex64, period: usize) -> Result<Option<FixedPointInfo>> {
        let iter = self.iterate_fn(period);
        if self.domain.is_disc() {
            let r = z.norm();
            if (r - 1.0).abs() <= BOUNDARY_FIXED_TOLERANCE {
                let snapped = z / r;
                let (v, d) = iter.eval_with_derivative(snapped)?;
                let residual = (v - snapped).norm();
                if residual <= BOUNDARY_FIXED_TOLERANCE {
                    return Ok(Some(info(snapped, Location::Boundary, d, period, residual)));
                }
            }
            if r >= 1.0 {
                return Ok(None);
            }
            let (v, d) = iter.eval_with_derivative(z)?;
            Ok(Some(info(z, Location::Interior, d, period, (v - z).norm())))
        } else {
            if self.domain.distance_to(z) > BOUNDARY_FIXED_TOLERANCE {
                return Ok(None);
            }
            let x = Complex64::new(z.re.clamp(0.0, 1.0), 0.0);
            let (v, d) = iter.eval_with_derivative(x)?;
            let location = if x.re == 0.0 || x.re == 1.0 {
                Location::Boundary
            } else {
                Location::Interior
            };
            Ok(Some(info(x, location, d, period, (v - x).norm())))
        }
    }

    /// Points of the unit circle where `|phi| = 1`, for maps that are not
    /// inner. They are the double roots on the circle of the contact
    /// polynomial.
    pub fn contact_set(&self) -> Result<Vec<Complex64>> {
        if !self.domain.is_disc() {
            return Err(Error::Unsupported("contact set is defined on the disc".into()));
        }
        let roots: Vec<Complex64> = match self.exact() {
            Some((n, d)) => {
                let g = contact_polynomial(n, d);
                if g.is_zero() {
                    return Err(Error::Unsupported("inner map: contact set is the whole circle".into()));
                }
                simple_roots_exact(&g)?
            }
            None => {
                let g = contact_polynomial_c64(&self.num, &self.den);
                if g.l1_norm() <= 1e-14 {
                    return Err(Error::Unsupported("inner map: contact set is the whole circle".into()));
                }
                distinct_roots(&g, 1e-5)?.into_iter().map(|c| c.center).collect()
            }
        };
        let mut out: Vec<Complex64> = Vec::new();
        for w in roots {
            if (w.norm() - 1.0).abs() > 1e-6 {
                continue;
            }
            let u = w / w.norm();
            if (self.eval(u)?.norm() - 1.0).abs() > 1e-9 {
                continue;
            }
            if !out.iter().any(|e| (e - u).norm() <= ORBIT_MATCH) {
                out.push(u);
            }
        }
        out.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        Ok(out)
    }

    /// Periodic orbits of `phi` on the circle with period at most `n_max`,
    /// for maps that are not inner. Such orbits stay in the contact set, so
    /// they are the cycles of `phi` restricted to it.
    pub fn boundary_periodic_orbits(&self, contact: &[Complex64], n_max: usize) -> Result<Vec<PeriodicOrbit>> {
        let next: Vec<Option<usize>> = contact
            .iter()
            .map(|e| {
                let v = self.eval(*e)?;
                Ok(contact.iter().position(|f| (v - f).norm() <= ORBIT_MATCH))
            })
            .collect::<Result<_>>()?;
        let mut seen = vec![false; contact.len()];
        let mut orbits = Vec::new();
        for start in 0..contact.len() {
            if seen[start] {
                continue;
            }
            // Walk until a repeat; report the cycle if it returns to start.
            let mut path = vec![start];
            let mut cur = start;
            let closes = loop {
                match next[cur] {
                    None => break false,
                    Some(n) if n == start => break true,
                    Some(n) if path.contains(&n) || path.len() > n_max => break false,
                    Some(n) => {
                        path.push(n);
                        cur = n;
                    }
                }
            };
            if closes && path.len() <= n_max {
                for &p in &path {
                    seen[p] = true;
                }
                let points: Vec<Complex64> = path.iter().map(|&i| contact[i]).collect();
                let (_, multiplier) = self.iterate_fn(points.len()).eval_with_derivative(points[0])?;
                orbits.push(PeriodicOrbit { points, multiplier });
            }
        }
        Ok(orbits)
    }

    /// `S_N = { phi_N(w) : |w| = 1, |phi_N(w)| = 1 }` for a non-inner map,
    /// computed on the contact set.
    pub fn boundary_image_set(&self, contact: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
        let mut out: Vec<Complex64> = Vec::new();
        'points: for &w in contact {
            let mut v = w;
            for step in 0..n {
                if step > 0 && !contact.iter().any(|e| (e - v).norm() <= ORBIT_MATCH) {
                    continue 'points;
                }
                v = self.eval(v)?;
            }
            if (v.norm() - 1.0).abs() <= BOUNDARY_FIXED_TOLERANCE && !out.iter().any(|e| (e - v).norm() <= ORBIT_MATCH)
            {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Boundary fixed points of `phi_N` for an inner map, from explicit
    /// iterates of bounded degree.
    pub fn inner_boundary_fixed_points(&self, n: usize, degree_cap: usize) -> Result<Vec<FixedPointInfo>> {
        let phi_n = self.iterate_capped(n, degree_cap)?;
        let pts = match phi_n.fixed_points() {
            Ok(p) => p,
            Err(Error::DegenerateFixedPoints) => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        Ok(pts
            .into_iter()
            .filter(|p| p.location == Location::Boundary)
            .map(|mut p| {
                p.period = n;
                p
            })
            .collect())
    }

    /// The limit of `phi_n(z)` for `z` in the open disc.
    pub fn denjoy_wolff(&self) -> Result<DenjoyWolff> {
        if self.is_rotation() {
            return Err(Error::DenjoyWolff("rotations have no attracting point".into()));
        }
        let fixed = self.fixed_points()?;
        if let Some(p) = fixed
            .iter()
            .find(|p| p.location == Location::Interior && p.abs_multiplier >= 1.0 - 1e-9)
        {
            return Err(Error::DenjoyWolff(format!(
                "interior fixed point {} with |multiplier| = {} (elliptic automorphism)",
                p.z, p.abs_multiplier
            )));
        }

        let mut finals = Vec::with_capacity(DW_SEEDS.len());
        let mut all_converged = true;
        let mut trace = Vec::new();
        let mut steps_used = 0;
        for (s, seed) in DW_SEEDS.iter().enumerate() {
            let mut z = *seed;
            let mut converged = false;
            let mut steps = 0;
            for k in 1..=DW_MAX_STEPS {
                let next = self.eval(z)?;
                let step = (next - z).norm();
                z = next;
                steps = k;
                if s == 0 && k.is_power_of_two() {
                    trace.push((k, step));
                }
                if step < DW_STEP_TOLERANCE {
                    converged = true;
                    break;
                }
            }
            steps_used = steps_used.max(steps);
            all_converged &= converged;
            finals.push(z);
        }

        let spread = finals.iter().map(|z| (z - finals[0]).norm()).fold(0.0, f64::max);
        if all_converged && spread <= DW_AGREEMENT {
            let mut point = finals[0];
            if let Some(p) = fixed.iter().find(|p| (p.z - point).norm() <= 1e-6) {
                point = p.z;
            }
            let (_, multiplier) = self.eval_with_derivative(point)?;
            return Ok(DenjoyWolff {
                point,
                boundary: (point.norm() - 1.0).abs() <= BOUNDARY_FIXED_TOLERANCE,
                multiplier,
                method: DenjoyWolffMethod::Converged,
                steps: steps_used,
                trace,
            });
        }

        let near_circle = finals.iter().all(|z| 1.0 - z.norm() <= DW_BOUNDARY_CAPTURE);
        if near_circle {
            let candidate = fixed
                .iter()
                .filter(|p| p.location == Location::Boundary)
                .filter(|p| p.multiplier.re > 0.0 && p.abs_multiplier <= 1.0 + STRICT_DEAD_ZONE)
                .min_by(|a, b| (a.z - finals[0]).norm().total_cmp(&(b.z - finals[0]).norm()));
            if let Some(p) = candidate {
                if finals.iter().all(|z| (z - p.z).norm() <= DW_BOUNDARY_CAPTURE) {
                    return Ok(DenjoyWolff {
                        point: p.z,
                        boundary: true,
                        multiplier: p.multiplier,
                        method: DenjoyWolffMethod::BoundaryMatch,
                        steps: steps_used,
                        trace,
                    });
                }
            }
        }
        Err(Error::DenjoyWolff(format!(
            "orbits did not settle after {DW_MAX_STEPS} steps (spread {spread:e})"
        )))
    }

    /// The fixed-point classification of a self-map of the closed disc,
    /// with the universal statement over all iterates bounded by `n_max`.
    pub fn classify(&self, n_max: usize) -> Result<Classification> {
        if !self.domain.is_disc() {
            return Err(Error::Unsupported("classification is defined on the disc".into()));
        }
        let n_max = n_max.max(1);
        if self.is_inner()?.inner {
            return Ok(Classification {
                case: ClassificationCase::Inner,
                denjoy_wolff: self.denjoy_wolff().ok().map(|d| d.point),
                evidence: self.fixed_points().unwrap_or_default(),
                n_used: 0,
                contact_set: Vec::new(),
            });
        }
        let fixed = self.fixed_points()?;
        let contact = self.contact_set()?;
        let orbits = self.boundary_periodic_orbits(&contact, n_max)?;
        let denjoy_wolff = self.denjoy_wolff().ok().map(|d| d.point);
        let mut evidence = fixed.clone();

        let unknown = |reason: String, evidence: Vec<FixedPointInfo>, n_used| Classification {
            case: ClassificationCase::Unknown { reason },
            denjoy_wolff,
            evidence,
            n_used,
            contact_set: contact.clone(),
        };

        if orbits.is_empty() {
            return Ok(Classification {
                case: ClassificationCase::NoBoundaryFixedUpToN { n_max },
                denjoy_wolff,
                evidence,
                n_used: n_max,
                contact_set: contact,
            });
        }

        // First N whose S_N is nonempty and made of fixed points of phi_N.
        let mut chosen = None;
        for n in 1..=n_max {
            let s_n = self.boundary_image_set(&contact, n)?;
            if s_n.is_empty() {
                continue;
            }
            let mut infos = Vec::with_capacity(s_n.len());
            let mut all_fixed = true;
            for z in s_n {
                let (v, d) = self.iterate_fn(n).eval_with_derivative(z)?;
                let residual = (v - z).norm();
                if residual > BOUNDARY_FIXED_TOLERANCE {
                    all_fixed = false;
                    break;
                }
                infos.push(info(z, Location::Boundary, d, n, residual));
            }
            if all_fixed {
                chosen = Some((n, infos));
                break;
            }
        }
        let Some((n, s_n)) = chosen else {
            return Ok(unknown(
                format!("no S_N with N <= {n_max} consists of fixed points of phi_N"),
                evidence,
                n_max,
            ));
        };
        evidence.extend(s_n.iter().copied());

        let has_interior_fixed = fixed.iter().any(|p| p.location == Location::Interior);
        let case = if has_interior_fixed {
            ClassificationCase::Case3b
        } else {
            let smallest = s_n.iter().map(|p| p.multiplier.re).fold(f64::INFINITY, f64::min);
            if (smallest - 1.0).abs() <= STRICT_DEAD_ZONE {
                ClassificationCase::Case3aII
            } else if smallest < 1.0 - STRICT_DEAD_ZONE {
                ClassificationCase::Case3aI
            } else {
                return Ok(unknown(
                    format!("every point of S_{n} repels (smallest multiplier {smallest})"),
                    evidence,
                    n,
                ));
            }
        };
        Ok(Classification {
            case,
            denjoy_wolff,
            evidence,
            n_used: n,
            contact_set: contact,
        })
    }
}

fn info(z: Complex64, location: Location, d: Complex64, period: usize, residual: f64) -> FixedPointInfo {
    FixedPointInfo {
        z,
        location,
        multiplier: d,
        abs_multiplier: d.norm(),
        period,
        residual,
    }
}

/// Distinct roots of an exact polynomial, computed from its square-free part
/// so every root is simple, then polished against the square-free part.
fn simple_roots_exact(p: &Poly<ExactComplex>) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let g = p.gcd(&p.derivative());
    let sf = if g.degree() > 0 { p.div_rem(&g).0 } else { p.clone() };
    let sf = sf.to_c64();
    let roots = polynomial_roots(&sf)?;
    Ok(roots.into_iter().map(|z| polish_root(&sf, z, 1)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;
    use crate::numeric::exact_ratio;

    fn ex(v: &[(i64, i64)]) -> Poly<ExactComplex> {
        Poly::new(v.iter().map(|&(n, d)| exact_ratio(n, d)).collect())
    }

    fn disc() -> DomainSpec {
        DomainSpec::disc()
    }

    #[test]
    fn involution_fixed_point() {
        let m = RationalMap::from_exact(ex(&[(-1, 1), (2, 1)]), ex(&[(-2, 1), (1, 1)]), disc()).unwrap();
        let fp = m.fixed_points().unwrap();
        assert_eq!(fp.len(), 1);
        assert!((fp[0].z.re - (2.0 - 3f64.sqrt())).abs() < 1e-12);
        assert!((fp[0].abs_multiplier - 1.0).abs() < 1e-10);
        assert!(m.denjoy_wolff().is_err());
    }

    #[test]
    fn square_fixed_points() {
        let m = RationalMap::polynomial(ex(&[(0, 1), (0, 1), (1, 1)]), disc()).unwrap();
        let fp = m.fixed_points().unwrap();
        assert_eq!(fp.len(), 2);
        assert_eq!(fp[0].location, Location::Interior);
        assert!(fp[0].abs_multiplier < 1e-12);
        assert_eq!(fp[1].location, Location::Boundary);
        assert!((fp[1].multiplier.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn parabolic_map_classification() {
        // (1 + z)^2 / 4
        let m = RationalMap::polynomial(ex(&[(1, 4), (1, 2), (1, 4)]), disc()).unwrap();
        let dw = m.denjoy_wolff().unwrap();
        assert!((dw.point - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!((dw.multiplier.re - 1.0).abs() < 1e-9);
        let c = m.classify(16).unwrap();
        assert_eq!(c.case, ClassificationCase::Case3aII);
        assert_eq!(c.n_used, 1);
    }

    #[test]
    fn cubic_has_no_boundary_periodic_points() {
        let m = RationalMap::polynomial(ex(&[(1, 2), (0, 1), (0, 1), (-1, 2)]), disc()).unwrap();
        let contact = m.contact_set().unwrap();
        assert_eq!(contact.len(), 3);
        assert!(contact.iter().any(|w| (w + Complex64::new(1.0, 0.0)).norm() < 1e-9));
        let c = m.classify(16).unwrap();
        assert_eq!(c.case, ClassificationCase::NoBoundaryFixedUpToN { n_max: 16 });
        let dw = c.denjoy_wolff.unwrap();
        assert!((dw.re - 0.4533976515).abs() < 1e-9);
    }

    #[test]
    fn contraction_denjoy_wolff_is_origin() {
        let m = RationalMap::polynomial(ex(&[(0, 1), (1, 2)]), disc()).unwrap();
        assert!(m.denjoy_wolff().unwrap().point.norm() < 1e-12);
        assert_eq!(m.fixed_points().unwrap().len(), 1);
    }

    #[test]
    fn identity_has_degenerate_fixed_points() {
        let id = RationalMap::polynomial(ex(&[(0, 1), (1, 1)]), disc()).unwrap();
        assert_eq!(id.fixed_points().unwrap_err(), Error::DegenerateFixedPoints);
        assert!(id.denjoy_wolff().is_err());
    }
}
