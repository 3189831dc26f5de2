//! The individual criteria. Each rule either decides or abstains; errors
//! raised while evaluating a rule are turned into abstentions by the caller.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use super::norms::{derivative_sups, snap_to_boundary};
use super::{Rule, VerdictOptions, VerdictResult};
use crate::discdyn::{
    BlaschkeData, BlaschkeKind, ClassificationCase, FixedPointInfo, InnerCheck, Location, RationalMap,
    DEFAULT_DEGREE_CAP,
};
use crate::domain::{RegionDecomposition, TangentWitness};
use crate::error::{Error, Result};
use crate::numeric::log_factorial;
use crate::tol::{MARGIN_SAFETY, POLE_CLEARANCE, STRICT_DEAD_ZONE, UNIT_DERIVATIVE_SLACK};
use crate::weights::{WeightSequence, NONANALYTIC_THRESHOLD};

/// Exponents `j` of the grid `eps = 2^-j` searched by the contraction rule.
const EPS_GRID: std::ops::RangeInclusive<i32> = 0..=40;

/// Label attached to the case left open: a boundary fixed point with
/// multiplier 1 while `||phi'|| > 1`.
pub const UNRESOLVED_LABEL: &str = "unresolved-case";

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `q = ||phi'|| + sum_{k>=2} ||phi^(k)|| eps^(k-1) / k! < 1`.
    Contraction {
        q: f64,
        eps: f64,
        derivative_norm: f64,
        /// Geometric bound used for the terms beyond `k_max`.
        tail_bound: f64,
        tail_ratio: f64,
        /// `||phi^(k)||_inf` for `k = 0..=k_max`.
        sup_norms: Vec<f64>,
        /// `(||phi^(k)|| / k!)^(1/k)` for `k = 1..=k_max`.
        root_trace: Vec<f64>,
    },
    /// `||phi'|| <= 1`, the weight ratio condition with constant `B` and
    /// bounded `||phi^(k)|| / k!`.
    UnitDerivative {
        derivative_norm: f64,
        #[serde(rename = "B")]
        constant: f64,
        pole_distance: f64,
        /// `||phi^(k)|| / k!` for `k = 1..=k_max`.
        growth_trace: Vec<f64>,
    },
    InteriorImage {
        decomposition: RegionDecomposition,
    },
    ExpandingTangent {
        b: Complex64,
        image: Complex64,
        abs_derivative: f64,
        tangent: TangentWitness,
    },
    Inner {
        blaschke: BlaschkeData,
        b: Option<Complex64>,
        abs_derivative: Option<f64>,
    },
    Iterates {
        pattern: IteratePattern,
        n: usize,
        points: Vec<FixedPointInfo>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IteratePattern {
    /// An interior fixed point of `phi` and a repelling boundary fixed point
    /// of `phi_N`.
    InteriorAndBoundaryFixed,
    /// No interior fixed point and at least two boundary fixed points of
    /// `phi_N`.
    SeveralBoundaryFixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyCriterion {
    /// `||phi_N||_inf < 1`, then the interior-image rule.
    SupNorm,
    /// `||phi_N'||_inf < 1`, then the contraction rule.
    DerivativeNorm,
    /// `phi_N` is a rotation or the identity.
    RotationIterate,
}

/// The first `N <= n_max` for which the iterate `phi_N` passes a criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub n1: Option<usize>,
    pub via: FamilyCriterion,
    /// The quantity compared with 1: `bound` when available, otherwise the
    /// sampled norm. Refers to the passing `N`, or the last one tried.
    pub value: Option<f64>,
    /// Certified upper bound for the norm, when one is available.
    pub bound: Option<f64>,
    /// Sampled estimate of the norm, a lower bound for it.
    pub sampled: Option<f64>,
    pub n_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub result: VerdictResult,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl RuleOutcome {
    pub(crate) fn abstain(rule: Rule, reason: impl Into<String>) -> Self {
        RuleOutcome {
            rule,
            result: VerdictResult::Unknown,
            reason: reason.into(),
            certificate: None,
            family: None,
            label: None,
        }
    }

    fn decide(rule: Rule, result: VerdictResult, reason: impl Into<String>, certificate: Certificate) -> Self {
        RuleOutcome {
            rule,
            result,
            reason: reason.into(),
            certificate: Some(certificate),
            family: None,
            label: None,
        }
    }
}

/// Quantities shared by several rules, computed at most once.
pub(crate) struct Context<'a> {
    pub phi: &'a RationalMap,
    pub w: &'a WeightSequence,
    pub opts: &'a VerdictOptions,
    pub nonanalytic: bool,
    sups: OnceLock<std::result::Result<Vec<(f64, Complex64)>, Error>>,
    inner: OnceLock<std::result::Result<InnerCheck, Error>>,
}

impl<'a> Context<'a> {
    pub fn new(phi: &'a RationalMap, w: &'a WeightSequence, opts: &'a VerdictOptions) -> Self {
        Context {
            phi,
            w,
            opts,
            nonanalytic: w.is_nonanalytic_consistent(NONANALYTIC_THRESHOLD),
            sups: OnceLock::new(),
            inner: OnceLock::new(),
        }
    }

    /// `(||phi^(k)||_inf, argmax)` for `k = 0..=k_max`.
    fn sups(&self) -> Result<&[(f64, Complex64)]> {
        self.sups
            .get_or_init(|| derivative_sups(self.phi, self.phi.domain(), self.opts.k_max.max(1)))
            .as_deref()
            .map_err(Clone::clone)
    }

    fn inner(&self) -> Result<&InnerCheck> {
        self.inner
            .get_or_init(|| self.phi.is_inner())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn blaschke(&self) -> Result<Option<&BlaschkeData>> {
        if !self.phi.domain().is_disc() {
            return Ok(None);
        }
        let check = self.inner()?;
        Ok(if check.inner { check.blaschke.as_ref() } else { None })
    }
}

const NOT_NONANALYTIC: &str = "weight is not consistent with (n!/M_n)^(1/n) -> 0";

pub(crate) fn evaluate(rule: Rule, ctx: &Context) -> RuleOutcome {
    let out = match rule {
        Rule::Inner => inner_rule(ctx),
        Rule::ExpandingTangent => expanding_tangent(ctx),
        Rule::Contraction => contraction(ctx),
        Rule::UnitDerivative => unit_derivative(ctx),
        Rule::InteriorImage => interior_image(ctx),
        Rule::Iterates => iterates(ctx),
    };
    out.unwrap_or_else(|e| RuleOutcome::abstain(rule, format!("evaluation failed: {e}")))
}

/// Points of the circle where `|phi'|` is largest for an inner map that is
/// not a rotation, ordered by the tie-break used throughout: largest
/// `|phi'|`, then smallest `|Im b|`, then smallest argument.
fn inner_witness(phi: &RationalMap, blaschke: &BlaschkeData) -> Result<(Complex64, f64)> {
    if blaschke.kind == BlaschkeKind::Mobius {
        let a = blaschke.zeros[0];
        let b = a / a.norm();
        return Ok((b, phi.eval_with_derivative(b)?.1.norm()));
    }
    let candidates: Vec<(Complex64, f64)> = phi
        .domain()
        .boundary_points()
        .into_iter()
        .map(|z| Ok((z, phi.eval_with_derivative(z)?.1.norm())))
        .collect::<Result<_>>()?;
    pick_witness(candidates).ok_or_else(|| Error::Verification("no boundary samples".into()))
}

fn pick_witness(candidates: Vec<(Complex64, f64)>) -> Option<(Complex64, f64)> {
    let top = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    candidates
        .into_iter()
        .filter(|c| c.1 >= top * (1.0 - 1e-9))
        .min_by(|a, b| {
            a.0.im
                .abs()
                .total_cmp(&b.0.im.abs())
                .then(a.0.arg().total_cmp(&b.0.arg()))
        })
}

fn inner_rule(ctx: &Context) -> Result<RuleOutcome> {
    let rule = Rule::Inner;
    if !ctx.phi.domain().is_disc() {
        return Ok(RuleOutcome::abstain(rule, "inner maps are defined on the disc"));
    }
    let Some(blaschke) = ctx.blaschke()? else {
        return Ok(RuleOutcome::abstain(rule, "phi is not inner"));
    };
    let blaschke = blaschke.clone();
    match blaschke.kind {
        BlaschkeKind::Constant | BlaschkeKind::Rotation => Ok(RuleOutcome::decide(
            rule,
            VerdictResult::Endomorphism,
            "phi is a unimodular constant or a rotation, which acts isometrically",
            Certificate::Inner {
                blaschke,
                b: None,
                abs_derivative: None,
            },
        )),
        BlaschkeKind::Mobius | BlaschkeKind::Higher => {
            if !ctx.nonanalytic {
                return Ok(RuleOutcome::abstain(rule, NOT_NONANALYTIC));
            }
            let (b, d) = inner_witness(ctx.phi, &blaschke)?;
            if d <= 1.0 + STRICT_DEAD_ZONE {
                return Ok(RuleOutcome::abstain(
                    rule,
                    format!("largest boundary |phi'| found is {d}, not above 1"),
                ));
            }
            Ok(RuleOutcome::decide(
                rule,
                VerdictResult::NotEndomorphism,
                format!("inner map that is neither constant nor a rotation; |phi'({b})| = {d}"),
                Certificate::Inner {
                    blaschke,
                    b: Some(b),
                    abs_derivative: Some(d),
                },
            ))
        }
    }
}

fn expanding_tangent(ctx: &Context) -> Result<RuleOutcome> {
    let rule = Rule::ExpandingTangent;
    if !ctx.nonanalytic {
        return Ok(RuleOutcome::abstain(rule, NOT_NONANALYTIC));
    }
    let phi = ctx.phi;
    let domain = phi.domain();
    let candidate = if !domain.is_disc() {
        let (sup, argmax) = ctx.sups()?[1];
        Some((Complex64::new(argmax.re.clamp(0.0, 1.0), 0.0), sup))
    } else if let Some(blaschke) = ctx.blaschke()? {
        match blaschke.kind {
            BlaschkeKind::Constant | BlaschkeKind::Rotation => None,
            _ => Some(inner_witness(phi, blaschke)?),
        }
    } else {
        let contact = phi.contact_set()?;
        let scored: Vec<(Complex64, f64)> = contact
            .into_iter()
            .map(|b| Ok((b, phi.eval_with_derivative(b)?.1.norm())))
            .collect::<Result<_>>()?;
        pick_witness(scored)
    };
    let Some((b, _)) = candidate else {
        return Ok(RuleOutcome::abstain(
            rule,
            "no point with |phi(b)| on the boundary and |phi'(b)| > 1",
        ));
    };
    let (image, d) = phi.eval_with_derivative(b)?;
    let abs_derivative = d.norm();
    if abs_derivative <= 1.0 + STRICT_DEAD_ZONE {
        return Ok(RuleOutcome::abstain(
            rule,
            format!("largest |phi'| at a boundary contact is {abs_derivative}, not above 1"),
        ));
    }
    let image = snap_to_boundary(domain, image);
    let Some(tangent) = domain.external_circular_tangent(image)? else {
        return Ok(RuleOutcome::abstain(
            rule,
            format!("phi({b}) = {image} has no external tangent"),
        ));
    };
    Ok(RuleOutcome::decide(
        rule,
        VerdictResult::NotEndomorphism,
        format!("phi({b}) has an external circular tangent and |phi'({b})| = {abs_derivative} > 1"),
        Certificate::ExpandingTangent {
            b,
            image,
            abs_derivative,
            tangent,
        },
    ))
}

fn contraction(ctx: &Context) -> Result<RuleOutcome> {
    let rule = Rule::Contraction;
    if !ctx.nonanalytic {
        return Ok(RuleOutcome::abstain(rule, NOT_NONANALYTIC));
    }
    let sup_norms: Vec<f64> = ctx.sups()?.iter().map(|s| s.0).collect();
    let s1 = sup_norms[1];
    if s1 >= 1.0 - STRICT_DEAD_ZONE {
        return Ok(RuleOutcome::abstain(rule, format!("||phi'|| = {s1} is not below 1")));
    }
    let k_max = sup_norms.len() - 1;
    let root_trace: Vec<f64> = (1..=k_max)
        .map(|k| ((sup_norms[k].ln() - log_factorial(k)) / k as f64).exp())
        .collect();

    let mut last_q = f64::INFINITY;
    for j in EPS_GRID {
        let eps = 0.5f64.powi(j);
        let (q, tail_bound, tail_ratio) = contraction_q(&sup_norms, eps);
        last_q = q;
        if q < 1.0 - STRICT_DEAD_ZONE {
            return Ok(RuleOutcome::decide(
                rule,
                VerdictResult::Endomorphism,
                format!("q = {q} < 1 at eps = {eps}"),
                Certificate::Contraction {
                    q,
                    eps,
                    derivative_norm: s1,
                    tail_bound,
                    tail_ratio,
                    sup_norms,
                    root_trace,
                },
            ));
        }
    }
    Ok(RuleOutcome::abstain(
        rule,
        format!("no eps on the grid gives q < 1 (last q = {last_q})"),
    ))
}

/// `(q, tail bound, tail ratio)` for one `eps`. Terms beyond the computed
/// orders are bounded by a geometric series with the largest term ratio over
/// the last quarter of the computed orders.
pub(crate) fn contraction_q(sup_norms: &[f64], eps: f64) -> (f64, f64, f64) {
    let k_max = sup_norms.len() - 1;
    let terms: Vec<f64> = (0..=k_max)
        .map(|k| {
            if k < 2 {
                0.0
            } else {
                (sup_norms[k].ln() + (k - 1) as f64 * eps.ln() - log_factorial(k)).exp()
            }
        })
        .collect();
    let head: f64 = terms.iter().sum();
    let start = (k_max - k_max / 4).max(2);
    let mut ratio: f64 = 0.0;
    for k in start..k_max {
        if terms[k] > 0.0 {
            ratio = ratio.max(terms[k + 1] / terms[k]);
        } else if terms[k + 1] > 0.0 {
            ratio = f64::INFINITY;
        }
    }
    let tail = if terms[k_max] == 0.0 {
        0.0
    } else if ratio < 1.0 {
        terms[k_max] * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    (sup_norms[1] + head + tail, tail, ratio)
}

fn unit_derivative(ctx: &Context) -> Result<RuleOutcome> {
    let rule = Rule::UnitDerivative;
    let cond = ctx.w.check_ratio_condition(ctx.opts.weight_upto);
    if !cond.holds {
        return Ok(RuleOutcome::abstain(
            rule,
            "weight fails the ratio condition (M_m/m!)(n!/M_n) m^(n-m) <= B",
        ));
    }
    let sups = ctx.sups()?;
    let s1 = sups[1].0;
    if s1 > 1.0 + UNIT_DERIVATIVE_SLACK {
        return Ok(RuleOutcome::abstain(rule, format!("||phi'|| = {s1} exceeds 1")));
    }
    let pole_distance = ctx.phi.pole_distance()?;
    let bounded = if pole_distance > 1.0 + POLE_CLEARANCE {
        true
    } else if pole_distance >= 1.0 - POLE_CLEARANCE {
        poles_at_unit_distance_are_simple(ctx.phi)?
    } else {
        false
    };
    let growth_trace: Vec<f64> = sups
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, s)| (s.0.ln() - log_factorial(k)).exp())
        .collect();
    if !bounded {
        return Ok(RuleOutcome::abstain(
            rule,
            format!("||phi^(k)||/k! is unbounded: a pole lies at distance {pole_distance} < 1"),
        ));
    }
    Ok(RuleOutcome::decide(
        rule,
        VerdictResult::Endomorphism,
        format!(
            "||phi'|| = {s1} <= 1 and the weight satisfies the ratio condition with B = {}",
            cond.constant
        ),
        Certificate::UnitDerivative {
            derivative_norm: s1,
            constant: cond.constant,
            pole_distance,
            growth_trace,
        },
    ))
}

/// Poles at distance exactly one from the domain keep `||phi^(k)||/k!`
/// bounded only when they are simple.
fn poles_at_unit_distance_are_simple(phi: &RationalMap) -> Result<bool> {
    let poles = phi.poles()?;
    let near: Vec<Complex64> = poles
        .iter()
        .copied()
        .filter(|p| (phi.domain().distance_to(*p) - 1.0).abs() < POLE_CLEARANCE)
        .collect();
    Ok(near
        .iter()
        .all(|p| poles.iter().filter(|q| (*q - p).norm() <= 1e-6).count() == 1))
}

fn interior_image(ctx: &Context) -> Result<RuleOutcome> {
    let rule = Rule::InteriorImage;
    if !ctx.nonanalytic {
        return Ok(RuleOutcome::abstain(rule, NOT_NONANALYTIC));
    }
    let decomposition = ctx.phi.domain().interior_image_search(ctx.phi)?;
    if decomposition.passes {
        Ok(RuleOutcome::decide(
            rule,
            VerdictResult::Endomorphism,
            format!(
                "phi maps K = {{|phi'| >= 1 - {}}} into the interior with margin {}",
                decomposition.eps, decomposition.margin
            ),
            Certificate::InteriorImage { decomposition },
        ))
    } else {
        Ok(RuleOutcome::abstain(
            rule,
            format!(
                "no eps gives margin above {MARGIN_SAFETY} (last margin {})",
                decomposition.margin
            ),
        ))
    }
}

fn iterates(ctx: &Context) -> Result<RuleOutcome> {
    let rule = Rule::Iterates;
    let phi = ctx.phi;
    if !phi.domain().is_disc() {
        return Ok(RuleOutcome::abstain(rule, "iterate criteria are defined on the disc"));
    }
    if phi.is_constant() || phi.is_rotation() {
        return Ok(RuleOutcome::abstain(
            rule,
            "constant maps and rotations have trivial iterates",
        ));
    }
    if ctx.blaschke()?.is_some() {
        inner_iterates(ctx)
    } else {
        outer_iterates(ctx)
    }
}

fn interior_fixed(fixed: &[FixedPointInfo]) -> bool {
    fixed.iter().any(|p| p.location == Location::Interior)
}

fn repelling(points: &[FixedPointInfo]) -> bool {
    points.iter().any(|p| p.abs_multiplier > 1.0 + STRICT_DEAD_ZONE)
}

fn pattern_outcome(rule: Rule, pattern: IteratePattern, n: usize, points: Vec<FixedPointInfo>) -> RuleOutcome {
    let reason = match pattern {
        IteratePattern::InteriorAndBoundaryFixed => {
            format!("phi has an interior fixed point and phi_{n} has a repelling fixed point on the circle")
        }
        IteratePattern::SeveralBoundaryFixed => format!(
            "all fixed points of phi lie on the circle and phi_{n} has {} of them",
            points.len()
        ),
    };
    RuleOutcome::decide(
        rule,
        VerdictResult::NotEndomorphism,
        reason,
        Certificate::Iterates { pattern, n, points },
    )
}

fn inner_iterates(ctx: &Context) -> Result<RuleOutcome> {
    let rule = Rule::Iterates;
    let phi = ctx.phi;
    let fixed = match phi.fixed_points() {
        Ok(f) => f,
        Err(Error::DegenerateFixedPoints) => Vec::new(),
        Err(e) => return Err(e),
    };
    let has_interior = interior_fixed(&fixed);
    let mut family = FamilyReport {
        n1: None,
        via: FamilyCriterion::RotationIterate,
        value: None,
        bound: None,
        sampled: None,
        n_max: ctx.opts.n_max,
    };
    let mut decided = None;
    let degree = phi.degree().max(1);
    for n in 1..=ctx.opts.n_max {
        if degree
            .checked_pow(n as u32)
            .is_none_or(|d| d > ctx.opts.inner_degree_cap)
        {
            family.n_max = n - 1;
            break;
        }
        let phi_n = phi.iterate_capped(n, ctx.opts.inner_degree_cap)?;
        if family.n1.is_none() && phi_n.is_rotation() {
            family.n1 = Some(n);
        }
        if decided.is_some() {
            continue;
        }
        let boundary = phi.inner_boundary_fixed_points(n, ctx.opts.inner_degree_cap)?;
        if has_interior && repelling(&boundary) {
            let points: Vec<FixedPointInfo> = boundary
                .into_iter()
                .filter(|p| p.abs_multiplier > 1.0 + STRICT_DEAD_ZONE)
                .collect();
            decided = Some(pattern_outcome(
                rule,
                IteratePattern::InteriorAndBoundaryFixed,
                n,
                points,
            ));
        } else if !has_interior && boundary.len() >= 2 && repelling(&boundary) {
            decided = Some(pattern_outcome(rule, IteratePattern::SeveralBoundaryFixed, n, boundary));
        }
    }
    let mut out =
        decided.unwrap_or_else(|| RuleOutcome::abstain(rule, "no fixed-point pattern among the computed iterates"));
    out.family = Some(family);
    Ok(out)
}

fn outer_iterates(ctx: &Context) -> Result<RuleOutcome> {
    let rule = Rule::Iterates;
    let phi = ctx.phi;
    let n_max = ctx.opts.n_max;
    let classification = phi.classify(n_max)?;
    let fixed = phi.fixed_points()?;
    let contact = &classification.contact_set;
    let orbits = phi.boundary_periodic_orbits(contact, n_max)?;
    let has_interior = interior_fixed(&fixed);

    let orbit_points = |n: usize| -> Vec<FixedPointInfo> {
        orbits
            .iter()
            .filter(|o| n.is_multiple_of(o.period()))
            .flat_map(|o| {
                o.points.iter().filter_map(move |z| {
                    let (v, d) = phi.iterate_fn(n).eval_with_derivative(*z).ok()?;
                    Some(FixedPointInfo {
                        z: *z,
                        location: Location::Boundary,
                        multiplier: d,
                        abs_multiplier: d.norm(),
                        period: n,
                        residual: (v - z).norm(),
                    })
                })
            })
            .collect()
    };

    let mut decided = None;
    for n in 1..=n_max {
        let points = orbit_points(n);
        if has_interior && repelling(&points) {
            let points = points
                .into_iter()
                .filter(|p| p.abs_multiplier > 1.0 + STRICT_DEAD_ZONE)
                .collect();
            decided = Some(pattern_outcome(
                rule,
                IteratePattern::InteriorAndBoundaryFixed,
                n,
                points,
            ));
            break;
        }
        if !has_interior && points.len() >= 2 && repelling(&points) {
            decided = Some(pattern_outcome(rule, IteratePattern::SeveralBoundaryFixed, n, points));
            break;
        }
    }

    let family = match classification.case {
        ClassificationCase::NoBoundaryFixedUpToN { .. } => Some(sup_norm_family(phi, n_max)?),
        ClassificationCase::Case3aI if orbits.len() == 1 && orbits[0].period() == 1 => {
            Some(derivative_family(phi, n_max)?)
        }
        _ => None,
    };

    let mut out = match decided {
        Some(o) => o,
        None => {
            let s1 = ctx.sups()?[1].0;
            match classification.case {
                ClassificationCase::Case3aII if s1 > 1.0 + STRICT_DEAD_ZONE => {
                    let mut o = RuleOutcome::abstain(
                        rule,
                        format!(
                            "boundary fixed point with multiplier 1 while ||phi'|| = {s1} > 1: \
                             open case, no criterion applies"
                        ),
                    );
                    o.label = Some(UNRESOLVED_LABEL.into());
                    o
                }
                _ => RuleOutcome::abstain(rule, "no fixed-point pattern decides phi itself"),
            }
        }
    };
    out.family = family;
    Ok(out)
}

/// First `N` with `||phi_N||_inf < 1` by a safe margin.
///
/// For polynomial maps the decision uses the coefficient bound
/// `||p||_inf <= sum |p_k|`, which unlike sampling cannot underestimate.
fn sup_norm_family(phi: &RationalMap, n_max: usize) -> Result<FamilyReport> {
    let mut report = FamilyReport {
        n1: None,
        via: FamilyCriterion::SupNorm,
        value: None,
        bound: None,
        sampled: None,
        n_max,
    };
    for n in 1..=n_max {
        let it = phi.iterate_fn(n);
        let sampled = phi.domain().sup_norm(|z| Ok(it.eval(z)?.norm()), true)?.value;
        let bound = if phi.den().degree() == 0 {
            match phi.iterate_capped(n, DEFAULT_DEGREE_CAP) {
                Ok(p) => Some(p.num().l1_norm() / p.den().coeff(0).norm()),
                Err(Error::DegreeCap { .. }) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let value = bound.unwrap_or(sampled);
        report.value = Some(value);
        report.bound = bound;
        report.sampled = Some(sampled);
        if value < 1.0 - MARGIN_SAFETY {
            report.n1 = Some(n);
            break;
        }
    }
    Ok(report)
}

/// First `N` with `||phi_N'||_inf < 1`.
fn derivative_family(phi: &RationalMap, n_max: usize) -> Result<FamilyReport> {
    let mut value = None;
    for n in 1..=n_max {
        let it = phi.iterate_fn(n);
        let s = phi
            .domain()
            .sup_norm(|z| Ok(it.eval_with_derivative(z)?.1.norm()), true)?
            .value;
        value = Some(s);
        if s < 1.0 - STRICT_DEAD_ZONE {
            return Ok(FamilyReport {
                n1: Some(n),
                via: FamilyCriterion::DerivativeNorm,
                value,
                bound: None,
                sampled: value,
                n_max,
            });
        }
    }
    Ok(FamilyReport {
        n1: None,
        via: FamilyCriterion::DerivativeNorm,
        value,
        bound: None,
        sampled: value,
        n_max,
    })
}
