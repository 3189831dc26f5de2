//! The verdict engine: positive and negative criteria for `f -> f ∘ phi` to
//! be an endomorphism of `D(X, M)`, composition norms and the norm-growth
//! experiment behind the expanding-tangent refutation.

pub mod norms;
mod rules;

use rayon::prelude::*;
use serde::Serialize;

pub use norms::{
    composed_norm, derivative_sups, direct_norm, witness_growth_experiment, Composed, GrowthExperiment, GrowthRow,
    NormReport, GROWTH_EPSILON, UNDER_TRUNCATED_RATIO,
};
pub use rules::{Certificate, FamilyCriterion, FamilyReport, IteratePattern, RuleOutcome, UNRESOLVED_LABEL};

use crate::discdyn::RationalMap;
use crate::error::{Error, Result};
use crate::weights::WeightSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictResult {
    Endomorphism,
    NotEndomorphism,
    Unknown,
}

impl VerdictResult {
    pub fn is_decisive(self) -> bool {
        self != VerdictResult::Unknown
    }
}

/// The criteria, in the order in which a decisive answer is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Inner maps: only constants and rotations qualify.
    Inner,
    /// `phi(b)` has an external circular tangent and `|phi'(b)| > 1`.
    ExpandingTangent,
    /// `||phi'|| < 1` with a summable correction from higher derivatives.
    Contraction,
    /// `||phi'|| <= 1` for weights satisfying the ratio condition.
    UnitDerivative,
    /// `phi` maps the set where `|phi'|` is close to 1 into the interior.
    InteriorImage,
    /// Fixed-point patterns of the iterates.
    Iterates,
}

impl Rule {
    pub const ORDER: [Rule; 6] = [
        Rule::Inner,
        Rule::ExpandingTangent,
        Rule::Contraction,
        Rule::UnitDerivative,
        Rule::InteriorImage,
        Rule::Iterates,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerdictOptions {
    /// Highest derivative of `phi` whose sup norm is computed.
    pub k_max: usize,
    /// Iterates `phi_N` are examined for `N <= n_max`.
    pub n_max: usize,
    /// Weight indices scanned by the ratio condition.
    pub weight_upto: usize,
    /// Truncation order of `D`-norm series.
    pub truncation: usize,
    /// Largest degree of an explicitly formed iterate of an inner map.
    pub inner_degree_cap: usize,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            k_max: 24,
            n_max: 16,
            weight_upto: 30,
            truncation: 40,
            inner_degree_cap: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub result: VerdictResult,
    pub rule: Option<Rule>,
    pub certificate: Option<Certificate>,
    pub truncation: VerdictOptions,
    pub label: Option<String>,
    /// What the iterate criteria say about the family `phi_N`.
    pub family: Option<FamilyReport>,
    /// One outcome per rule, in rule order.
    pub evidence: Vec<RuleOutcome>,
}

/// Evaluates one rule on its own.
pub fn evaluate_rule(rule: Rule, phi: &RationalMap, w: &WeightSequence, opts: &VerdictOptions) -> RuleOutcome {
    rules::evaluate(rule, &rules::Context::new(phi, w, opts))
}

/// Runs every rule and returns the first decisive outcome.
///
/// Fails with [`Error::Verification`] when two rules disagree, which would
/// mean a numerical certificate is wrong.
pub fn full_verdict(phi: &RationalMap, w: &WeightSequence, opts: &VerdictOptions) -> Result<Verdict> {
    let ctx = rules::Context::new(phi, w, opts);
    let evidence: Vec<RuleOutcome> = Rule::ORDER
        .par_iter()
        .map(|&rule| rules::evaluate(rule, &ctx))
        .collect();

    let positive = evidence.iter().find(|o| o.result == VerdictResult::Endomorphism);
    let negative = evidence.iter().find(|o| o.result == VerdictResult::NotEndomorphism);
    if let (Some(p), Some(n)) = (positive, negative) {
        return Err(Error::Verification(format!(
            "rule {:?} certifies an endomorphism ({}) but rule {:?} refutes it ({})",
            p.rule, p.reason, n.rule, n.reason
        )));
    }

    let iterates = evidence.iter().find(|o| o.rule == Rule::Iterates);
    let family = iterates.and_then(|o| o.family.clone());
    let decisive = evidence.iter().find(|o| o.result.is_decisive());
    let verdict = match decisive {
        Some(o) => Verdict {
            result: o.result,
            rule: Some(o.rule),
            certificate: o.certificate.clone(),
            truncation: *opts,
            label: None,
            family,
            evidence,
        },
        None => Verdict {
            result: VerdictResult::Unknown,
            rule: None,
            certificate: None,
            truncation: *opts,
            label: iterates.and_then(|o| o.label.clone()),
            family,
            evidence,
        },
    };
    Ok(verdict)
}
