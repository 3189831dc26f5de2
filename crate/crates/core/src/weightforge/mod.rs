//! Inductive constructions of weight sequences for a given map: one for
//! which `phi` induces an endomorphism of `D(X, M)` and one for which it
//! does not.
//!
//! Every "choose `M_n` large enough" step is the maximum of explicit lower
//! bounds times a fixed slack. Sup norms inside the bounds come from
//! sampling and are multiplied by a safety factor, so the results certify
//! the sampled relaxation of each constraint.

mod constants;
mod endo;
mod refute;
mod verify;

use num_complex::Complex64;
use serde::Serialize;

pub use constants::{cauchy_bound, faa_di_bruno_constants, faa_di_bruno_constants_bell, CauchyBound};
pub use endo::construct_endomorphism_weights;
pub use refute::construct_refuting_weights;
pub use refute::expanding_point;
pub use verify::{check_construction, tamper, verify_construction, CheckRow, VerificationReport};

use crate::error::Result;
use crate::weights::WeightSequence;

/// Multiplier applied to the largest lower bound when choosing `M_n`.
pub const SLACK: f64 = 1.01;
/// Multiplier applied to sampled sup norms used inside constraints.
pub const SAFETY_FACTOR: f64 = 2.0;
/// Halvings of the witness distance tried before giving up.
pub const MAX_HALVINGS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    /// `phi` induces an endomorphism for the built weight.
    Endomorphism,
    /// `phi` does not induce an endomorphism for the built weight.
    Refutation,
}

/// One lower bound on `ln M_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bound {
    pub name: String,
    pub log_value: f64,
}

/// Which constraints limited the choice of `M_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub n: usize,
    pub binding: String,
    pub bounds: Vec<Bound>,
    /// Number of sampled points of `K` (endomorphism construction).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_count: Option<usize>,
    /// Distance from `c_n` to the set (refutation construction).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    /// Halvings of the witness distance that were needed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halvings: Option<usize>,
}

impl Provenance {
    fn choose(n: usize, bounds: Vec<Bound>) -> (f64, Self) {
        let top = bounds
            .iter()
            .max_by(|a, b| a.log_value.total_cmp(&b.log_value))
            .expect("at least one bound");
        let log_m = top.log_value + SLACK.ln();
        let binding = top.name.clone();
        (
            log_m,
            Provenance {
                n,
                binding,
                bounds,
                k_count: None,
                distance: None,
                halvings: None,
            },
        )
    }
}

/// The witness inequalities recorded at index `n` of a refutation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthCertificate {
    pub n: usize,
    /// `|(F_{c_n} ∘ phi)^(n)(b)| / M_n`, a lower bound for `||F_{c_n} ∘ phi||`.
    pub composed_term: f64,
    /// Upper bound for `||F_{c_n}||` from the built prefix and the decay
    /// constraints on later indices.
    pub witness_norm: f64,
    pub ratio: f64,
    /// `|phi'(b)|^n / 6`.
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructedWeights {
    pub kind: ConstructionKind,
    pub name: String,
    /// `ln M_n` for `n = 0..=n_max`.
    pub log_m: Vec<f64>,
    pub provenance: Vec<Provenance>,
    /// Poles `c_n` of the witnesses `1/(z - c_n)` (refutation only).
    pub c_points: Vec<Complex64>,
    /// `d_n = dist(c_n, X)` (refutation only). Beyond `n = 8` or so `d_n` is
    /// below the resolution of `c_n`, so this field is authoritative.
    pub distances: Vec<f64>,
    /// Outward unit normal at `phi(b)` (refutation only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal: Option<Complex64>,
    /// `A_n` where `K_n` is nonempty (endomorphism only).
    #[serde(rename = "A_trace")]
    pub a_trace: Vec<Option<f64>>,
    /// Safety-scaled bounds for `||phi^(k)||_inf`, `k = 0..=n_max`.
    pub derivative_bounds: Vec<f64>,
    pub slack: f64,
    pub safety_factor: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_derivative: Option<f64>,
    pub growth: Vec<GrowthCertificate>,
}

impl ConstructedWeights {
    pub fn n_max(&self) -> usize {
        self.log_m.len() - 1
    }

    pub fn to_weight_sequence(&self) -> Result<WeightSequence> {
        WeightSequence::table(self.name.clone(), self.log_m.clone())
    }
}

/// `ln sum_i exp(x_i)` over the terms that are not `-inf`.
fn log_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    crate::numeric::log_sum_exp(xs)
}

/// `max_k ln C(n, k) + ln M_k + ln M_{n-k}` over `1 <= k <= n - 1`.
fn algebra_bound(log_m: &[f64], n: usize) -> f64 {
    (1..n)
        .map(|k| crate::numeric::log_binomial(n, k) + log_m[k] + log_m[n - k])
        .fold(f64::NEG_INFINITY, f64::max)
}
