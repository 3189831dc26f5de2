//! Weight sequences `M_n` and the conditions imposed on them.
//!
//! Everything is stored as `ln M_n`: `n! * n^(n^2)` overflows a double before
//! `n = 10`, and every formula that uses the weights is a product or ratio.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log_binomial, log_factorial};
use crate::tol::LOG_TOLERANCE;

/// Index at which the nonanalyticity trace is judged when the sequence is
/// unbounded.
pub const NONANALYTIC_PROBE_INDEX: usize = 60;

/// Default threshold below which the trace counts as consistent with
/// `(n!/M_n)^(1/n) -> 0`. Heuristic.
pub const NONANALYTIC_THRESHOLD: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `M_n = (n!)^alpha`, `alpha >= 1`.
    FactorialPower { alpha: f64 },
    /// `M_n = n! * ln(n + 1)^n`.
    FactorialLogPower,
    /// `M_n = n! * n^(n^2)`.
    FactorialSuperexp,
    /// User supplied `ln M_n` for `n = 0..log_m.len()`.
    Table { log_m: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSequence {
    pub name: String,
    pub kind: WeightKind,
    /// Largest `N` such that the algebra condition has been verified for all
    /// `m + n <= N`.
    pub certified_prefix: usize,
}

impl WeightSequence {
    pub fn factorial_power(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::InvalidWeight(format!(
                "factorial power needs alpha >= 1, got {alpha}"
            )));
        }
        Ok(WeightSequence {
            name: format!("n!^{alpha}"),
            kind: WeightKind::FactorialPower { alpha },
            certified_prefix: 0,
        })
    }

    pub fn factorial_log_power() -> Self {
        WeightSequence {
            name: "n!log^n".into(),
            kind: WeightKind::FactorialLogPower,
            certified_prefix: 0,
        }
    }

    pub fn factorial_superexp() -> Self {
        WeightSequence {
            name: "n!n^n2".into(),
            kind: WeightKind::FactorialSuperexp,
            certified_prefix: 0,
        }
    }

    /// A finite table of `ln M_n`. Requires `ln M_0 = 0` and finite entries.
    pub fn table(name: impl Into<String>, log_m: Vec<f64>) -> Result<Self> {
        match log_m.first() {
            None => return Err(Error::InvalidWeight("empty weight table".into())),
            Some(&l0) if l0 != 0.0 => {
                return Err(Error::InvalidWeight(format!(
                    "M_0 must equal 1, table has ln M_0 = {l0}"
                )))
            }
            _ => {}
        }
        if let Some(k) = log_m.iter().position(|l| !l.is_finite()) {
            return Err(Error::InvalidWeight(format!("ln M_{k} is not finite")));
        }
        Ok(WeightSequence {
            name: name.into(),
            kind: WeightKind::Table { log_m },
            certified_prefix: 0,
        })
    }

    /// Parses the command-line names `n!^a`, `n!log^n` and `n!n^n2`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        match name {
            "n!log^n" => return Ok(Self::factorial_log_power()),
            "n!n^n2" => return Ok(Self::factorial_superexp()),
            _ => {}
        }
        let alpha = name
            .strip_prefix("n!^")
            .and_then(|a| a.parse::<f64>().ok())
            .ok_or_else(|| {
                Error::InvalidWeight(format!("unknown weight `{name}` (expected n!^a, n!log^n or n!n^n2)"))
            })?;
        Self::factorial_power(alpha)
    }

    /// Last index with a value, or `None` for the unbounded built-ins.
    pub fn max_index(&self) -> Option<usize> {
        match &self.kind {
            WeightKind::Table { log_m } => Some(log_m.len() - 1),
            _ => None,
        }
    }

    /// Clamps a requested index to the available range.
    pub fn clamp_index(&self, n: usize) -> usize {
        self.max_index().map_or(n, |last| n.min(last))
    }

    /// `ln M_n`.
    pub fn log_m(&self, n: usize) -> Result<f64> {
        let nf = n as f64;
        Ok(match &self.kind {
            WeightKind::FactorialPower { alpha } => alpha * log_factorial(n),
            WeightKind::FactorialLogPower => {
                if n == 0 {
                    0.0
                } else {
                    log_factorial(n) + nf * (nf + 1.0).ln().ln()
                }
            }
            WeightKind::FactorialSuperexp => {
                if n == 0 {
                    0.0
                } else {
                    log_factorial(n) + nf * nf * nf.ln()
                }
            }
            WeightKind::Table { log_m } => *log_m.get(n).ok_or(Error::WeightIndexOutOfRange {
                index: n,
                last: log_m.len() - 1,
            })?,
        })
    }

    /// `ln M_0, ..., ln M_upto`.
    pub fn log_prefix(&self, upto: usize) -> Result<Vec<f64>> {
        (0..=upto).map(|n| self.log_m(n)).collect()
    }

    /// Exact `M_n` for integer factorial powers.
    pub fn exact_m(&self, n: usize) -> Option<BigUint> {
        let WeightKind::FactorialPower { alpha } = self.kind else {
            return None;
        };
        if alpha.fract() != 0.0 || alpha > 64.0 {
            return None;
        }
        let fact = (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k);
        Some(fact.pow(alpha as u32))
    }

    pub fn has_exact(&self) -> bool {
        self.exact_m(0).is_some()
    }

    /// Exhaustive check of `C(m+n, n) <= M_{m+n} / (M_m M_n)` for `m + n <= upto`.
    pub fn check_algebra_condition(&self, upto: usize) -> AlgebraCheck {
        let upto = self.clamp_index(upto);
        let exact = self.has_exact();
        if exact {
            self.check_algebra_exact(upto)
        } else {
            self.check_algebra_log(upto)
        }
    }

    fn check_algebra_exact(&self, upto: usize) -> AlgebraCheck {
        let m: Vec<BigUint> = (0..=upto).map(|n| self.exact_m(n).unwrap()).collect();
        let mut check = AlgebraCheck::passing(upto, true);
        for s in 1..=upto {
            let mut binom = BigUint::one();
            for k in 0..=s {
                if k > 0 {
                    binom = binom * (s - k + 1) / k;
                }
                if &binom * &m[k] * &m[s - k] > m[s] {
                    check.fail((k, s - k));
                    return check;
                }
            }
        }
        check
    }

    fn check_algebra_log(&self, upto: usize) -> AlgebraCheck {
        let log_m = match self.log_prefix(upto) {
            Ok(l) => l,
            Err(_) => return AlgebraCheck::passing(0, false),
        };
        let mut check = AlgebraCheck::passing(upto, false);
        for s in 1..=upto {
            for k in 0..=s {
                let excess = log_binomial(s, k) - (log_m[s] - log_m[k] - log_m[s - k]);
                if excess > LOG_TOLERANCE {
                    check.fail((k, s - k));
                    return check;
                }
                if excess > 0.0 {
                    check.marginal += 1;
                }
            }
        }
        check
    }

    /// Runs the algebra check and records the certified prefix on success.
    pub fn certify(&mut self, upto: usize) -> AlgebraCheck {
        let check = self.check_algebra_condition(upto);
        if check.ok {
            self.certified_prefix = self.certified_prefix.max(check.max_checked);
        }
        check
    }

    /// `(n, (n!/M_n)^(1/n))` for `n = 1..=upto`.
    pub fn nonanalyticity_trace(&self, upto: usize) -> Vec<(usize, f64)> {
        let upto = self.clamp_index(upto);
        (1..=upto)
            .filter_map(|n| {
                let l = self.log_m(n).ok()?;
                Some((n, ((log_factorial(n) - l) / n as f64).exp()))
            })
            .collect()
    }

    /// Whether the trace at the probe index is below `threshold`.
    pub fn is_nonanalytic_consistent(&self, threshold: f64) -> bool {
        let n = self.clamp_index(NONANALYTIC_PROBE_INDEX);
        if n == 0 {
            return false;
        }
        self.nonanalyticity_trace(n).last().is_some_and(|&(_, r)| r < threshold)
    }

    /// Partial sums of `M_n / M_{n+1}`, `upto` terms starting at `n = 0`.
    pub fn quasi_analytic_partial_sums(&self, upto: usize) -> Vec<f64> {
        let upto = match self.max_index() {
            Some(last) => upto.min(last),
            None => upto,
        };
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(upto);
        for n in 0..upto {
            let (Ok(a), Ok(b)) = (self.log_m(n), self.log_m(n + 1)) else {
                break;
            };
            acc += (a - b).exp();
            out.push(acc);
        }
        out
    }

    /// Scans `(M_m/m!)(n!/M_n) m^(n-m)` over `1 <= m <= n <= upto`.
    ///
    /// The condition is reported as holding when the row maxima do not increase
    /// over the last quarter of the scanned rows; the returned constant is the
    /// largest value seen.
    pub fn check_ratio_condition(&self, upto: usize) -> RatioCondition {
        let upto = self.clamp_index(upto).max(1);
        let log_m = match self.log_prefix(upto) {
            Ok(l) => l,
            Err(_) => {
                return RatioCondition {
                    holds: false,
                    constant: f64::INFINITY,
                    argmax: (1, 1),
                    row_maxima: Vec::new(),
                }
            }
        };
        let mut best = (f64::NEG_INFINITY, (1, 1));
        let mut row_maxima = Vec::with_capacity(upto);
        for n in 1..=upto {
            let mut row = f64::NEG_INFINITY;
            for m in 1..=n {
                let v = log_m[m] - log_factorial(m) + log_factorial(n) - log_m[n] + (n - m) as f64 * (m as f64).ln();
                row = row.max(v);
                if v > best.0 {
                    best = (v, (m, n));
                }
            }
            row_maxima.push(row.exp());
        }
        let start = upto - upto / 4;
        let holds = (start..upto).all(|n| {
            let (prev, next) = (row_maxima[n - 1], row_maxima[n]);
            next <= prev * (1.0 + LOG_TOLERANCE)
        });
        RatioCondition {
            holds,
            constant: best.0.exp(),
            argmax: best.1,
            row_maxima,
        }
    }

    /// The report emitted by `weights check`.
    pub fn report(&self, upto: usize) -> WeightReport {
        let algebra = self.check_algebra_condition(upto);
        let ratio = self.check_ratio_condition(upto.max(2));
        WeightReport {
            algebra_ok: algebra.ok,
            max_checked: algebra.max_checked,
            nonanalytic_trace: self.nonanalyticity_trace(upto),
            quasi_partial_sums: self.quasi_analytic_partial_sums(upto),
            ratio_condition: RatioSummary {
                holds: ratio.holds,
                constant: ratio.constant,
                pair: ratio.argmax,
            },
        }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraCheck {
    pub ok: bool,
    pub max_checked: usize,
    /// First violating pair `(m, n)` in the order `m + n` ascending, then `m`.
    pub violation: Option<(usize, usize)>,
    /// Pairs that exceed the bound by less than the log tolerance.
    pub marginal: usize,
    pub exact: bool,
}

impl AlgebraCheck {
    fn passing(max_checked: usize, exact: bool) -> Self {
        AlgebraCheck {
            ok: true,
            max_checked,
            violation: None,
            marginal: 0,
            exact,
        }
    }

    fn fail(&mut self, pair: (usize, usize)) {
        self.ok = false;
        self.violation = Some(pair);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioCondition {
    pub holds: bool,
    /// Supremum of the scanned ratio; the constant `B` when the condition holds.
    pub constant: f64,
    pub argmax: (usize, usize),
    pub row_maxima: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub holds: bool,
    #[serde(rename = "B")]
    pub constant: f64,
    pub pair: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub algebra_ok: bool,
    pub max_checked: usize,
    pub nonanalytic_trace: Vec<(usize, f64)>,
    pub quasi_partial_sums: Vec<f64>,
    #[serde(rename = "thm1b")]
    pub ratio_condition: RatioSummary,
}
