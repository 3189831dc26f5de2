//! Constants bounding `(F ∘ phi)^(n)` in terms of the derivatives of `F`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::discdyn::RationalMap;
use crate::error::{Error, Result};
use crate::jetcalc::{enumerate_partition_terms, partial_bell_table};
use crate::numeric::{cis, golden_max, log_factorial};
use crate::tol::INNER_TOLERANCE;

/// Points on the unit circle used for `omega` in the Cauchy bound.
const OMEGA_SAMPLES: usize = 512;
/// Best `(z, omega)` pairs whose `omega` gets refined.
const OMEGA_REFINED: usize = 4;

/// `C_{n,m}` for `m = 0..n`: the part of the Faà di Bruno expansion of
/// `(F ∘ phi)^(n)` multiplying `||F^(m)||`, with `|phi^(i)|` replaced by the
/// given bounds `sups[i]` (`sups[0]` is unused). The term `F^(n) (phi')^n`
/// is excluded.
pub fn faa_di_bruno_constants(sups: &[f64], n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Hypothesis("constants are defined for n >= 1".into()));
    }
    if sups.len() <= n {
        return Err(Error::JetOrder {
            needed: n,
            available: sups.len().saturating_sub(1),
        });
    }
    let x = &sups[1..=n];
    let mut out = vec![0.0; n];
    for (m, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = enumerate_partition_terms(n, m)?.iter().map(|t| t.monomial(x)).sum();
    }
    Ok(out)
}

/// The same constants through the partial Bell recurrence; an independent
/// route used when re-verifying constructions.
pub fn faa_di_bruno_constants_bell(sups: &[f64], n: usize) -> Vec<f64> {
    let table = partial_bell_table(&sups[1..=n], n);
    let mut row = table[n].clone();
    row.truncate(n);
    row
}

/// `(L / 2 pi) sup |d^n/dz^n (omega - phi(z))^-1|` over `omega` on the unit
/// circle and the given points `z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CauchyBound {
    /// Sampled supremum, a lower bound for the true one.
    pub sampled: f64,
    /// `safety * sampled`, the value used in constructions.
    pub value: f64,
    pub safety: f64,
    pub argmax_z: Complex64,
    pub argmax_omega: Complex64,
    /// `1 - max |phi(z)|` over the points.
    pub distance: f64,
}

/// Cauchy-integral bound for `(F ∘ phi)^(n)` on a set `K` whose image stays
/// off the unit circle. Only the disc is supported, where `L = 2 pi`.
pub fn cauchy_bound(phi: &RationalMap, n: usize, k_points: &[Complex64], safety: f64) -> Result<CauchyBound> {
    if !phi.domain().is_disc() {
        return Err(Error::Unsupported(
            "the Cauchy bound needs a boundary curve; use the disc".into(),
        ));
    }
    if k_points.is_empty() {
        return Err(Error::Hypothesis("the set K is empty".into()));
    }
    // Per point: phi(z) and the partial Bell row B_{n,m}(phi'(z), ...).
    let rows: Vec<(Complex64, Complex64, Vec<Complex64>)> = k_points
        .par_iter()
        .map(|&z| {
            let jet = phi.jet(z, n)?;
            let table = partial_bell_table(&jet.deriv[1..], n);
            Ok((z, jet.deriv[0], table[n].clone()))
        })
        .collect::<Result<_>>()?;
    let max_abs = rows.iter().map(|r| r.1.norm()).fold(0.0, f64::max);
    let distance = 1.0 - max_abs;
    if distance <= INNER_TOLERANCE {
        return Err(Error::Hypothesis(format!(
            "phi(K) touches the unit circle (max |phi| = {max_abs})"
        )));
    }

    let factorials: Vec<f64> = (0..=n).map(|m| log_factorial(m).exp()).collect();
    let eval = |w: Complex64, bell: &[Complex64], omega: Complex64| -> f64 {
        let inv = (omega - w).inv();
        let mut p = inv;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, b) in bell.iter().enumerate() {
            acc += b * p * factorials[m];
            p *= inv;
        }
        acc.norm()
    };
    let omegas: Vec<f64> = (0..OMEGA_SAMPLES)
        .map(|k| TAU * k as f64 / OMEGA_SAMPLES as f64)
        .collect();

    let mut per_point: Vec<(f64, usize, f64)> = rows
        .par_iter()
        .enumerate()
        .map(|(i, (_, w, bell))| {
            omegas
                .iter()
                .map(|&t| (eval(*w, bell, cis(t)), i, t))
                .fold((f64::NEG_INFINITY, i, 0.0), |a, b| if b.0 > a.0 { b } else { a })
        })
        .collect();
    per_point.sort_by(|a, b| b.0.total_cmp(&a.0));

    let h = TAU / OMEGA_SAMPLES as f64;
    let mut best = per_point[0];
    for &(_, i, t) in per_point.iter().take(OMEGA_REFINED) {
        let (_, w, bell) = &rows[i];
        let (t_star, v) = golden_max(|s| eval(*w, bell, cis(s)), t - h, t + h, 40);
        if v > best.0 {
            best = (v, i, t_star);
        }
    }
    Ok(CauchyBound {
        sampled: best.0,
        value: safety * best.0,
        safety,
        argmax_z: rows[best.1].0,
        argmax_omega: cis(best.2),
        distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_constants() {
        let s = [0.0, 0.7, 0.3, 0.2];
        let c2 = faa_di_bruno_constants(&s, 2).unwrap();
        assert_eq!(c2, vec![0.0, 0.3]);
        let c3 = faa_di_bruno_constants(&s, 3).unwrap();
        assert!((c3[2] - 3.0 * 0.7 * 0.3).abs() < 1e-15);
        assert!((c3[1] - 0.2).abs() < 1e-15);
        assert_eq!(c3[0], 0.0);
    }

    #[test]
    fn bell_route_agrees() {
        let s: Vec<f64> = (0..=9).map(|k| 0.3 + 0.1 * k as f64).collect();
        for n in 1..=9 {
            let a = faa_di_bruno_constants(&s, n).unwrap();
            let b = faa_di_bruno_constants_bell(&s, n);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn linear_map_has_no_lower_terms() {
        let s = [0.0, 0.5, 0.0, 0.0, 0.0];
        assert!(faa_di_bruno_constants(&s, 4).unwrap().iter().all(|c| *c == 0.0));
    }
}
