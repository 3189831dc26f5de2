//! The two rational test-function families with closed-form derivatives.

use num_complex::Complex64;
use serde::Serialize;

use super::{Holomorphic, Jet};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::numeric::{cis, log_factorial, log_sum_exp};
use crate::tol::POLE_CLEARANCE;
use crate::weights::WeightSequence;

/// `F_R(z) = 1 / (1 + e^{i theta} R (w0 - z))` with `w0 = phi(b)`.
///
/// Its pole is `w0 + e^{-i theta} / R`. When the disc of radius `1/R` about
/// the pole meets `X` only at `w0`, `||F_R^(m)|| = m! R^m` on `X`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessFr {
    pub image: Complex64,
    pub theta: f64,
    pub r: f64,
}

impl WitnessFr {
    pub fn new(image: Complex64, theta: f64, r: f64, domain: &DomainSpec) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Hypothesis(format!("R must be positive, got {r}")));
        }
        let w = WitnessFr { image, theta, r };
        if domain.distance_to(w.pole()) <= POLE_CLEARANCE {
            return Err(Error::PoleInDomain(w.pole()));
        }
        Ok(w)
    }

    pub fn pole(&self) -> Complex64 {
        self.image + cis(-self.theta) / self.r
    }

    fn scale(&self) -> Complex64 {
        cis(self.theta) * self.r
    }

    /// `||F_R^(m)||_inf = m! R^m`.
    pub fn supnorm_deriv(&self, m: usize) -> f64 {
        self.log_supnorm_deriv(m).exp()
    }

    pub fn log_supnorm_deriv(&self, m: usize) -> f64 {
        log_factorial(m) + m as f64 * self.r.ln()
    }

    /// Truncated `||F_R||_D = sum_{m <= n} m! R^m / M_m` and the ratio of the
    /// last two terms.
    pub fn d_norm(&self, w: &WeightSequence, truncation: usize) -> Result<(f64, f64)> {
        let logs: Vec<f64> = (0..=truncation)
            .map(|m| Ok(self.log_supnorm_deriv(m) - w.log_m(m)?))
            .collect::<Result<_>>()?;
        let tail = match truncation {
            0 => 0.0,
            n => (logs[n] - logs[n - 1]).exp(),
        };
        Ok((log_sum_exp(logs.iter().copied()).exp(), tail))
    }
}

impl Holomorphic for WitnessFr {
    fn jet_at(&self, z: Complex64, order: usize) -> Result<Jet<Complex64>> {
        let s = self.scale();
        let denom = Complex64::new(1.0, 0.0) + s * (self.image - z);
        if denom.norm() == 0.0 {
            return Err(Error::Evaluation(z));
        }
        let u = s / denom;
        let mut deriv = Vec::with_capacity(order + 1);
        let mut term = denom.inv();
        for m in 0..=order {
            if m > 0 {
                term = term * u * m as f64;
            }
            deriv.push(term);
        }
        Jet::new(z, deriv)
    }
}

/// `F_c(z) = 1 / (z - c)` for `c` off the domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessFc {
    pub c: Complex64,
    /// Distance from `c` to the domain.
    pub distance: f64,
}

impl WitnessFc {
    pub fn new(c: Complex64, domain: &DomainSpec) -> Result<Self> {
        let distance = domain.distance_to(c);
        if distance <= POLE_CLEARANCE {
            return Err(Error::PoleInDomain(c));
        }
        Ok(WitnessFc { c, distance })
    }

    /// `||F_c^(n)||_inf = n! / d^(n+1)` for `d = dist(c, X)`.
    pub fn supnorm_deriv(n: usize, d: f64) -> Result<f64> {
        Ok(Self::log_supnorm_deriv(n, d)?.exp())
    }

    pub fn log_supnorm_deriv(n: usize, d: f64) -> Result<f64> {
        if d.is_nan() || d <= 0.0 {
            return Err(Error::NonPositiveDistance(d));
        }
        Ok(log_factorial(n) - (n + 1) as f64 * d.ln())
    }

    pub fn own_supnorm_deriv(&self, n: usize) -> f64 {
        Self::supnorm_deriv(n, self.distance).expect("distance checked at construction")
    }

    /// Truncated `||F_c||_D`.
    pub fn d_norm(&self, w: &WeightSequence, truncation: usize) -> Result<f64> {
        let logs: Vec<f64> = (0..=truncation)
            .map(|n| Ok(Self::log_supnorm_deriv(n, self.distance)? - w.log_m(n)?))
            .collect::<Result<_>>()?;
        Ok(log_sum_exp(logs).exp())
    }
}

impl Holomorphic for WitnessFc {
    fn jet_at(&self, z: Complex64, order: usize) -> Result<Jet<Complex64>> {
        let h = z - self.c;
        if h.norm() == 0.0 {
            return Err(Error::Evaluation(z));
        }
        let inv = h.inv();
        let mut deriv = Vec::with_capacity(order + 1);
        let mut term = inv;
        for n in 0..=order {
            if n > 0 {
                term = -term * inv * n as f64;
            }
            deriv.push(term);
        }
        Jet::new(z, deriv)
    }
}

/// A constant function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constant(pub Complex64);

impl Holomorphic for Constant {
    fn jet_at(&self, z: Complex64, order: usize) -> Result<Jet<Complex64>> {
        Ok(Jet::constant(z, self.0, order))
    }
}
