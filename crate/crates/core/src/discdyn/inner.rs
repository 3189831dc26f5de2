//! Inner maps of the disc, which for rational maps are the finite Blaschke
//! products.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::RationalMap;
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::Zero;

use crate::numeric::ExactComplex;
use crate::poly::Poly;
use crate::roots::distinct_roots;
use crate::tol::INNER_TOLERANCE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlaschkeKind {
    Constant,
    Rotation,
    Mobius,
    Higher,
}

/// `phi(z) = e^{i theta} prod (z - a_k) / (1 - conj(a_k) z)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlaschkeData {
    pub theta: f64,
    /// Zeros in the open disc, repeated by multiplicity.
    pub zeros: Vec<Complex64>,
    /// Every pole sits at `1 / conj(a)` for a nonzero zero `a`.
    pub symmetric: bool,
    pub kind: BlaschkeKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnerCheck {
    pub inner: bool,
    /// Largest `||phi| - 1|` over the boundary samples.
    pub max_deviation: f64,
    /// The identity `|num|^2 = |den|^2` on the circle was checked exactly.
    pub exact: bool,
    pub blaschke: Option<BlaschkeData>,
}

impl RationalMap {
    /// Whether `|phi| = 1` on the unit circle.
    ///
    /// Maps with exact coefficients are tested by the polynomial identity
    /// behind `|num|^2 - |den|^2 = 0`; other maps by boundary sampling.
    pub fn is_inner(&self) -> Result<InnerCheck> {
        if !self.domain.is_disc() {
            return Ok(InnerCheck {
                inner: false,
                max_deviation: f64::NAN,
                exact: false,
                blaschke: None,
            });
        }
        let samples = self.domain.boundary_points();
        let mut max_deviation = 0.0f64;
        for z in &samples {
            max_deviation = max_deviation.max((self.eval(*z)?.norm() - 1.0).abs());
        }
        let (inner, exact) = match self.exact() {
            Some((n, d)) => (contact_polynomial(n, d).is_zero(), true),
            None => (max_deviation <= INNER_TOLERANCE, false),
        };
        let blaschke = if inner { Some(self.blaschke_data()?) } else { None };
        Ok(InnerCheck {
            inner,
            max_deviation,
            exact,
            blaschke,
        })
    }

    fn blaschke_data(&self) -> Result<BlaschkeData> {
        let zeros: Vec<Complex64> = if self.num.degree() == 0 {
            Vec::new()
        } else {
            distinct_roots(&self.num, 1e-6)?
                .into_iter()
                .flat_map(|c| std::iter::repeat_n(c.center, c.multiplicity))
                .collect()
        };
        let poles = self.poles()?;
        let reflected: Vec<Complex64> = zeros
            .iter()
            .filter(|a| a.norm() > 1e-12)
            .map(|a| a.conj().inv())
            .collect();
        let symmetric = zeros.iter().all(|a| a.norm() < 1.0)
            && poles.len() == reflected.len()
            && poles
                .iter()
                .all(|p| reflected.iter().any(|r| (p - r).norm() <= 1e-6 * (1.0 + r.norm())));
        let one = Complex64::new(1.0, 0.0);
        let b0: Complex64 = zeros.iter().map(|a| (one - a) / (one - a.conj())).product();
        let theta = (self.eval(one)? / b0).arg();
        let kind = match zeros.as_slice() {
            [] => BlaschkeKind::Constant,
            [a] if a.norm() <= 1e-12 => BlaschkeKind::Rotation,
            [_] => BlaschkeKind::Mobius,
            _ => BlaschkeKind::Higher,
        };
        Ok(BlaschkeData {
            theta,
            zeros,
            symmetric,
            kind,
        })
    }

    /// `(1 / 2 pi i) * integral of phi'/phi` over the unit circle by the
    /// trapezoidal rule, i.e. zeros minus poles inside the disc.
    pub fn argument_principle_count(&self, nodes: usize) -> Result<f64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..nodes {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / nodes as f64);
            let (v, d) = self.eval_with_derivative(z)?;
            if v.norm() < 1e-300 {
                return Err(Error::Evaluation(z));
            }
            acc += d / v * z;
        }
        Ok((acc / nodes as f64).re)
    }
}

/// `w^d (num(w) num*(w) - den(w) den*(w))` with `p*(w) = sum conj(p_k) w^-k`
/// and `d = max(deg num, deg den)`. On the unit circle it equals
/// `|num|^2 - |den|^2`, so its roots there are the points where `|phi| = 1`.
pub(crate) fn contact_polynomial(num: &Poly<ExactComplex>, den: &Poly<ExactComplex>) -> Poly<ExactComplex> {
    let d = num.degree().max(den.degree());
    let reflect = |p: &Poly<ExactComplex>| {
        let mut c = vec![ExactComplex::new(BigRational::zero(), BigRational::zero()); d + 1];
        for (k, pk) in p.coeffs().iter().enumerate() {
            c[d - k] = pk.conj();
        }
        Poly::new(c)
    };
    &(num * &reflect(num)) - &(den * &reflect(den))
}

/// Floating twin of [`contact_polynomial`].
pub(crate) fn contact_polynomial_c64(num: &Poly<Complex64>, den: &Poly<Complex64>) -> Poly<Complex64> {
    let d = num.degree().max(den.degree());
    let reflect = |p: &Poly<Complex64>| {
        let mut c = vec![Complex64::new(0.0, 0.0); d + 1];
        for (k, pk) in p.coeffs().iter().enumerate() {
            c[d - k] = pk.conj();
        }
        Poly::new(c)
    };
    &(num * &reflect(num)) - &(den * &reflect(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;
    use crate::numeric::{exact_int, exact_ratio};

    fn ex(v: &[(i64, i64)]) -> Poly<ExactComplex> {
        Poly::new(v.iter().map(|&(n, d)| exact_ratio(n, d)).collect())
    }

    #[test]
    fn involution_is_mobius() {
        let m = RationalMap::from_exact(ex(&[(-1, 1), (2, 1)]), ex(&[(-2, 1), (1, 1)]), DomainSpec::disc()).unwrap();
        let check = m.is_inner().unwrap();
        assert!(check.inner && check.exact);
        let b = check.blaschke.unwrap();
        assert_eq!(b.kind, BlaschkeKind::Mobius);
        assert!(b.symmetric);
        assert!((b.zeros[0] - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        let count = m.argument_principle_count(4096).unwrap();
        assert!((count - 1.0).abs() < 1e-9);
    }

    #[test]
    fn square_is_higher_blaschke() {
        let sq = RationalMap::polynomial(ex(&[(0, 1), (0, 1), (1, 1)]), DomainSpec::disc()).unwrap();
        let b = sq.is_inner().unwrap().blaschke.unwrap();
        assert_eq!(b.kind, BlaschkeKind::Higher);
        assert!(b.theta.abs() < 1e-12);
    }

    #[test]
    fn cubic_is_not_inner() {
        let m = RationalMap::polynomial(ex(&[(1, 2), (0, 1), (0, 1), (-1, 2)]), DomainSpec::disc()).unwrap();
        let check = m.is_inner().unwrap();
        assert!(!check.inner);
        assert!(check.max_deviation >= 1.0 - 1e-12);
    }

    #[test]
    fn float_rotation_is_inner_by_sampling() {
        let rot = RationalMap::from_coeffs(
            &[Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, 1.0)],
            &[Complex64::new(1.0, 0.0)],
            DomainSpec::disc(),
        )
        .unwrap();
        let check = rot.is_inner().unwrap();
        assert!(check.inner && !check.exact);
        let b = check.blaschke.unwrap();
        assert_eq!(b.kind, BlaschkeKind::Rotation);
        assert!((b.theta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unimodular_constant() {
        let c = RationalMap::polynomial(Poly::constant(exact_int(-1)), DomainSpec::disc()).unwrap();
        assert_eq!(c.is_inner().unwrap().blaschke.unwrap().kind, BlaschkeKind::Constant);
    }
}
