//! Rational self-maps of the interval or the closed disc.
//!
//! A [`RationalMap`] keeps floating coefficients for evaluation and, when the
//! map was given with Gaussian-rational coefficients, an exact copy used for
//! gcd reduction, iterates and identity tests.

mod dynamics;
mod inner;

pub use dynamics::{
    Classification, ClassificationCase, DenjoyWolff, DenjoyWolffMethod, FixedPointInfo, Location, PeriodicOrbit,
};
pub use inner::{BlaschkeData, BlaschkeKind, InnerCheck};

use num_complex::Complex64;
use num_traits::Zero;

use crate::domain::{DomainSpec, SupNorm};
use crate::error::{Error, Result};
use crate::jetcalc::{compose_jets, series_div, Holomorphic, Jet};
use crate::numeric::{exact_int, ExactComplex, Scalar};
use crate::poly::Poly;
use crate::roots::polynomial_roots;
use crate::tol::{BASE_POINT_TOLERANCE, POLE_CLEARANCE, SELF_MAP_TOLERANCE};

/// Default cap on the degree of explicitly computed iterates.
pub const DEFAULT_DEGREE_CAP: usize = 512;

#[derive(Clone, Debug)]
pub struct RationalMap {
    num: Poly<Complex64>,
    den: Poly<Complex64>,
    exact: Option<(Poly<ExactComplex>, Poly<ExactComplex>)>,
    domain: DomainSpec,
}

impl PartialEq for RationalMap {
    fn eq(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b && self.domain.kind == other.domain.kind,
            _ => self.num == other.num && self.den == other.den && self.domain.kind == other.domain.kind,
        }
    }
}

impl RationalMap {
    /// Validated map from Gaussian-rational coefficients. Common factors are
    /// removed and the denominator is scaled to `den(0) = 1` when possible.
    pub fn from_exact(num: Poly<ExactComplex>, den: Poly<ExactComplex>, domain: DomainSpec) -> Result<Self> {
        let map = Self::from_exact_unchecked(num, den, domain)?;
        map.validate()?;
        Ok(map)
    }

    /// Validated map from floating coefficients (ascending degree).
    pub fn from_coeffs(num: &[Complex64], den: &[Complex64], domain: DomainSpec) -> Result<Self> {
        let map = Self::from_float_unchecked(Poly::new(num.to_vec()), Poly::new(den.to_vec()), domain)?;
        map.validate()?;
        Ok(map)
    }

    /// A polynomial map with exact coefficients.
    pub fn polynomial(num: Poly<ExactComplex>, domain: DomainSpec) -> Result<Self> {
        Self::from_exact(num, Poly::constant(exact_int(1)), domain)
    }

    fn from_exact_unchecked(num: Poly<ExactComplex>, den: Poly<ExactComplex>, domain: DomainSpec) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (mut num, mut den) = if num.is_zero() {
            (num, Poly::constant(exact_int(1)))
        } else {
            let g = num.gcd(&den);
            if g.degree() > 0 {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            } else {
                (num, den)
            }
        };
        let scale = normalizer(&den);
        num = num.map(|c| c.clone() / scale.clone());
        den = den.map(|c| c.clone() / scale.clone());
        Ok(RationalMap {
            num: num.to_c64(),
            den: den.to_c64(),
            exact: Some((num, den)),
            domain,
        })
    }

    fn from_float_unchecked(num: Poly<Complex64>, den: Poly<Complex64>, domain: DomainSpec) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let scale = normalizer(&den);
        Ok(RationalMap {
            num: num.map(|c| c / scale),
            den: den.map(|c| c / scale),
            exact: None,
            domain,
        })
    }

    /// Poles off the domain and `phi(X)` inside `X`, both up to tolerance.
    pub fn validate(&self) -> Result<()> {
        for p in self.poles()? {
            if self.domain.distance_to(p) <= POLE_CLEARANCE {
                return Err(Error::PoleInDomain(p));
            }
        }
        let excess = self
            .domain
            .sup_norm(|z| Ok(self.domain.distance_to(self.eval(z)?)), true)?;
        if excess.value > SELF_MAP_TOLERANCE {
            return Err(Error::NotSelfMap {
                value: self.eval(excess.argmax)?,
                at: excess.argmax,
            });
        }
        Ok(())
    }

    pub fn num(&self) -> &Poly<Complex64> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Complex64> {
        &self.den
    }

    pub fn exact(&self) -> Option<(&Poly<ExactComplex>, &Poly<ExactComplex>)> {
        self.exact.as_ref().map(|(n, d)| (n, d))
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// Same map with different sampling parameters on the same set.
    pub fn with_domain(&self, domain: DomainSpec) -> Result<Self> {
        if domain.kind != self.domain.kind {
            return Err(Error::Unsupported(
                "changing the ambient set requires re-validation".into(),
            ));
        }
        let mut m = self.clone();
        m.domain = domain;
        Ok(m)
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        if self.den.degree() == 0 {
            return Ok(Vec::new());
        }
        polynomial_roots(&self.den)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let d = self.den.eval(&z);
        if d.norm() == 0.0 {
            return Err(Error::Evaluation(z));
        }
        Ok(self.num.eval(&z) / d)
    }

    /// `(phi(z), phi'(z))`.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (p, dp) = self.num.eval_with_derivative(z);
        let (q, dq) = self.den.eval_with_derivative(z);
        if q.norm() == 0.0 {
            return Err(Error::Evaluation(z));
        }
        Ok((p / q, (dp * q - p * dq) / (q * q)))
    }

    pub fn jet(&self, z: Complex64, order: usize) -> Result<Jet<Complex64>> {
        rational_jet(&self.num, &self.den, z, order)
    }

    /// Exact jet at a Gaussian-rational point, when exact coefficients exist.
    pub fn exact_jet(&self, z: &ExactComplex, order: usize) -> Option<Result<Jet<ExactComplex>>> {
        let (n, d) = self.exact.as_ref()?;
        Some(rational_jet(n, d, z.clone(), order))
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() == 0 && self.den.degree() == 0
    }

    /// `z -> c z` with `|c| = 1`: exactly for rational coefficients, within
    /// `1e-12` otherwise.
    pub fn is_rotation(&self) -> bool {
        if let Some((n, d)) = &self.exact {
            return d.degree() == 0 && n.degree() == 1 && n.coeff(0).is_zero() && {
                let c = n.coeff(1) / d.coeff(0);
                c.norm_sqr() == num_rational::BigRational::from_integer(1.into())
            };
        }
        self.den.degree() == 0
            && self.num.degree() == 1
            && self.num.coeff(0).norm() <= BASE_POINT_TOLERANCE
            && ((self.num.coeff(1) / self.den.coeff(0)).norm() - 1.0).abs() <= BASE_POINT_TOLERANCE
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        self.compose_capped(inner, usize::MAX)
    }

    fn compose_capped(&self, inner: &RationalMap, cap: usize) -> Result<RationalMap> {
        let degree = self.degree() * inner.degree().max(1);
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        match (&self.exact, &inner.exact) {
            (Some((p, q)), Some((a, b))) => {
                let (n, d) = compose_rational(p, q, a, b);
                Self::from_exact_parts(n, d, inner.domain)
            }
            _ => {
                let (n, d) = compose_rational(&self.num, &self.den, &inner.num, &inner.den);
                Self::from_float_unchecked(n, d, inner.domain)
            }
        }
    }

    /// Normalises without gcd reduction; used for compositions, which are
    /// already reduced when both factors are.
    fn from_exact_parts(num: Poly<ExactComplex>, den: Poly<ExactComplex>, domain: DomainSpec) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let scale = normalizer(&den);
        let num = num.map(|c| c.clone() / scale.clone());
        let den = den.map(|c| c.clone() / scale.clone());
        Ok(RationalMap {
            num: num.to_c64(),
            den: den.to_c64(),
            exact: Some((num, den)),
            domain,
        })
    }

    /// `phi_n`, the `n`-fold iterate, with coefficients computed explicitly.
    pub fn iterate(&self, n: usize) -> Result<RationalMap> {
        self.iterate_capped(n, DEFAULT_DEGREE_CAP)
    }

    pub fn iterate_capped(&self, n: usize, cap: usize) -> Result<RationalMap> {
        if n == 0 {
            return Err(Error::Unsupported("iterates start at n = 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose_capped(&acc, cap)?;
        }
        Ok(acc)
    }

    /// `phi_n` evaluated by repetition, with no degree limit.
    pub fn iterate_fn(&self, n: usize) -> IterateMap<'_> {
        IterateMap { map: self, n }
    }

    /// `||phi^(k)||_inf` over the domain, estimated by sampling.
    pub fn derivative_sup(&self, k: usize) -> Result<SupNorm> {
        self.domain.sup_norm(|z| Ok(self.jet(z, k)?.deriv[k].norm()), true)
    }

    /// `||phi||_inf`.
    pub fn sup_abs(&self) -> Result<SupNorm> {
        self.domain.sup_norm(|z| Ok(self.eval(z)?.norm()), true)
    }

    /// Minimal distance from a pole to the domain, infinite for polynomials.
    pub fn pole_distance(&self) -> Result<f64> {
        Ok(self
            .poles()?
            .into_iter()
            .map(|p| self.domain.distance_to(p))
            .fold(f64::INFINITY, f64::min))
    }
}

impl Holomorphic for RationalMap {
    fn jet_at(&self, z: Complex64, order: usize) -> Result<Jet<Complex64>> {
        self.jet(z, order)
    }

    fn value(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z)
    }
}

/// `phi_n` as a function object, evaluated by `n` applications of `phi`.
#[derive(Clone, Copy, Debug)]
pub struct IterateMap<'a> {
    map: &'a RationalMap,
    n: usize,
}

impl IterateMap<'_> {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        (0..self.n).try_fold(z, |w, _| self.map.eval(w))
    }

    /// `(phi_n(z), phi_n'(z))` by the chain rule along the orbit.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let mut w = z;
        let mut d = Complex64::new(1.0, 0.0);
        for _ in 0..self.n {
            let (v, dv) = self.map.eval_with_derivative(w)?;
            d *= dv;
            w = v;
        }
        Ok((w, d))
    }
}

impl Holomorphic for IterateMap<'_> {
    fn jet_at(&self, z: Complex64, order: usize) -> Result<Jet<Complex64>> {
        let mut jet = self.map.jet(z, order)?;
        for _ in 1..self.n {
            let outer = self.map.jet(jet.value(), order)?;
            jet = compose_jets(&outer, &jet)?;
        }
        Ok(jet)
    }

    fn value(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z)
    }
}

fn normalizer<T: Scalar>(den: &Poly<T>) -> T {
    let c0 = den.coeff(0);
    if c0.is_zero() {
        den.leading()
    } else {
        c0
    }
}

fn rational_jet<T: Scalar>(num: &Poly<T>, den: &Poly<T>, z: T, order: usize) -> Result<Jet<T>> {
    let q = den.taylor_shift(&z);
    if q.first().is_none_or(|c| c.is_zero()) {
        return Err(Error::Evaluation(z.to_c64()));
    }
    let p = num.taylor_shift(&z);
    let coeffs = series_div(&p, &q, order);
    Jet::from_taylor(z, &coeffs)
}

/// Numerator and denominator of `(P/Q) o (a/b)`:
/// `sum P_k a^k b^(d-k) / sum Q_k a^k b^(d-k)` with `d = max(deg P, deg Q)`.
fn compose_rational<T: Scalar>(p: &Poly<T>, q: &Poly<T>, a: &Poly<T>, b: &Poly<T>) -> (Poly<T>, Poly<T>) {
    let d = p.degree().max(q.degree());
    let mut a_pow = vec![Poly::constant(T::one())];
    let mut b_pow = vec![Poly::constant(T::one())];
    for k in 1..=d {
        a_pow.push(&a_pow[k - 1] * a);
        b_pow.push(&b_pow[k - 1] * b);
    }
    let mut num = Poly::zero();
    let mut den = Poly::zero();
    for k in 0..=d {
        let basis = &a_pow[k] * &b_pow[d - k];
        num = &num + &basis.scale(&p.coeff(k));
        den = &den + &basis.scale(&q.coeff(k));
    }
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::exact_ratio;

    fn ex(v: &[(i64, i64)]) -> Poly<ExactComplex> {
        Poly::new(v.iter().map(|&(n, d)| exact_ratio(n, d)).collect())
    }

    fn cubic() -> RationalMap {
        RationalMap::polynomial(ex(&[(1, 2), (0, 1), (0, 1), (-1, 2)]), DomainSpec::disc()).unwrap()
    }

    #[test]
    fn second_iterate_of_cubic() {
        let phi2 = cubic().iterate(2).unwrap();
        let want = ex(&[
            (7, 16),
            (0, 1),
            (0, 1),
            (3, 16),
            (0, 1),
            (0, 1),
            (-3, 16),
            (0, 1),
            (0, 1),
            (1, 16),
        ]);
        assert_eq!(phi2.exact().unwrap().0, &want);
        assert_eq!(phi2.exact().unwrap().1, &ex(&[(1, 1)]));
    }

    #[test]
    fn first_iterate_is_the_map() {
        let phi = cubic();
        assert_eq!(phi.iterate(1).unwrap(), phi);
    }

    #[test]
    fn linear_iterate() {
        let half = RationalMap::polynomial(ex(&[(0, 1), (1, 2)]), DomainSpec::disc()).unwrap();
        let third = half.iterate(3).unwrap();
        assert_eq!(third.exact().unwrap().0, &ex(&[(0, 1), (1, 8)]));
    }

    #[test]
    fn validation() {
        let disc = DomainSpec::disc();
        let mobius = RationalMap::from_exact(ex(&[(-1, 1), (2, 1)]), ex(&[(-2, 1), (1, 1)]), disc);
        assert!(mobius.is_ok());
        let doubling = RationalMap::polynomial(ex(&[(0, 1), (2, 1)]), disc);
        assert!(matches!(doubling, Err(Error::NotSelfMap { .. })));
        let pole_inside = RationalMap::from_exact(ex(&[(1, 4)]), ex(&[(-1, 2), (1, 1)]), disc);
        assert!(matches!(pole_inside, Err(Error::PoleInDomain(_))));
        assert_eq!(
            RationalMap::from_exact(ex(&[(1, 1)]), Poly::zero(), disc).unwrap_err(),
            Error::ZeroDenominator
        );
    }

    #[test]
    fn common_factor_is_removed() {
        // z (z - 3) / (2 (z - 3)) = z / 2
        let num = &ex(&[(0, 1), (1, 1)]) * &ex(&[(-3, 1), (1, 1)]);
        let den = &ex(&[(2, 1)]) * &ex(&[(-3, 1), (1, 1)]);
        let m = RationalMap::from_exact(num, den, DomainSpec::disc()).unwrap();
        assert_eq!(m.exact().unwrap().0, &ex(&[(0, 1), (1, 2)]));
        assert_eq!(m.den().degree(), 0);
    }

    #[test]
    fn rotation_detection() {
        let rot = RationalMap::polynomial(
            Poly::new(vec![
                exact_int(0),
                ExactComplex::new(exact_ratio(3, 5).re, exact_ratio(4, 5).re),
            ]),
            DomainSpec::disc(),
        )
        .unwrap();
        assert!(rot.is_rotation());
        assert!(!cubic().is_rotation());
        let float_rot = RationalMap::from_coeffs(
            &[
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
            ],
            &[Complex64::new(1.0, 0.0)],
            DomainSpec::disc(),
        )
        .unwrap();
        assert!(float_rot.is_rotation());
    }

    #[test]
    fn jets_agree_with_iterate_function() {
        let phi = cubic();
        let z = Complex64::new(0.3, -0.2);
        let explicit = phi.iterate(2).unwrap().jet(z, 5).unwrap();
        let repeated = phi.iterate_fn(2).jet_at(z, 5).unwrap();
        for k in 0..=5 {
            assert!((explicit.deriv[k] - repeated.deriv[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn interval_self_map_checks_reality() {
        let interval = DomainSpec::interval();
        let ok = RationalMap::polynomial(ex(&[(0, 1), (1, 1), (-1, 1)]), interval);
        assert!(ok.is_ok());
        let shifted = RationalMap::polynomial(ex(&[(1, 2), (1, 1)]), interval);
        assert!(matches!(shifted, Err(Error::NotSelfMap { .. })));
    }
}
