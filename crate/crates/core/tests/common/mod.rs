//! Maps shared by the integration tests.
#![allow(dead_code)]

use dxm_core::numeric::{exact_ratio, ExactComplex};
use dxm_core::poly::Poly;
use dxm_core::{DomainSpec, RationalMap};
use num_bigint::BigInt;
use num_rational::BigRational;

/// `p/q + i r/s`.
pub fn gq(re: (i64, i64), im: (i64, i64)) -> ExactComplex {
    ExactComplex::new(
        BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
        BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
    )
}

pub fn real_poly(c: &[(i64, i64)]) -> Poly<ExactComplex> {
    Poly::new(c.iter().map(|&(n, d)| exact_ratio(n, d)).collect())
}

pub fn disc_map(num: Poly<ExactComplex>, den: Poly<ExactComplex>) -> RationalMap {
    RationalMap::from_exact(num, den, DomainSpec::disc()).unwrap()
}

pub fn one() -> Poly<ExactComplex> {
    real_poly(&[(1, 1)])
}

/// `z / 2`.
pub fn half() -> RationalMap {
    disc_map(real_poly(&[(0, 1), (1, 2)]), one())
}

/// `(0.6 + 0.8i) z`.
pub fn rotation() -> RationalMap {
    disc_map(Poly::new(vec![gq((0, 1), (0, 1)), gq((3, 5), (4, 5))]), one())
}

/// `(z - 1/2) / (1 - z/2)`.
pub fn mobius_half() -> RationalMap {
    disc_map(real_poly(&[(-1, 2), (1, 1)]), real_poly(&[(1, 1), (-1, 2)]))
}

pub fn square() -> RationalMap {
    disc_map(real_poly(&[(0, 1), (0, 1), (1, 1)]), one())
}

/// `(1 - z^3) / 2`.
pub fn cubic() -> RationalMap {
    disc_map(real_poly(&[(1, 2), (0, 1), (0, 1), (-1, 2)]), one())
}

/// `(2z - 1) / (z - 2)`.
pub fn involution() -> RationalMap {
    disc_map(real_poly(&[(-1, 1), (2, 1)]), real_poly(&[(-2, 1), (1, 1)]))
}

/// `(z + ((1 + i) z - 1) / (z + i - 1)) / 2 = (z + i)^2 / (2 (z + i - 1))`.
pub fn unresolved() -> RationalMap {
    let num = Poly::new(vec![gq((-1, 1), (0, 1)), gq((0, 1), (2, 1)), gq((1, 1), (0, 1))]);
    let den = Poly::new(vec![gq((-2, 1), (2, 1)), gq((2, 1), (0, 1))]);
    disc_map(num, den)
}
