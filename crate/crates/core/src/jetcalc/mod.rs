//! Derivative jets and their composition.
//!
//! A [`Jet`] stores `f(a), f'(a), ..., f^(N)(a)` (derivatives, not Taylor
//! coefficients). Composition uses the partial Bell polynomial recurrence,
//! and an explicit sum over partition profiles is kept as an independent
//! implementation of the same formula.

mod partitions;
mod witness;

pub use partitions::{
    enumerate_partition_terms, exponential_formula_check, partial_bell_table, PartitionTerm, DEFAULT_PARTITION_CAP,
    PARTITION_ORDER_LIMIT,
};
pub use witness::{Constant, WitnessFc, WitnessFr};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{binomial, Scalar};
use crate::poly::Poly;
use crate::tol::BASE_POINT_TOLERANCE;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Jet<T> {
    pub base: T,
    pub deriv: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    pub fn new(base: T, deriv: Vec<T>) -> Result<Self> {
        if deriv.is_empty() {
            return Err(Error::EmptyJet);
        }
        Ok(Jet { base, deriv })
    }

    /// The jet of `z -> z` at `a`.
    pub fn identity(base: T, order: usize) -> Self {
        let mut deriv = vec![T::zero(); order + 1];
        deriv[0] = base.clone();
        if order >= 1 {
            deriv[1] = T::one();
        }
        Jet { base, deriv }
    }

    pub fn constant(base: T, value: T, order: usize) -> Self {
        let mut deriv = vec![T::zero(); order + 1];
        deriv[0] = value;
        Jet { base, deriv }
    }

    pub fn order(&self) -> usize {
        self.deriv.len() - 1
    }

    pub fn value(&self) -> T {
        self.deriv[0].clone()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Jet {
            base: self.base.clone(),
            deriv: self.deriv[..=order.min(self.order())].to_vec(),
        }
    }

    /// Taylor coefficients `f^(k)(a) / k!`.
    pub fn to_taylor(&self) -> Vec<T> {
        let mut fact = T::one();
        self.deriv
            .iter()
            .enumerate()
            .map(|(k, d)| {
                if k > 0 {
                    fact = fact.clone() * T::from_count(k as u128);
                }
                d.clone() / fact.clone()
            })
            .collect()
    }

    pub fn from_taylor(base: T, coeffs: &[T]) -> Result<Self> {
        let mut fact = T::one();
        let deriv = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact = fact.clone() * T::from_count(k as u128);
                }
                c.clone() * fact.clone()
            })
            .collect();
        Jet::new(base, deriv)
    }

    /// The jet of a polynomial at `a`.
    pub fn of_poly(p: &Poly<T>, base: T, order: usize) -> Self {
        let mut coeffs = p.taylor_shift(&base);
        coeffs.resize(order + 1, T::zero());
        Jet::from_taylor(base, &coeffs).expect("order + 1 coefficients")
    }

    fn check_composable(outer: &Jet<T>, inner: &Jet<T>) -> Result<()> {
        let (o, i) = (outer.base.to_c64(), inner.value().to_c64());
        if (o - i).norm() > BASE_POINT_TOLERANCE {
            return Err(Error::BaseMismatch { outer: o, inner: i });
        }
        if outer.order() < inner.order() {
            return Err(Error::JetOrder {
                needed: inner.order(),
                available: outer.order(),
            });
        }
        Ok(())
    }
}

/// Jet of `F o phi` at `phi.base`, to the order of `phi`.
///
/// `outer` must be based at `phi(a)` and have at least the order of `inner`.
pub fn compose_jets<T: Scalar>(outer: &Jet<T>, inner: &Jet<T>) -> Result<Jet<T>> {
    Jet::check_composable(outer, inner)?;
    let n_max = inner.order();
    let bell = partial_bell_table(&inner.deriv[1..], n_max);
    let mut deriv = Vec::with_capacity(n_max + 1);
    deriv.push(outer.deriv[0].clone());
    for row in bell.iter().skip(1) {
        let mut acc = T::zero();
        for (k, b) in row.iter().enumerate().skip(1) {
            if !b.is_zero() {
                acc = acc + outer.deriv[k].clone() * b.clone();
            }
        }
        deriv.push(acc);
    }
    Ok(Jet {
        base: inner.base.clone(),
        deriv,
    })
}

/// Same as [`compose_jets`] but summing explicitly over partition profiles.
/// Orders above `cap` are refused.
pub fn compose_jets_by_partitions<T: Scalar>(outer: &Jet<T>, inner: &Jet<T>, cap: usize) -> Result<Jet<T>> {
    Jet::check_composable(outer, inner)?;
    let n_max = inner.order();
    let cap = cap.min(PARTITION_ORDER_LIMIT);
    if n_max > cap {
        return Err(Error::OrderCap { order: n_max, cap });
    }
    let x = &inner.deriv[1..];
    let mut deriv = Vec::with_capacity(n_max + 1);
    deriv.push(outer.deriv[0].clone());
    for n in 1..=n_max {
        let mut acc = T::zero();
        for m in 1..=n {
            let inner_sum = enumerate_partition_terms(n, m)?
                .iter()
                .fold(T::zero(), |s, t| s + t.monomial(x));
            acc = acc + outer.deriv[m].clone() * inner_sum;
        }
        deriv.push(acc);
    }
    Ok(Jet {
        base: inner.base.clone(),
        deriv,
    })
}

/// Taylor coefficients of `num / den` up to `order`, `den[0] != 0`.
pub fn series_div<T: Scalar>(num: &[T], den: &[T], order: usize) -> Vec<T> {
    let mut q: Vec<T> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = num.get(k).cloned().unwrap_or_else(T::zero);
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc = acc - den[j].clone() * q[k - j].clone();
        }
        q.push(acc / den[0].clone());
    }
    q
}

/// Product of two jets at the same base (Leibniz rule).
pub fn multiply_jets<T: Scalar>(a: &Jet<T>, b: &Jet<T>) -> Jet<T> {
    let order = a.order().min(b.order());
    let deriv = (0..=order)
        .map(|n| {
            (0..=n).fold(T::zero(), |acc, k| {
                acc + T::from_count(binomial(n, k)) * a.deriv[k].clone() * b.deriv[n - k].clone()
            })
        })
        .collect();
    Jet {
        base: a.base.clone(),
        deriv,
    }
}

/// A function that can report its derivatives at any point of the domain.
pub trait Holomorphic: Sync {
    fn jet_at(&self, z: Complex64, order: usize) -> Result<Jet<Complex64>>;

    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.jet_at(z, 0)?.deriv[0])
    }

    fn derivative(&self, z: Complex64, k: usize) -> Result<Complex64> {
        Ok(self.jet_at(z, k)?.deriv[k])
    }
}

impl Holomorphic for Poly<Complex64> {
    fn jet_at(&self, z: Complex64, order: usize) -> Result<Jet<Complex64>> {
        Ok(Jet::of_poly(self, z, order))
    }

    fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(&z))
    }
}
