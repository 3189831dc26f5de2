//! Scalar backends and small numerical helpers.

use std::fmt::Debug;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};

use crate::tol::BASE_POINT_TOLERANCE;

/// Gaussian rationals, the exact backend.
pub type ExactComplex = Complex<BigRational>;

/// Arithmetic shared by the floating and exact backends.
///
/// Every exact operation in the crate has a floating twin obtained by
/// instantiating the same generic code with [`Complex64`].
pub trait Scalar: Clone + Num + FromPrimitive + Debug + Send + Sync {
    /// Equality up to the backend's notion of closeness: exact for rationals,
    /// absolute `1e-12` for floats.
    fn near(&self, other: &Self) -> bool;
    fn from_count(v: u128) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl Scalar for Complex64 {
    fn near(&self, other: &Self) -> bool {
        (self - other).norm() <= BASE_POINT_TOLERANCE
    }

    fn from_count(v: u128) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl Scalar for f64 {
    fn near(&self, other: &Self) -> bool {
        (self - other).abs() <= BASE_POINT_TOLERANCE
    }

    fn from_count(v: u128) -> Self {
        v as f64
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Scalar for ExactComplex {
    fn near(&self, other: &Self) -> bool {
        self == other
    }

    fn from_count(v: u128) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 gives up when numerator or denominator overflow f64.
        let (n, d) = (q.numer(), q.denom());
        let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
        let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact Gaussian rational with the same value as a pair of doubles.
pub fn exact_from_c64(z: Complex64) -> Option<ExactComplex> {
    Some(Complex::new(
        BigRational::from_float(z.re)?,
        BigRational::from_float(z.im)?,
    ))
}

pub fn exact_int(v: i64) -> ExactComplex {
    Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
}

pub fn exact_ratio(num: i64, den: i64) -> ExactComplex {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

const LOG_FACTORIAL_TABLE: usize = 4096;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LOG_FACTORIAL_TABLE);
        t.push(0.0);
        let mut acc = 0.0f64;
        for k in 1..LOG_FACTORIAL_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln n!`, summed term by term so that small indices are exact to rounding.
pub fn log_factorial(n: usize) -> f64 {
    let table = log_factorial_table();
    if n < table.len() {
        return table[n];
    }
    let mut acc = table[table.len() - 1];
    for k in table.len()..=n {
        acc += (k as f64).ln();
    }
    acc
}

pub fn log_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

/// Binomial coefficient, exact while it fits in `u128`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `ln(sum_i exp(x_i))`, ignoring `-inf` entries.
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().filter(|x| *x > f64::NEG_INFINITY).collect();
    let Some(max) = xs.iter().cloned().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
///
/// Returns the best abscissa seen and its value.
pub fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Unit complex number `e^{i theta}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_factorial_small_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert!((log_factorial(5) - 120f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn binomial_row() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(40, 20), 137_846_528_820);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 80);
        assert!((x - 0.3).abs() < 1e-7);
        assert!(fx.abs() < 1e-14);
    }

    #[test]
    fn log_sum_exp_handles_neg_infinity() {
        assert_eq!(log_sum_exp([f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert!((log_sum_exp([0.0, 0.0]) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exact_round_trip_of_doubles() {
        let z = Complex64::new(0.1, -2.5e-7);
        assert_eq!(exact_from_c64(z).unwrap().to_c64(), z);
    }
}
