//! Block-size profiles of set partitions and the partial Bell polynomials
//! built from them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{binomial, Scalar};

/// Largest `n` whose partition coefficients are computed; `30!` still fits in
/// a `u128`.
pub const PARTITION_ORDER_LIMIT: usize = 30;

/// Default order cap for explicit partition sums.
pub const DEFAULT_PARTITION_CAP: usize = 24;

/// One profile `(a_1, ..., a_n)` with `sum a_i = m`, `sum i a_i = n`, and the
/// number of set partitions of `{1..n}` having that profile,
/// `n! / (prod a_i! * prod i!^a_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionTerm {
    pub a: Vec<u32>,
    pub m: usize,
    pub n: usize,
    pub coeff: u128,
}

impl PartitionTerm {
    /// `coeff * prod x_i^a_i`, with `x[0]` standing for `x_1`.
    pub fn monomial<T: Scalar>(&self, x: &[T]) -> T {
        let mut acc = T::from_count(self.coeff);
        for (i, &ai) in self.a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let xi = x.get(i).cloned().unwrap_or_else(T::zero);
            for _ in 0..ai {
                acc = acc * xi.clone();
            }
        }
        acc
    }
}

type Table = HashMap<(usize, usize), Arc<Vec<PartitionTerm>>>;

fn cache() -> &'static Mutex<Table> {
    static CACHE: OnceLock<Mutex<Table>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All profiles with `m` blocks of total size `n`, memoized.
pub fn enumerate_partition_terms(n: usize, m: usize) -> Result<Arc<Vec<PartitionTerm>>> {
    if m > n {
        return Err(Error::PartitionRange { m, n });
    }
    if n > PARTITION_ORDER_LIMIT {
        return Err(Error::OrderCap {
            order: n,
            cap: PARTITION_ORDER_LIMIT,
        });
    }
    if let Some(hit) = cache().lock().unwrap().get(&(n, m)) {
        return Ok(hit.clone());
    }
    let mut out = Vec::new();
    let mut a = vec![0u32; n];
    fill(n, n, m, &mut a, &mut out);
    let terms = Arc::new(out);
    cache().lock().unwrap().insert((n, m), terms.clone());
    Ok(terms)
}

/// Chooses `a_i` for `i = part, part-1, ..., 1` with `size` left to cover
/// using `blocks` blocks.
fn fill(part: usize, size: usize, blocks: usize, a: &mut Vec<u32>, out: &mut Vec<PartitionTerm>) {
    if part == 0 {
        if size == 0 && blocks == 0 {
            let n = a.len();
            out.push(PartitionTerm {
                a: a.clone(),
                m: a.iter().map(|&x| x as usize).sum(),
                n,
                coeff: profile_count(a),
            });
        }
        return;
    }
    if blocks == 0 {
        if size == 0 {
            fill(0, 0, 0, a, out);
        }
        return;
    }
    // Remaining blocks each have size in 1..=part.
    if size < blocks || size > blocks * part {
        return;
    }
    let max_here = (size / part).min(blocks);
    for k in (0..=max_here).rev() {
        a[part - 1] = k as u32;
        fill(part - 1, size - k * part, blocks - k, a, out);
    }
    a[part - 1] = 0;
}

fn profile_count(a: &[u32]) -> u128 {
    // Build the count as a product of binomials to stay inside u128:
    // choose the members of each block in turn, then divide by the
    // permutations of equal-sized blocks.
    let mut remaining = a.len();
    let mut count: u128 = 1;
    for (i, &ai) in a.iter().enumerate() {
        let size = i + 1;
        let mut group: u128 = 1;
        for j in 0..ai as usize {
            group *= binomial(remaining, size);
            remaining -= size;
            group /= (j + 1) as u128;
        }
        count *= group;
    }
    count
}

/// Partial Bell polynomials `B_{n,k}(x_1, x_2, ...)` for `n, k <= n_max` by
/// `B_{n,k} = sum_{i=1}^{n-k+1} C(n-1, i-1) x_i B_{n-i,k-1}`.
///
/// `x[0]` stands for `x_1`. Entry `[n][k]` is zero for `k > n`.
pub fn partial_bell_table<T: Scalar>(x: &[T], n_max: usize) -> Vec<Vec<T>> {
    let mut b = vec![vec![T::zero(); n_max + 1]; n_max + 1];
    b[0][0] = T::one();
    let xi = |i: usize| x.get(i - 1).cloned().unwrap_or_else(T::zero);
    for n in 1..=n_max {
        for k in 1..=n {
            let mut acc = T::zero();
            for i in 1..=(n - k + 1) {
                let prev = &b[n - i][k - 1];
                if prev.is_zero() {
                    continue;
                }
                acc = acc + T::from_count(binomial(n - 1, i - 1)) * xi(i) * prev.clone();
            }
            b[n][k] = acc;
        }
    }
    b
}

/// Verifies `m! sum_n t^n/n! B_{n,m}(x) = (sum_k x_k t^k / k!)^m` as formal
/// power series up to degree `trunc`, exactly.
///
/// The left side is evaluated from the explicit profile enumeration, the
/// right side by repeated series multiplication, so the two computations
/// share no code.
pub fn exponential_formula_check(x: &[BigRational], m: usize, trunc: usize) -> bool {
    let fact = |k: usize| -> BigRational {
        (1..=k).fold(BigRational::one(), |acc, j| {
            acc * BigRational::from_integer(BigInt::from(j))
        })
    };
    let xk = |k: usize| x.get(k - 1).cloned().unwrap_or_else(BigRational::zero);

    let mut lhs = vec![BigRational::zero(); trunc + 1];
    for (n, slot) in lhs.iter_mut().enumerate().skip(m) {
        let Ok(terms) = enumerate_partition_terms(n, m) else {
            return false;
        };
        let mut sum = BigRational::zero();
        for t in terms.iter() {
            let mut mono = BigRational::from_integer(BigInt::from(t.coeff));
            for (i, &ai) in t.a.iter().enumerate() {
                for _ in 0..ai {
                    mono *= xk(i + 1);
                }
            }
            sum += mono;
        }
        *slot = fact(m) * sum / fact(n);
    }

    let mut base = vec![BigRational::zero(); trunc + 1];
    for (k, slot) in base.iter_mut().enumerate().skip(1) {
        *slot = xk(k) / fact(k);
    }
    let mut rhs = vec![BigRational::zero(); trunc + 1];
    rhs[0] = BigRational::one();
    for _ in 0..m {
        let mut next = vec![BigRational::zero(); trunc + 1];
        for (i, ri) in rhs.iter().enumerate() {
            if ri.is_zero() {
                continue;
            }
            for j in 0..=(trunc - i) {
                if !base[j].is_zero() {
                    next[i + j] += ri * &base[j];
                }
            }
        }
        rhs = next;
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_into_two() {
        let t = enumerate_partition_terms(3, 2).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].a, vec![1, 1, 0]);
        assert_eq!(t[0].coeff, 3);
    }

    #[test]
    fn four_into_two() {
        let t = enumerate_partition_terms(4, 2).unwrap();
        let mut got: Vec<(Vec<u32>, u128)> = t.iter().map(|t| (t.a.clone(), t.coeff)).collect();
        got.sort();
        assert_eq!(got, vec![(vec![0, 2, 0, 0], 3), (vec![1, 0, 1, 0], 4)]);
    }

    #[test]
    fn all_singletons() {
        for n in 0..10 {
            let t = enumerate_partition_terms(n, n).unwrap();
            assert_eq!(t.len(), 1);
            assert_eq!(t[0].coeff, 1);
        }
    }

    #[test]
    fn rejects_more_blocks_than_elements() {
        assert_eq!(
            enumerate_partition_terms(2, 3).unwrap_err(),
            Error::PartitionRange { m: 3, n: 2 }
        );
    }

    #[test]
    fn bell_table_counts_partitions_with_unit_inputs() {
        let ones = vec![1.0f64; 10];
        let b = partial_bell_table(&ones, 10);
        // S(5, 2) = 15, S(6, 3) = 90
        assert_eq!(b[5][2], 15.0);
        assert_eq!(b[6][3], 90.0);
    }

    #[test]
    fn exponential_formula_small_cases() {
        let x: Vec<BigRational> = [1, 1, 0, 0]
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        assert!(exponential_formula_check(&x, 0, 4));
        assert!(exponential_formula_check(&x, 1, 4));
        assert!(exponential_formula_check(&x, 2, 4));
    }
}
