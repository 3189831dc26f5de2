//! All complex roots of a polynomial by Aberth-Ehrlich simultaneous
//! iteration, plus clustering and polishing of (near-)multiple roots.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;

const MAX_ITERATIONS: usize = 2000;
const CONVERGED: f64 = 1e-15;

/// Roots of `p`, with multiplicity. The zero polynomial is rejected.
pub fn polynomial_roots(p: &Poly<Complex64>) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::RootFinder { coeffs: Vec::new() });
    }
    let coeffs = p.coeffs();
    let zeros_at_origin = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = Poly::new(coeffs[zeros_at_origin..].to_vec());
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    roots.extend(aberth(&reduced)?);
    Ok(roots)
}

fn aberth(p: &Poly<Complex64>) -> Result<Vec<Complex64>> {
    let n = p.degree();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-p.coeff(0) / p.coeff(1)]),
        _ => {}
    }
    let p = p.monic();
    let dp = p.derivative();
    let c = p.coeffs();

    // Start on a circle of the geometric-mean radius, with an irrational
    // angular offset so no guess sits on a symmetry axis.
    let radius = c[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let pk = p.eval(&z[k]);
            if pk.norm() == 0.0 {
                continue;
            }
            let ratio = pk / dp.eval(&z[k]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < CONVERGED {
            converged = true;
            break;
        }
    }

    if !converged && !backward_stable(&p, &z) {
        return Err(Error::RootFinder {
            coeffs: p.coeffs().to_vec(),
        });
    }
    Ok(z)
}

/// Relative residual test used when the step size stalls at a multiple root.
fn backward_stable(p: &Poly<Complex64>, z: &[Complex64]) -> bool {
    z.iter().all(|zk| {
        let scale: f64 = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * zk.norm().powi(k as i32))
            .sum();
        p.eval(zk).norm() <= 1e-8 * scale.max(1e-300)
    })
}

/// A group of computed roots that approximate one root of the given
/// multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// Groups roots closer than `tol * (1 + |z|)` (transitively) and returns the
/// cluster centroids.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<RootCluster> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() <= tol * (1.0 + roots[i].norm()) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b] = a;
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &z) in roots.iter().enumerate().take(n) {
        let r = find(&mut label, i);
        match clusters.iter_mut().find(|(root, _, _)| *root == r) {
            Some(c) => {
                c.1 += z;
                c.2 += 1;
            }
            None => clusters.push((r, z, 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, sum, m)| RootCluster {
            center: sum / m as f64,
            multiplicity: m,
        })
        .collect()
}

/// Newton iteration on `p^(m-1)`, which has a simple root where `p` has a
/// root of multiplicity `m`. Keeps the starting point if no step improves it.
pub fn polish_root(p: &Poly<Complex64>, start: Complex64, multiplicity: usize) -> Complex64 {
    let mut q = p.clone();
    for _ in 1..multiplicity.max(1) {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut z = start;
    let mut best = q.eval(&z).norm();
    for _ in 0..60 {
        let d = dq.eval(&z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - q.eval(&z) / d;
        let val = q.eval(&next).norm();
        if (val.is_nan() || val >= best) && (next - z).norm() > 1e-15 * (1.0 + z.norm()) {
            break;
        }
        let step = (next - z).norm();
        z = next;
        best = val.min(best);
        if step <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Distinct roots with multiplicities, polished.
pub fn distinct_roots(p: &Poly<Complex64>, cluster_tol: f64) -> Result<Vec<RootCluster>> {
    let roots = polynomial_roots(p)?;
    Ok(cluster_roots(&roots, cluster_tol)
        .into_iter()
        .map(|c| RootCluster {
            center: polish_root(p, c.center, c.multiplicity),
            multiplicity: c.multiplicity,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(roots: &[Complex64]) -> Poly<Complex64> {
        roots.iter().fold(Poly::constant(c(1.0, 0.0)), |acc, r| {
            &acc * &Poly::new(vec![-r, c(1.0, 0.0)])
        })
    }

    #[test]
    fn quadratic_with_irrational_roots() {
        // z^2 - 4z + 1
        let p = Poly::new(vec![c(1.0, 0.0), c(-4.0, 0.0), c(1.0, 0.0)]);
        let mut roots = polynomial_roots(&p).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0].re - (2.0 - 3f64.sqrt())).abs() < 1e-14);
        assert!((roots[1].re - (2.0 + 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn recovers_complex_roots() {
        let want = [c(0.5, 0.5), c(-1.0, 2.0), c(3.0, -0.25), c(0.0, -1.0), c(-0.7, 0.0)];
        let roots = polynomial_roots(&from_roots(&want)).unwrap();
        for w in want {
            assert!(roots.iter().any(|r| (r - w).norm() < 1e-10), "missing {w}");
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        let p = Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]);
        let roots = polynomial_roots(&p).unwrap();
        assert_eq!(roots.iter().filter(|r| r.norm() == 0.0).count(), 2);
    }

    #[test]
    fn double_root_is_clustered_and_polished() {
        // (z - 1)^2 (z + 0.5)
        let p = from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(-0.5, 0.0)]);
        let clusters = distinct_roots(&p, 1e-5).unwrap();
        let double = clusters.iter().find(|c| c.multiplicity == 2).unwrap();
        assert!((double.center - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(clusters.len(), 2);
    }

    #[test]
    fn rejects_zero_polynomial() {
        assert!(polynomial_roots(&Poly::zero()).is_err());
    }
}
