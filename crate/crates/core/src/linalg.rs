//! Small dense helpers: plain-slice vector arithmetic, orthonormal
//! complements and extremal Hermitian eigenvalues.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Orthogonal projection onto the span of an orthonormal family.
pub fn project_onto(basis: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for b in basis {
        let c = dot(b, x);
        for (o, bi) in out.iter_mut().zip(b) {
            *o += c * bi;
        }
    }
    out
}

/// Coordinates of `x` with respect to an orthonormal family.
pub fn coordinates(basis: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    basis.iter().map(|b| dot(b, x)).collect()
}

/// Completes an orthonormal family in R^d to a basis and returns only the
/// new vectors, i.e. an orthonormal basis of the orthogonal complement.
pub fn orthonormal_complement(basis: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut all: Vec<Vec<f64>> = basis.to_vec();
    let mut extra = Vec::new();
    for i in 0..dim {
        if all.len() == dim {
            break;
        }
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for b in &all {
                let c = dot(b, &v);
                for (vj, bj) in v.iter_mut().zip(b) {
                    *vj -= c * bj;
                }
            }
        }
        let n = norm(&v);
        if n > 1e-8 {
            let v = scale(&v, 1.0 / n);
            all.push(v.clone());
            extra.push(v);
        }
    }
    extra
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = h.clone().symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Largest and smallest eigenvalue of a Hermitian positive semidefinite
/// matrix by power iteration on `h` and on `top I - h`. Used above the
/// dense-solver size limit.
pub fn extremal_eigenvalues_power(h: &DMatrix<Complex64>, rel_tol: f64, max_iter: usize) -> (f64, f64) {
    let n = h.ncols();
    let apply = |v: &DVector<Complex64>| -> DVector<Complex64> { h * v };
    let start = || {
        DVector::from_iterator(
            n,
            (0..n).map(|i| Complex64::new(1.0 + 0.37 * ((i * 7919) % 101) as f64 / 101.0, 0.0)),
        )
    };
    let top = power_iterate(&apply, start(), rel_tol, max_iter);
    let shifted = |v: &DVector<Complex64>| -> DVector<Complex64> { v * Complex64::new(top, 0.0) - apply(v) };
    let bottom_shifted = power_iterate(&shifted, start(), rel_tol, max_iter);
    (top - bottom_shifted, top)
}

fn power_iterate<F>(apply: &F, mut v: DVector<Complex64>, rel_tol: f64, max_iter: usize) -> f64
where
    F: Fn(&DVector<Complex64>) -> DVector<Complex64>,
{
    let mut lambda = 0.0;
    v /= Complex64::new(v.norm(), 0.0);
    for _ in 0..max_iter {
        let w = apply(&v);
        let next = v.dotc(&w).re;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(nw, 0.0);
        if (next - lambda).abs() <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// Smallest singular value of a square complex matrix.
pub fn smallest_singular_value(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_orthonormal() {
        let b = vec![vec![1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt(), 0.0]];
        let c = orthonormal_complement(&b, 3);
        assert_eq!(c.len(), 2);
        for v in &c {
            assert!((norm(v) - 1.0).abs() < 1e-12);
            assert!(dot(v, &b[0]).abs() < 1e-12);
        }
        assert!(dot(&c[0], &c[1]).abs() < 1e-12);
    }

    #[test]
    fn power_iteration_matches_dense() {
        let y = DMatrix::from_fn(6, 4, |i, j| Complex64::new(((i * 3 + j * 5) % 7) as f64 - 3.0, (i as f64 - j as f64) * 0.25));
        let h = y.adjoint() * &y;
        let dense = hermitian_eigenvalues(&h);
        let (lo, hi) = extremal_eigenvalues_power(&h, 1e-13, 100_000);
        assert!((hi - dense[3]).abs() < 1e-6 * dense[3]);
        assert!((lo - dense[0]).abs() < 1e-6 * dense[3]);
    }
}
