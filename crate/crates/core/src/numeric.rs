//! Floating-point linear algebra helpers over complex matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues from the complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return vec![];
    }
    let t = m.clone().schur().unpack().1;
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Unit vector spanning the numerical kernel, taken as the last right singular vector.
pub fn null_vector(m: &CMatrix) -> DVector<Complex64> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    v_t.row(k).adjoint()
}

/// Singular values, sorted descending.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Frobenius norm.
pub fn norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Match two eigenvalue multisets by greedy nearest pairing; returns the worst distance.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0f64;
    for x in a {
        let mut best = (usize::MAX, f64::INFINITY);
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best.1 {
                    best = (j, d);
                }
            }
        }
        used[best.0] = true;
        worst = worst.max(best.1);
    }
    worst
}

/// Least exponent `m ≤ bound` with `M^m` numerically scalar, with that scalar.
pub fn projective_order(m: &CMatrix, bound: u32, tol: f64) -> Option<(u32, Complex64)> {
    let n = m.nrows();
    let mut p = m.clone();
    for k in 1..=bound {
        let c = p[(0, 0)];
        let scale = norm(&p).max(1.0);
        let off = norm(&(&p - CMatrix::identity(n, n) * c));
        if off < tol * scale && c.norm() > tol {
            return Some((k, c));
        }
        p = &p * m;
    }
    None
}
