//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `E_{ij}` of size `n` (0-based).
pub fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = cr(1.0);
    m
}

pub fn conj_mat(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

pub fn conj_vec(v: &CVec) -> CVec {
    v.map(|z| z.conj())
}

pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vnorm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Stacks real and imaginary parts column-wise: `m x k` complex -> `2m x k` real.
pub fn realify_cols(m: &CMat) -> RMat {
    let (r, k) = m.shape();
    RMat::from_fn(2 * r, k, |i, j| if i < r { m[(i, j)].re } else { m[(i - r, j)].im })
}

pub fn realify_vec(v: &CVec) -> RVec {
    let r = v.len();
    RVec::from_fn(2 * r, |i, _| if i < r { v[i].re } else { v[i - r].im })
}

pub fn complexify_vec(v: &RVec) -> CVec {
    let r = v.len() / 2;
    CVec::from_fn(r, |i, _| c(v[i], v[i + r]))
}

/// Flattens a square complex matrix into a real vector (real parts then imaginary parts).
pub fn flatten_mat(m: &CMat) -> RVec {
    let n = m.len();
    RVec::from_fn(2 * n, |i, _| if i < n { m[i].re } else { m[i - n].im })
}

pub fn singular_values_real(a: &RMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Numerical rank with a threshold relative to the largest singular value.
pub fn rank_real(a: &RMat, rel: f64) -> usize {
    let s = singular_values_real(a);
    match s.first() {
        None => 0,
        Some(&smax) if smax <= f64::MIN_POSITIVE => 0,
        Some(&smax) => s.iter().filter(|&&x| x > rel * smax).count(),
    }
}

fn pad_square_real(a: &RMat) -> RMat {
    let (m, n) = a.shape();
    if m >= n {
        a.clone()
    } else {
        let mut p = RMat::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    }
}

/// Orthonormal basis (columns) of the null space of `a`.
/// `abs_floor` guards the all-zero matrix case.
pub fn null_space_real(a: &RMat, rel: f64) -> RMat {
    let n = a.ncols();
    if n == 0 {
        return RMat::zeros(0, 0);
    }
    let p = pad_square_real(a);
    let svd = p.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thresh = if smax <= f64::MIN_POSITIVE { f64::INFINITY } else { rel * smax };
    let cols: Vec<RVec> = (0..svd.singular_values.len())
        .filter(|&k| !(svd.singular_values[k] > thresh))
        .map(|k| vt.row(k).transpose())
        .collect();
    if cols.is_empty() {
        RMat::zeros(n, 0)
    } else {
        RMat::from_columns(&cols)
    }
}

/// Orthonormal basis of the column space of `a`.
pub fn range_real(a: &RMat, rel: f64) -> RMat {
    let (m, _) = a.shape();
    if a.ncols() == 0 {
        return RMat::zeros(m, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax <= f64::MIN_POSITIVE {
        return RMat::zeros(m, 0);
    }
    let cols: Vec<RVec> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > rel * smax)
        .map(|k| u.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        RMat::zeros(m, 0)
    } else {
        RMat::from_columns(&cols)
    }
}

fn pad_square_complex(a: &CMat) -> CMat {
    let (m, n) = a.shape();
    if m >= n {
        a.clone()
    } else {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    }
}

/// Orthonormal basis of the complex null space of `a`.
pub fn null_space_complex(a: &CMat, rel: f64) -> CMat {
    let n = a.ncols();
    let p = pad_square_complex(a);
    let svd = p.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thresh = if smax <= f64::MIN_POSITIVE { f64::INFINITY } else { rel * smax };
    let cols: Vec<CVec> = (0..svd.singular_values.len())
        .filter(|&k| !(svd.singular_values[k] > thresh))
        .map(|k| vt.row(k).adjoint())
        .collect();
    if cols.is_empty() {
        CMat::zeros(n, 0)
    } else {
        CMat::from_columns(&cols)
    }
}

/// Orthonormal basis of the complex column space of `a`.
pub fn range_complex(a: &CMat, rel: f64) -> CMat {
    let m = a.nrows();
    if a.ncols() == 0 {
        return CMat::zeros(m, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax <= f64::MIN_POSITIVE {
        return CMat::zeros(m, 0);
    }
    let cols: Vec<CVec> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > rel * smax)
        .map(|k| u.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        CMat::zeros(m, 0)
    } else {
        CMat::from_columns(&cols)
    }
}

/// Minimum-norm least-squares solution of `a x = b`.
pub fn lstsq_real(a: &RMat, b: &RVec) -> RVec {
    if a.ncols() == 0 {
        return RVec::zeros(0);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = (1e-12 * smax).max(f64::MIN_POSITIVE);
    svd.solve(b, eps).expect("svd solve with both factors")
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    if h.nrows() == 0 {
        return vec![];
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Spectral norm of a complex matrix.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Gram-Schmidt orthonormalization of real columns, dropping dependent ones.
pub fn orthonormalize_real(cols: &[RVec], tol: f64) -> Vec<RVec> {
    let mut out: Vec<RVec> = Vec::new();
    for v in cols {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let d = q.dot(&w);
                w -= q * d;
            }
        }
        let nn = w.norm();
        if nn > tol * v.norm().max(1.0) {
            out.push(w / nn);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let a = RMat::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space_real(&a, 1e-10);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).norm() < 1e-12);
    }

    #[test]
    fn complex_null_space_dimension() {
        let a = CMat::from_row_slice(1, 2, &[c(1.0, 0.0), c(0.0, 1.0)]);
        let ns = null_space_complex(&a, 1e-10);
        assert_eq!(ns.ncols(), 1);
        assert!((&a * &ns).norm() < 1e-12);
    }

    #[test]
    fn lstsq_minimum_norm() {
        let a = RMat::from_row_slice(1, 2, &[1.0, 1.0]);
        let x = lstsq_real(&a, &RVec::from_vec(vec![2.0]));
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_eigs_of_pauli_y() {
        let h = CMat::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)]);
        let ev = hermitian_eigenvalues(&h);
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }
}
