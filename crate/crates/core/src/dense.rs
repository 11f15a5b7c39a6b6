//! Dense kernels shared by the geometric modules.
//!
//! Matrices are nalgebra's throughout, but SVD and Hermitian eigenproblems
//! are solved with faer: nalgebra's SVD can lose accuracy (or stall) on
//! rank-deficient input, which is exactly the input every rank decision here
//! depends on. Empty dimensions are handled before either library is called.

use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::scalar::{Field, Scalar};

/// Full SVD `a = U diag(s) Vᴴ`: `U` is m×m, `V` is n×n, `s` descending of length min(m, n).
fn full_svd<T: Scalar>(a: &DMatrix<T>) -> (DMatrix<T>, Vec<f64>, DMatrix<T>) {
    let (m, n) = a.shape();
    match T::FIELD {
        Field::Real => {
            let f = Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)].to_c64().re);
            let d = f.svd().expect("SVD converges");
            let (u, s, v) = (d.U(), d.S().column_vector(), d.V());
            (
                DMatrix::from_fn(m, m, |i, j| T::from_real(u[(i, j)])),
                (0..m.min(n)).map(|i| s[i]).collect(),
                DMatrix::from_fn(n, n, |i, j| T::from_real(v[(i, j)])),
            )
        }
        Field::Complex => {
            let f = Mat::<Complex64>::from_fn(m, n, |i, j| a[(i, j)].to_c64());
            let d = f.svd().expect("SVD converges");
            let (u, s, v) = (d.U(), d.S().column_vector(), d.V());
            (
                DMatrix::from_fn(m, m, |i, j| T::from_c64(u[(i, j)])),
                (0..m.min(n)).map(|i| s[i].re).collect(),
                DMatrix::from_fn(n, n, |i, j| T::from_c64(v[(i, j)])),
            )
        }
    }
}

/// Thin SVD `a = U diag(s) Vᴴ` with `s` descending; `U` is m×r, `V` is n×r, r = min(m, n).
pub(crate) fn svd<T: Scalar>(a: &DMatrix<T>) -> (DMatrix<T>, Vec<f64>, DMatrix<T>) {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return (DMatrix::zeros(m, 0), Vec::new(), DMatrix::zeros(n, 0));
    }
    let (u, s, v) = full_svd(a);
    let r = m.min(n);
    (u.columns(0, r).into_owned(), s, v.columns(0, r).into_owned())
}

pub(crate) fn singular_values<T: Scalar>(a: &DMatrix<T>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let (m, n) = a.shape();
    let mut s: Vec<f64> = match T::FIELD {
        Field::Real => Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)].to_c64().re)
            .singular_values()
            .expect("SVD converges"),
        Field::Complex => Mat::<Complex64>::from_fn(m, n, |i, j| a[(i, j)].to_c64())
            .singular_values()
            .expect("SVD converges"),
    };
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub(crate) fn spectral_norm<T: Scalar>(a: &DMatrix<T>) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Orthonormal basis of the column space, keeping singular values strictly above `cut`.
pub(crate) fn column_space<T: Scalar>(a: &DMatrix<T>, cut: f64) -> DMatrix<T> {
    let (u, s, _) = svd(a);
    let r = s.iter().filter(|&&x| x > cut).count();
    u.columns(0, r).into_owned()
}

/// Orthonormal basis of `{x : a x = 0}` up to singular values `≤ cut`.
pub(crate) fn null_space<T: Scalar>(a: &DMatrix<T>, cut: f64) -> DMatrix<T> {
    let (m, n) = a.shape();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m == 0 {
        return DMatrix::identity(n, n);
    }
    let (_, s, v) = full_svd(a);
    // Columns of V beyond min(m, n) carry singular value 0.
    let cols: Vec<usize> = (0..n).filter(|&i| s.get(i).is_none_or(|&x| x <= cut)).collect();
    DMatrix::from_fn(n, cols.len(), |i, j| v[(i, cols[j])])
}

/// Rank-revealing split of `a` (m×k) with a complete right basis:
/// returns `(U_big, σ_big, V_big, V_small)` where `a V_big = U_big diag(σ_big)`
/// and `a V_small ≈ 0`, the singular values of `V_small` being `≤ cut`.
pub(crate) struct RightSplit<T: Scalar> {
    pub u_big: DMatrix<T>,
    pub s_big: Vec<f64>,
    pub v_big: DMatrix<T>,
    pub v_small: DMatrix<T>,
}

pub(crate) fn right_split<T: Scalar>(a: &DMatrix<T>, cut: f64) -> RightSplit<T> {
    let (m, k) = a.shape();
    if k == 0 || m == 0 {
        return RightSplit {
            u_big: DMatrix::zeros(m, 0),
            s_big: Vec::new(),
            v_big: DMatrix::zeros(k, 0),
            v_small: DMatrix::identity(k, k),
        };
    }
    let (u, s, v) = full_svd(a);
    let big: Vec<usize> = (0..s.len()).filter(|&i| s[i] > cut).collect();
    let small: Vec<usize> = (0..k).filter(|&i| s.get(i).is_none_or(|&x| x <= cut)).collect();
    RightSplit {
        u_big: DMatrix::from_fn(m, big.len(), |i, j| u[(i, big[j])]),
        s_big: big.iter().map(|&i| s[i]).collect(),
        v_big: DMatrix::from_fn(k, big.len(), |i, j| v[(i, big[j])]),
        v_small: DMatrix::from_fn(k, small.len(), |i, j| v[(i, small[j])]),
    }
}

/// Eigen-decomposition of the Hermitian part of `a`, eigenvalues ascending.
pub(crate) fn hermitian_eigen<T: Scalar>(a: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let h = (a + a.adjoint()).scale(0.5);
    let (vals, vecs): (Vec<f64>, DMatrix<T>) = match T::FIELD {
        Field::Real => {
            let f = Mat::<f64>::from_fn(n, n, |i, j| h[(i, j)].to_c64().re);
            let e = f.self_adjoint_eigen(faer::Side::Lower).expect("eigensolver converges");
            let (u, s) = (e.U(), e.S().column_vector());
            ((0..n).map(|i| s[i]).collect(), DMatrix::from_fn(n, n, |i, j| T::from_real(u[(i, j)])))
        }
        Field::Complex => {
            let f = Mat::<Complex64>::from_fn(n, n, |i, j| h[(i, j)].to_c64());
            let e = f.self_adjoint_eigen(faer::Side::Lower).expect("eigensolver converges");
            let (u, s) = (e.U(), e.S().column_vector());
            ((0..n).map(|i| s[i].re).collect(), DMatrix::from_fn(n, n, |i, j| T::from_c64(u[(i, j)])))
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let sorted = order.iter().map(|&i| vals[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
    (sorted, vecs)
}

pub(crate) fn hermitian_eigenvalues<T: Scalar>(a: &DMatrix<T>) -> Vec<f64> {
    hermitian_eigen(a).0
}

/// Sign pattern of a Hermitian matrix relative to a cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Inertia {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

pub(crate) fn inertia(vals: &[f64], cut: f64) -> Inertia {
    let pos = vals.iter().filter(|&&v| v > cut).count();
    let neg = vals.iter().filter(|&&v| v < -cut).count();
    Inertia {
        pos,
        neg,
        zero: vals.len() - pos - neg,
    }
}

/// Columnwise concatenation; all blocks must share the row count.
pub(crate) fn hstack<T: Scalar>(rows: usize, blocks: &[&DMatrix<T>]) -> DMatrix<T> {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        debug_assert_eq!(b.nrows(), rows);
        out.view_mut((0, c), (rows, b.ncols())).copy_from(*b);
        c += b.ncols();
    }
    out
}

/// Rowwise concatenation; all blocks must share the column count.
pub(crate) fn vstack<T: Scalar>(cols: usize, blocks: &[&DMatrix<T>]) -> DMatrix<T> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        debug_assert_eq!(b.ncols(), cols);
        out.view_mut((r, 0), (b.nrows(), cols)).copy_from(*b);
        r += b.nrows();
    }
    out
}

/// Block-diagonal matrix `diag(a, b)`.
pub(crate) fn block_diag<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let mut out = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// Entrywise complex conjugate.
pub(crate) fn conj<T: Scalar>(a: &DMatrix<T>) -> DMatrix<T> {
    a.map(|z| z.conjugate())
}

/// Nearest matrix with orthonormal columns (polar factor `U Vᴴ`).
pub(crate) fn polar<T: Scalar>(a: &DMatrix<T>) -> DMatrix<T> {
    let (u, _, v) = svd(a);
    u * v.adjoint()
}

pub(crate) fn inverse<T: Scalar>(a: &DMatrix<T>) -> Option<DMatrix<T>> {
    if a.nrows() == 0 {
        return Some(DMatrix::zeros(0, 0));
    }
    a.clone().try_inverse()
}

pub(crate) fn all_finite<T: Scalar>(a: &DMatrix<T>) -> bool {
    a.iter().all(|z| {
        let c = z.to_c64();
        c.re.is_finite() && c.im.is_finite()
    })
}

pub(crate) fn max_abs_entry<T: Scalar>(a: &DMatrix<T>) -> f64 {
    a.iter().map(|z| z.modulus()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn null_space_of_wide_matrix_is_complete() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        let n = null_space(&a, 1e-12);
        assert_eq!(n.shape(), (3, 2));
        assert_relative_eq!((&a * &n).norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!((n.adjoint() * &n - DMatrix::identity(2, 2)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn empty_shapes() {
        let a: DMatrix<f64> = DMatrix::zeros(0, 3);
        assert_eq!(null_space(&a, 0.0).shape(), (3, 3));
        let b: DMatrix<f64> = DMatrix::zeros(3, 0);
        assert_eq!(column_space(&b, 0.0).shape(), (3, 0));
        assert_eq!(spectral_norm(&b), 0.0);
    }

    #[test]
    fn hermitian_eigen_sorted() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 0.0]);
        let (vals, _) = hermitian_eigen(&a);
        assert_eq!(vals, vec![-2.0, 0.0, 1.0]);
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        // i * [[0, 1], [-1, 0]] has eigenvalues ±1.
        let a = DMatrix::from_row_slice(2, 2, &[z, i, -i, z]);
        let vals = hermitian_eigenvalues(&a);
        assert_relative_eq!(vals[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-14);
    }
}
