//! Seeded random generators for matrices, subspaces and relations.
//!
//! Trial `i` of a sweep with seed `s` uses [`trial_rng`]`(s, i)`, so results do
//! not depend on how trials are scheduled across threads.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Scalar, Tolerance};
use crate::subspace::Subspace;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `index` of a sweep seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

pub fn gaussian<T: Scalar, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<T> {
    DMatrix::from_fn(rows, cols, |_, _| T::gaussian(rng))
}

/// Haar-distributed orthogonal (real) or unitary (complex) matrix.
pub fn haar_unitary<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<T> {
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let g: DMatrix<T> = gaussian(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Fix the phases so the distribution is exactly Haar.
    for j in 0..n {
        let d = r[(j, j)];
        let m = d.modulus();
        if m > 0.0 {
            let phase = d.unscale(m);
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Uniformly random `k`-dimensional subspace of `K^d`.
pub fn subspace<T: Scalar, R: Rng + ?Sized>(d: usize, k: usize, tol: Tolerance, rng: &mut R) -> Subspace<T> {
    let q: DMatrix<T> = haar_unitary(d, rng);
    Subspace::from_basis(q.columns(0, k.min(d)).into_owned(), tol)
}

/// Random skew-Hermitian matrix `(G − Gᴴ)/2`.
pub fn skew_hermitian<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<T> {
    let g: DMatrix<T> = gaussian(n, n, rng);
    (&g - g.adjoint()).scale(0.5)
}

/// Random Hermitian matrix `(G + Gᴴ)/2`.
pub fn hermitian<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<T> {
    let g: DMatrix<T> = gaussian(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Random Gaussian matrix rescaled to spectral norm `norm`.
pub fn with_norm<T: Scalar, R: Rng + ?Sized>(rows: usize, cols: usize, norm: f64, rng: &mut R) -> DMatrix<T> {
    let g: DMatrix<T> = gaussian(rows, cols, rng);
    let s = crate::dense::spectral_norm(&g);
    if s == 0.0 {
        return g;
    }
    g.scale(norm / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn haar_is_unitary() {
        let mut r = rng(3);
        let q: DMatrix<Complex64> = haar_unitary(5, &mut r);
        let d = (q.adjoint() * &q - DMatrix::identity(5, 5)).norm();
        assert!(d < 1e-12);
    }

    #[test]
    fn streams_differ() {
        let a: f64 = trial_rng(1, 0).random();
        let b: f64 = trial_rng(1, 1).random();
        assert_ne!(a, b);
        let c: f64 = trial_rng(1, 0).random();
        assert_eq!(a, c);
    }
}
