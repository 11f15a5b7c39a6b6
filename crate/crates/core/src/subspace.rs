//! Subspaces of `K^d` with the Euclidean norm.
//!
//! A [`Subspace`] stores an orthonormal basis. With the Euclidean norm the
//! directed gap `δ(M, N) = sup_{u ∈ M, ‖u‖=1} dist(u, N)` is the largest
//! singular value of `(I − P_N) B_M`, and the minimum gap reduces to the
//! smallest nonzero singular value of the same residual, because the residual's
//! null right-singular vectors span `M ∩ N` and the remaining ones span the
//! orthogonal complement `M'` of `M ∩ N` inside `M`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::dense;
use crate::error::{mismatch, Error, Result};
use crate::scalar::{Field, Scalar, Tolerance};

#[derive(Clone, Debug)]
pub struct Subspace<T: Scalar> {
    basis: DMatrix<T>,
    tol: Tolerance,
}

/// Lattice operation selector for [`Subspace::lattice`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Sum,
    Intersect,
    Perp,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapReport {
    pub delta_mn: f64,
    pub delta_nm: f64,
    pub hat_delta: f64,
    pub gamma_mn: f64,
    pub gamma_nm: f64,
    pub hat_gamma: f64,
}

/// Fredholm data of a pair of subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairIndex {
    pub dim_intersection: usize,
    pub codim_sum: usize,
    pub index: i64,
}

impl<T: Scalar> Subspace<T> {
    /// Column space of `raw`, dropping singular values `≤ tol · σ_max · max(d, m)`.
    pub fn span(raw: &DMatrix<T>, tol: Tolerance) -> Result<Self> {
        if !dense::all_finite(raw) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let (d, m) = raw.shape();
        let (u, s, _) = dense::svd(raw);
        let smax = s.first().copied().unwrap_or(0.0);
        let cut = tol.cutoff(smax, d.max(m));
        let r = s.iter().filter(|&&x| x > cut).count();
        Ok(Subspace {
            basis: u.columns(0, r).into_owned(),
            tol,
        })
    }

    /// Wraps a basis that is already orthonormal, verifying `BᴴB = I`.
    pub fn from_orthonormal(basis: DMatrix<T>, tol: Tolerance) -> Result<Self> {
        if !dense::all_finite(&basis) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let k = basis.ncols();
        if k > basis.nrows() {
            return Err(Error::InvalidMatrix(format!(
                "{k} columns cannot be orthonormal in dimension {}",
                basis.nrows()
            )));
        }
        let defect = dense::max_abs_entry(&(basis.adjoint() * &basis - DMatrix::identity(k, k)));
        if defect > tol.unit_cutoff(basis.nrows()).max(1e-12) {
            return Err(Error::InvalidMatrix(format!(
                "basis is not orthonormal (defect {defect:e})"
            )));
        }
        Ok(Subspace { basis, tol })
    }

    /// Internal constructor for bases that are orthonormal by construction.
    pub(crate) fn from_basis(basis: DMatrix<T>, tol: Tolerance) -> Self {
        Subspace { basis, tol }
    }

    pub fn zero(ambient_dim: usize, tol: Tolerance) -> Self {
        Subspace {
            basis: DMatrix::zeros(ambient_dim, 0),
            tol,
        }
    }

    pub fn full(ambient_dim: usize, tol: Tolerance) -> Self {
        Subspace {
            basis: DMatrix::identity(ambient_dim, ambient_dim),
            tol,
        }
    }

    /// Span of the listed standard basis vectors.
    pub fn coordinate(ambient_dim: usize, axes: &[usize], tol: Tolerance) -> Result<Self> {
        let mut b = DMatrix::zeros(ambient_dim, axes.len());
        for (j, &i) in axes.iter().enumerate() {
            if i >= ambient_dim {
                return Err(Error::InvalidArgument(format!(
                    "axis {i} out of range for dimension {ambient_dim}"
                )));
            }
            b[(i, j)] = T::one();
        }
        Subspace::span(&b, tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub fn field(&self) -> Field {
        T::FIELD
    }

    pub fn basis(&self) -> &DMatrix<T> {
        &self.basis
    }

    pub fn tol(&self) -> Tolerance {
        self.tol
    }

    pub fn with_tol(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    /// Orthogonal projector `B Bᴴ`.
    pub fn projector(&self) -> DMatrix<T> {
        &self.basis * self.basis.adjoint()
    }

    /// `(I − P) v` for every column of `v`.
    pub fn residual(&self, v: &DMatrix<T>) -> DMatrix<T> {
        v - &self.basis * (self.basis.adjoint() * v)
    }

    /// Euclidean distance of `v` to the subspace.
    pub fn distance(&self, v: &DVector<T>) -> f64 {
        (v - &self.basis * (self.basis.adjoint() * v)).norm()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(mismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    fn joint_tol(&self, other: &Self) -> Tolerance {
        self.tol.max(other.tol)
    }

    /// SVD of the residual of `self` against `other`, split at the gap cutoff:
    /// returns (singular values above the cutoff, right vectors above, right vectors below).
    fn residual_split(&self, other: &Self) -> (Vec<f64>, DMatrix<T>, DMatrix<T>) {
        let r = other.residual(&self.basis);
        let k = self.dim();
        let cut = self.joint_tol(other).unit_cutoff(self.ambient_dim());
        let (_, s, v) = dense::svd(&r);
        // `v` has min(d, k) columns; a complete right basis is needed when d < k,
        // which cannot happen for an orthonormal basis, so v is k×k here.
        debug_assert_eq!(v.ncols(), k);
        let big: Vec<usize> = (0..s.len()).filter(|&i| s[i] > cut).collect();
        let small: Vec<usize> = (0..s.len()).filter(|&i| s[i] <= cut).collect();
        let pick = |idx: &[usize]| DMatrix::from_fn(k, idx.len(), |i, j| v[(i, idx[j])]);
        (big.iter().map(|&i| s[i]).collect(), pick(&big), pick(&small))
    }

    /// `δ(self, other)`; 0 when `self` is the zero space. Values within the
    /// gap cutoff of 0 or 1 are reported as exactly 0 or 1.
    pub fn directed_gap(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let (s, _, _) = self.residual_split(other);
        let cut = self.joint_tol(other).unit_cutoff(self.ambient_dim());
        let d = s.first().copied().unwrap_or(0.0);
        Ok(if d >= 1.0 - cut { 1.0 } else { d })
    }

    /// `γ(self, other)`; 1 when `self ⊆ other`.
    pub fn min_gap(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let (s, _, _) = self.residual_split(other);
        Ok(s.last().copied().unwrap_or(1.0))
    }

    /// `other ⊆ self` within tolerance.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        Ok(other.directed_gap(self)? == 0.0)
    }

    /// Representation-independent equality.
    pub fn same_as(&self, other: &Self) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains(other)? && other.contains(self)?)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let tol = self.joint_tol(other);
        let r = self.residual(&other.basis);
        let extra = dense::column_space(&r, tol.unit_cutoff(self.ambient_dim()));
        // Re-orthonormalize the concatenation to wash out rounding drift.
        let b = dense::hstack(self.ambient_dim(), &[&self.basis, &extra]);
        Ok(Subspace::from_basis(dense::polar(&b), tol))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (_, _, small) = self.residual_split(other);
        let b = &self.basis * small;
        Ok(Subspace::from_basis(b, self.joint_tol(other)))
    }

    /// Euclidean orthogonal complement.
    pub fn perp(&self) -> Self {
        let b = dense::null_space(&self.basis.adjoint(), 0.5);
        Subspace::from_basis(b, self.tol)
    }

    pub fn lattice(&self, other: &Self, op: LatticeOp) -> Result<Self> {
        match op {
            LatticeOp::Sum => self.sum(other),
            LatticeOp::Intersect => self.intersect(other),
            LatticeOp::Perp => {
                self.check_compatible(other)?;
                Ok(self.perp())
            }
        }
    }

    /// Orthogonal complement of `inner` inside `self` (`self ∩ inner^⊥`).
    pub fn complement_in(&self, inner: &Self) -> Result<Self> {
        self.intersect(&inner.perp())
    }

    /// Image `A·self`, rank decided relative to `‖A‖`.
    pub fn image(&self, a: &DMatrix<T>) -> Result<Self> {
        if a.ncols() != self.ambient_dim() {
            return Err(mismatch(format!(
                "matrix has {} columns, subspace lives in dimension {}",
                a.ncols(),
                self.ambient_dim()
            )));
        }
        let img = a * &self.basis;
        let scale = dense::spectral_norm(a);
        let cut = self.tol.cutoff(scale, a.nrows().max(self.dim()));
        Ok(Subspace::from_basis(dense::column_space(&img, cut), self.tol))
    }

    /// Cartesian product `self × other ⊆ K^{d₁+d₂}`.
    pub fn product(&self, other: &Self) -> Self {
        Subspace::from_basis(
            dense::block_diag(&self.basis, &other.basis),
            self.joint_tol(other),
        )
    }

    /// Same subspace with basis `B Q` for a unitary `Q`.
    pub fn rebased(&self, q: &DMatrix<T>) -> Result<Self> {
        if q.shape() != (self.dim(), self.dim()) {
            return Err(mismatch("rebasing matrix must be k×k"));
        }
        Subspace::from_orthonormal(&self.basis * q, self.tol)
    }

    /// Unit vector drawn uniformly from the sphere of the subspace.
    ///
    /// Panics on the zero space, which has no unit vectors.
    pub fn sample_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<T> {
        let k = self.dim();
        assert!(k > 0, "the zero subspace has no unit vectors");
        loop {
            let g = DVector::from_fn(k, |_, _| T::gaussian(rng));
            let n = g.norm();
            if n > 1e-12 {
                return &self.basis * g.unscale(n);
            }
        }
    }
}

pub fn gap_metrics<T: Scalar>(m: &Subspace<T>, n: &Subspace<T>) -> Result<GapReport> {
    m.check_compatible(n)?;
    let (s_mn, _, _) = m.residual_split(n);
    let (s_nm, _, _) = n.residual_split(m);
    let delta_mn = s_mn.first().copied().unwrap_or(0.0);
    let delta_nm = s_nm.first().copied().unwrap_or(0.0);
    let gamma_mn = s_mn.last().copied().unwrap_or(1.0);
    let gamma_nm = s_nm.last().copied().unwrap_or(1.0);
    Ok(GapReport {
        delta_mn,
        delta_nm,
        hat_delta: delta_mn.max(delta_nm),
        gamma_mn,
        gamma_nm,
        hat_gamma: gamma_mn.min(gamma_nm),
    })
}

pub fn hat_delta<T: Scalar>(m: &Subspace<T>, n: &Subspace<T>) -> Result<f64> {
    Ok(m.directed_gap(n)?.max(n.directed_gap(m)?))
}

/// Interval enclosing the Hausdorff distance between the unit spheres of `m` and `n`.
///
/// The lower end is the largest sampled distance; for a unit `u` the distance to
/// the unit sphere of `N` has the closed form `‖u − P u/‖P u‖‖`, so every sample
/// is an exact point value of the supremand. The upper end is `2·δ̂`.
pub fn hausdorff_estimate<T: Scalar>(
    m: &Subspace<T>,
    n: &Subspace<T>,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    m.check_compatible(n)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    match (m.is_zero(), n.is_zero()) {
        (true, true) => return Ok((0.0, 0.0)),
        (true, false) | (false, true) => return Ok((2.0, 2.0)),
        _ => {}
    }
    let hd = hat_delta(m, n)?;
    if hd == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lo: f64 = 0.0;
    for _ in 0..samples {
        let u = m.sample_unit(&mut rng);
        lo = lo.max(sphere_distance(&u, n));
        let v = n.sample_unit(&mut rng);
        lo = lo.max(sphere_distance(&v, m));
    }
    Ok((lo, 2.0 * hd))
}

/// Distance from a unit vector to the unit sphere of `n`.
fn sphere_distance<T: Scalar>(u: &DVector<T>, n: &Subspace<T>) -> f64 {
    let pu = n.basis() * (n.basis().adjoint() * u);
    let p = pu.norm();
    let r = (u - &pu).norm();
    if p <= f64::EPSILON {
        return std::f64::consts::SQRT_2;
    }
    // ‖u − Pu/p‖² = r² + (1 − p)², with 1 − p rewritten to avoid cancellation.
    let one_minus_p = r * r / (1.0 + p);
    (r * r + one_minus_p * one_minus_p).sqrt()
}

pub fn pair_index<T: Scalar>(m: &Subspace<T>, n: &Subspace<T>) -> Result<PairIndex> {
    let cap = m.intersect(n)?.dim();
    let sum = m.sum(n)?.dim();
    let codim = m.ambient_dim() - sum;
    Ok(PairIndex {
        dim_intersection: cap,
        codim_sum: codim,
        index: cap as i64 - codim as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn col(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_column_slice(v.len(), 1, v)
    }

    #[test]
    fn span_examples() {
        let s = Subspace::span(&col(&[1.0, 0.0]), tol()).unwrap();
        assert_eq!(s.dim(), 1);
        let s = Subspace::span(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 0.0]), tol()).unwrap();
        assert_eq!(s.dim(), 1);
        let s = Subspace::span(&DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1e-30]), tol()).unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn span_rejects_nan() {
        let r = Subspace::span(&col(&[f64::NAN, 0.0]), tol());
        assert!(matches!(r, Err(Error::InvalidMatrix(_))));
    }

    #[test]
    fn lattice_examples() {
        let e1 = Subspace::<f64>::coordinate(2, &[0], tol()).unwrap();
        let e2 = Subspace::<f64>::coordinate(2, &[1], tol()).unwrap();
        assert!(e1.sum(&e2).unwrap().is_full());
        assert_eq!(e1.intersect(&e1).unwrap().dim(), 1);
        let d = Subspace::span(&col(&[1.0, 1.0]), tol()).unwrap();
        let p = d.perp();
        let expected = Subspace::span(&col(&[1.0, -1.0]), tol()).unwrap();
        assert!(p.same_as(&expected).unwrap());
    }

    #[test]
    fn gap_examples() {
        let e1 = Subspace::<f64>::coordinate(2, &[0], tol()).unwrap();
        let e2 = Subspace::<f64>::coordinate(2, &[1], tol()).unwrap();
        let g = gap_metrics(&e1, &e1).unwrap();
        assert_eq!((g.delta_mn, g.delta_nm, g.gamma_mn, g.gamma_nm), (0.0, 0.0, 1.0, 1.0));
        let g = gap_metrics(&e1, &e2).unwrap();
        assert_abs_diff_eq!(g.hat_delta, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.hat_gamma, 1.0, epsilon = 1e-12);
        let t = std::f64::consts::FRAC_PI_6;
        let l = Subspace::span(&col(&[t.cos(), t.sin()]), tol()).unwrap();
        assert_abs_diff_eq!(e1.directed_gap(&l).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn zero_conventions() {
        let z = Subspace::<f64>::zero(3, tol());
        let f = Subspace::<f64>::full(3, tol());
        let g = gap_metrics(&z, &f).unwrap();
        assert_eq!(g.delta_mn, 0.0);
        assert_eq!(g.gamma_mn, 1.0);
        assert_abs_diff_eq!(g.delta_nm, 1.0, epsilon = 1e-12);
        assert_eq!(hausdorff_estimate(&z, &f, 10, 1).unwrap(), (2.0, 2.0));
        assert_eq!(hausdorff_estimate(&z, &z, 10, 1).unwrap(), (0.0, 0.0));
        assert_eq!(hausdorff_estimate(&f, &f, 10, 1).unwrap(), (0.0, 0.0));
        assert!(matches!(
            hausdorff_estimate(&z, &f, 0, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn hausdorff_orthogonal_lines() {
        let e1 = Subspace::<f64>::coordinate(2, &[0], tol()).unwrap();
        let e2 = Subspace::<f64>::coordinate(2, &[1], tol()).unwrap();
        let (lo, hi) = hausdorff_estimate(&e1, &e2, 1000, 7).unwrap();
        assert!(lo >= 1.0);
        assert!(lo <= hi);
    }

    #[test]
    fn pair_index_examples() {
        let full = Subspace::<f64>::full(2, tol());
        let e1 = Subspace::<f64>::coordinate(2, &[0], tol()).unwrap();
        let e2 = Subspace::<f64>::coordinate(2, &[1], tol()).unwrap();
        assert_eq!(
            pair_index(&full, &full).unwrap(),
            PairIndex { dim_intersection: 2, codim_sum: 0, index: 2 }
        );
        assert_eq!(
            pair_index(&e1, &e2).unwrap(),
            PairIndex { dim_intersection: 0, codim_sum: 0, index: 0 }
        );
        assert_eq!(
            pair_index(&e1, &e1).unwrap(),
            PairIndex { dim_intersection: 1, codim_sum: 1, index: 0 }
        );
    }

    #[test]
    fn mismatch_is_reported() {
        let a = Subspace::<f64>::full(2, tol());
        let b = Subspace::<f64>::full(3, tol());
        assert!(matches!(gap_metrics(&a, &b), Err(Error::DimensionMismatch(_))));
    }
}
