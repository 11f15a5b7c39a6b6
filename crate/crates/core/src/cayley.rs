//! Cayley parameterization `U ↦ R_Ω⁻¹ R_Q (I − U)(I + U)⁻¹` of the
//! skew-adjoint relations by the unitary (orthogonal) group, and explicit paths.
//!
//! The forward map is realized parametrically as
//! `{((I + U)x, R_Ω⁻¹ R_Q (I − U)x) : x ∈ X}`, so `U = −I` and every
//! other eigenvalue `−1` produce multivalued parts exactly instead of as limits.
//! With Gram matrices `G_Ω`, `G_Q` the maps are `R_Ω = Ḡ_Ω`, `R_Q = Ḡ_Q`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::dense;
use crate::error::{mismatch, Error, Result};
use crate::forms::{Form, FormKind};
use crate::random;
use crate::relations::{classify_symmetry, require_skew_adjoint_index0, Relation};
use crate::scalar::{Scalar, Tolerance};
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct CayleyData<T: Scalar> {
    pub u: DMatrix<T>,
    pub omega: Form<T>,
    /// Reference inner product on `X`.
    pub q: Form<T>,
}

impl<T: Scalar> CayleyData<T> {
    /// `Q` defaults to the Euclidean inner product.
    pub fn new(u: DMatrix<T>, omega: Form<T>) -> Self {
        let q = Form::identity(u.nrows(), omega.tol());
        CayleyData { u, omega, q }
    }

    pub fn with_q(mut self, q: Form<T>) -> Self {
        self.q = q;
        self
    }
}

fn check_inner_product<T: Scalar>(q: &Form<T>, n: usize) -> Result<()> {
    if q.nx() != n || q.ny() != n {
        return Err(mismatch(format!("inner product must be {n}×{n}")));
    }
    if q.kind() != FormKind::Symmetric {
        return Err(Error::KindViolation("reference form must be Hermitian".into()));
    }
    let vals = dense::hermitian_eigenvalues(q.matrix());
    if vals.first().is_some_and(|&v| v <= q.tol().cutoff(q.norm(), n)) {
        return Err(Error::KindViolation("reference form is not positive definite".into()));
    }
    Ok(())
}

fn unitarity_defect<T: Scalar>(u: &DMatrix<T>) -> f64 {
    let n = u.nrows();
    dense::max_abs_entry(&(u.adjoint() * u - DMatrix::<T>::identity(n, n)))
}

/// `R_Ω⁻¹ R_Q = conj(G_Ω⁻¹ G_Q)`.
fn transfer<T: Scalar>(omega: &Form<T>, q: &Form<T>) -> Result<DMatrix<T>> {
    omega.require_nondegenerate()?;
    let inv = dense::inverse(omega.matrix())
        .ok_or_else(|| Error::DegenerateForm("Gram matrix is singular".into()))?;
    Ok(dense::conj(&(inv * q.matrix())))
}

pub fn cayley_forward<T: Scalar>(cd: &CayleyData<T>) -> Result<Relation<T>> {
    let n = cd.u.nrows();
    if cd.u.ncols() != n {
        return Err(Error::NotUnitary("matrix is not square".into()));
    }
    if cd.omega.nx() != n || cd.omega.ny() != n {
        return Err(mismatch(format!("Ω must be {n}×{n}")));
    }
    check_inner_product(&cd.q, n)?;
    let m = transfer(&cd.omega, &cd.q)?;
    let tol = cd.omega.tol();
    let defect = unitarity_defect(&cd.u);
    if !dense::all_finite(&cd.u) || defect > tol.unit_cutoff(n).max(1e-9) {
        return Err(Error::NotUnitary(format!("‖UᴴU − I‖_max = {defect:e}")));
    }
    let id = DMatrix::<T>::identity(n, n);
    let top = &id + &cd.u;
    let bottom = m * (&id - &cd.u);
    Relation::span(n, n, &dense::vstack(n, &[&top, &bottom]), tol)
}

/// Inverse Cayley map. The graph basis `[P; Y]` gives
/// `P = (I + U)Z`, `R_Q⁻¹R_Ω Y = (I − U)Z`, hence `U = (P − S)(P + S)⁻¹`.
pub fn cayley_inverse<T: Scalar>(t: &Relation<T>, omega: &Form<T>, q: &Form<T>) -> Result<DMatrix<T>> {
    let n = t.nx();
    if t.ny() != n || omega.nx() != n || omega.ny() != n {
        return Err(mismatch("Cayley inverse needs square data"));
    }
    check_inner_product(q, n)?;
    omega.require_nondegenerate()?;
    let rep = classify_symmetry(t, omega, T::from_real(-1.0))?;
    if !rep.is_h_selfadjoint {
        return Err(Error::NotSkewAdjoint(format!(
            "dim T = {}, dim T^Ω = {}",
            t.dim(),
            rep.adjoint.dim()
        )));
    }
    let qinv = dense::inverse(q.matrix()).ok_or_else(|| Error::KindViolation("Q is singular".into()))?;
    // R_Q⁻¹ R_Ω = conj(G_Q⁻¹ G_Ω).
    let back = dense::conj(&(qinv * omega.matrix()));
    let p = t.x_block();
    let s = back * t.y_block();
    let sum = &p + &s;
    let sum_inv = dense::inverse(&sum)
        .ok_or_else(|| Error::NotSkewAdjoint("P + S is singular".into()))?;
    let u = (&p - &s) * sum_inv;
    Ok(dense::polar(&u))
}

/// Canonical orthogonal block with exactly `k` eigenvalues `+1`: an extra `−1`
/// when `n − k` is odd, and rotation blocks with angles in `(0, π)`.
fn canonical_block<T: Scalar, R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> DMatrix<T> {
    let mut d = DMatrix::<T>::zeros(n, n);
    for i in 0..k {
        d[(i, i)] = T::one();
    }
    let mut i = k;
    if (n - k) % 2 == 1 {
        d[(i, i)] = -T::one();
        i += 1;
    }
    while i + 1 < n {
        let th: f64 = rng.random_range(0.05..std::f64::consts::PI - 0.05);
        let (s, c) = th.sin_cos();
        d[(i, i)] = T::from_real(c);
        d[(i, i + 1)] = T::from_real(-s);
        d[(i + 1, i)] = T::from_real(s);
        d[(i + 1, i + 1)] = T::from_real(c);
        i += 2;
    }
    d
}

/// Random unitary with a `+1`-eigenspace of dimension exactly `k`.
pub fn random_unitary_with_kernel<T: Scalar, R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<DMatrix<T>> {
    if k > n {
        return Err(Error::InvalidArgument(format!("kernel dimension {k} exceeds {n}")));
    }
    let z: DMatrix<T> = random::haar_unitary(n, rng);
    let d: DMatrix<T> = canonical_block(n, k, rng);
    Ok(dense::polar(&(&z * d * z.adjoint())))
}

/// Random skew-adjoint relation of index 0 with `dim ker = k`.
pub fn random_skew_adjoint<T: Scalar>(n: usize, k: usize, omega: &Form<T>, seed: u64) -> Result<Relation<T>> {
    let mut rng = random::rng(seed);
    random_skew_adjoint_with(n, k, omega, &mut rng)
}

pub fn random_skew_adjoint_with<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    k: usize,
    omega: &Form<T>,
    rng: &mut R,
) -> Result<Relation<T>> {
    let u = random_unitary_with_kernel(n, k, rng)?;
    cayley_forward(&CayleyData::new(u, omega.clone()))
}

/// A sampled path of skew-adjoint relations.
#[derive(Clone, Debug)]
pub struct CayleyPath {
    pub unitaries: Vec<DMatrix<f64>>,
    pub relations: Vec<Relation<f64>>,
    pub ker_dims: Vec<usize>,
    pub parity: u8,
    /// `‖U(1) − U₁‖_max`.
    pub endpoint_defect: f64,
}

/// One block of the normal form of an orthogonal matrix.
#[derive(Clone, Copy, Debug)]
struct RotationBlock {
    start: usize,
    angle: f64,
    size: usize,
}

/// `W = Z diag(R(θ_j), ±1) Zᵀ` for `W ∈ SO(n)`, with pairs of `−1` merged into
/// rotations by `π` and blocks ordered by descending angle.
///
/// For orthogonal `W` the symmetric part `(W + Wᵀ)/2` has eigenvalue `cos θ` on
/// each rotation plane, so its eigenvectors, taken in ascending order, visit the
/// planes by descending angle; a plane is completed by `y ∝ Wx − (xᵀWx)x`.
fn rotation_normal_form(w: &DMatrix<f64>) -> (DMatrix<f64>, Vec<RotationBlock>) {
    let n = w.nrows();
    if n == 0 {
        return (DMatrix::zeros(0, 0), Vec::new());
    }
    let sym = (w + w.transpose()).scale(0.5);
    let (_, vecs) = dense::hermitian_eigen(&sym);
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n);
    let deflate = |v: &DVector<f64>, cols: &[DVector<f64>]| {
        let mut r = v.clone();
        for q in cols {
            let d = q.dot(&r);
            r.axpy(-d, q, 1.0);
        }
        r
    };
    let mut negatives = Vec::new();
    let mut planes = Vec::new();
    let mut fixed = Vec::new();
    let mut consider = |v: DVector<f64>, cols: &mut Vec<DVector<f64>>| {
        let r = deflate(&v, cols);
        let nr = r.norm();
        if nr < 0.5 {
            return;
        }
        let x = r / nr;
        let wx = w * &x;
        let c = x.dot(&wx);
        let y0 = deflate(&(&wx - &x * c), cols);
        let y0 = &y0 - &x * x.dot(&y0);
        let s = y0.norm();
        if s <= 1e-10 {
            if c < 0.0 {
                negatives.push(cols.len());
            } else {
                fixed.push(cols.len());
            }
            cols.push(x);
        } else {
            planes.push((cols.len(), s.atan2(c)));
            cols.push(x);
            cols.push(y0 / s);
        }
    };
    for j in 0..n {
        consider(vecs.column(j).into_owned(), &mut cols);
    }
    // Rounding can leave directions unvisited; complete with the standard basis.
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        consider(DVector::from_fn(n, |i, _| if i == j { 1.0 } else { 0.0 }), &mut cols);
    }
    debug_assert_eq!(cols.len(), n);
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut out = Vec::new();
    for pair in negatives.chunks(2) {
        let start = order.len();
        order.extend_from_slice(pair);
        out.push(RotationBlock {
            start,
            angle: std::f64::consts::PI,
            size: pair.len(),
        });
    }
    planes.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    for &(c, angle) in &planes {
        out.push(RotationBlock {
            start: order.len(),
            angle,
            size: 2,
        });
        order.extend_from_slice(&[c, c + 1]);
    }
    for &c in &fixed {
        out.push(RotationBlock {
            start: order.len(),
            angle: 0.0,
            size: 1,
        });
        order.push(c);
    }
    let zs = DMatrix::from_fn(n, n, |r, c| cols[order[c]][r]);
    (zs, out)
}

fn rotation_at(n: usize, blocks: &[RotationBlock], t: f64) -> DMatrix<f64> {
    let mut r = DMatrix::<f64>::identity(n, n);
    for b in blocks.iter().filter(|b| b.size == 2) {
        let (s, c) = (t * b.angle).sin_cos();
        let i = b.start;
        r[(i, i)] = c;
        r[(i, i + 1)] = -s;
        r[(i + 1, i)] = s;
        r[(i + 1, i + 1)] = c;
    }
    r
}

/// Path of real skew-adjoint relations from `t0` to `t1` through
/// `U(t) = U₀ Z R(tθ) Zᵀ` with `U₀ᵀU₁ = Z R(θ) Zᵀ`.
pub fn connect(t0: &Relation<f64>, t1: &Relation<f64>, omega: &Form<f64>, steps: usize) -> Result<CayleyPath> {
    if steps < 2 {
        return Err(Error::InvalidArgument("a path needs at least 2 samples".into()));
    }
    if t0.nx() != t1.nx() || t0.ny() != t1.ny() {
        return Err(mismatch("endpoints live in different spaces"));
    }
    for t in [t0, t1] {
        require_skew_adjoint_index0(t, omega)
            .map_err(|e| Error::PreconditionViolated(format!("endpoint: {e}")))?;
    }
    let n = t0.nx();
    let (k0, k1) = (t0.ker().dim(), t1.ker().dim());
    if k0 % 2 != k1 % 2 {
        return Err(Error::ParityMismatch(format!("dim ker T0 = {k0}, dim ker T1 = {k1}")));
    }
    let q = Form::identity(n, omega.tol());
    let u0 = cayley_inverse(t0, omega, &q)?;
    let u1 = cayley_inverse(t1, omega, &q)?;
    let w = u0.transpose() * &u1;
    let (z, blocks) = rotation_normal_form(&w);
    let mut unitaries = Vec::with_capacity(steps);
    let mut relations = Vec::with_capacity(steps);
    let mut ker_dims = Vec::with_capacity(steps);
    for s in 0..steps {
        let t = s as f64 / (steps - 1) as f64;
        let u = if s == 0 {
            u0.clone()
        } else if s + 1 == steps {
            u1.clone()
        } else {
            dense::polar(&(&u0 * &z * rotation_at(n, &blocks, t) * z.transpose()))
        };
        let rel = cayley_forward(&CayleyData::new(u.clone(), omega.clone()))?;
        ker_dims.push(rel.ker().dim());
        relations.push(rel);
        unitaries.push(u);
    }
    let end = &u0 * &z * rotation_at(n, &blocks, 1.0) * z.transpose();
    let endpoint_defect = dense::max_abs_entry(&(end - &u1));
    Ok(CayleyPath {
        unitaries,
        relations,
        ker_dims,
        parity: (k0 % 2) as u8,
        endpoint_defect,
    })
}

/// `ker(U − I)` as a subspace.
pub fn fixed_space<T: Scalar>(u: &DMatrix<T>, tol: Tolerance) -> Subspace<T> {
    let n = u.nrows();
    let a = u - DMatrix::<T>::identity(n, n);
    Subspace::from_basis(dense::null_space(&a, tol.unit_cutoff(n)), tol)
}

/// `R_Ω⁻¹ R_Q ker(U + I)`, the predicted multivalued part.
pub fn predicted_mul<T: Scalar>(cd: &CayleyData<T>) -> Result<Subspace<T>> {
    let n = cd.u.nrows();
    let tol = cd.omega.tol();
    let a = &cd.u + DMatrix::<T>::identity(n, n);
    let k = dense::null_space(&a, tol.unit_cutoff(n));
    let m = transfer(&cd.omega, &cd.q)?;
    Subspace::span(&(m * k), tol)
}
