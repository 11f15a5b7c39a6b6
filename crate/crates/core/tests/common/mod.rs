//! Oracles and generators shared by the integration tests and the acceptance
//! harness. The oracles avoid the library's decompositions: bases come from
//! nalgebra QR, extremal values from random search plus hill climbing, and
//! norms from nalgebra's Hermitian eigensolver.
#![allow(dead_code)]

use linrel::experiment::random_nondegenerate;
use linrel::forms::{Form, FormKind, Side};
use linrel::morse::SymmetricPair;
use linrel::random;
use linrel::relations::{classify_symmetry, omega_adjoint, Relation};
use linrel::symplectic::classify_subspace;
use linrel::{Complex64, DMatrix, DVector, Scalar, Subspace, Tolerance};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn tol() -> Tolerance {
    Tolerance::default()
}

/// Orthonormal basis of the column space of a full-column-rank matrix.
pub fn qr_basis(raw: &DMatrix<f64>) -> DMatrix<f64> {
    if raw.ncols() == 0 {
        return DMatrix::zeros(raw.nrows(), 0);
    }
    raw.clone().qr().q().columns(0, raw.ncols()).into_owned()
}

fn unit(v: DVector<f64>) -> DVector<f64> {
    let n = v.norm();
    v / n
}

/// Extremum of `‖A c‖` over unit `c`, by multistart sampling followed by
/// pattern search with shrinking steps on the sphere.
pub fn sphere_extremum(a: &DMatrix<f64>, maximize: bool, rng: &mut ChaCha8Rng) -> f64 {
    let k = a.ncols();
    let f = |c: &DVector<f64>| (a * c).norm() / c.norm();
    let better = |x: f64, y: f64| if maximize { x > y } else { x < y };
    let mut starts: Vec<(f64, DVector<f64>)> = (0..100)
        .map(|_| {
            let c = unit(DVector::from_fn(k, |_, _| rng.sample(rand_distr::StandardNormal)));
            (f(&c), c)
        })
        .collect();
    starts.sort_by(|x, y| if maximize { y.0.total_cmp(&x.0) } else { x.0.total_cmp(&y.0) });
    let mut best = starts[0].0;
    for (mut val, mut c) in starts.into_iter().take(3) {
        let mut step = 0.5;
        while step > 1e-9 {
            let mut moved = false;
            for i in 0..k {
                for sgn in [1.0, -1.0] {
                    let mut trial = c.clone();
                    trial[i] += sgn * step;
                    let trial = unit(trial);
                    let v = f(&trial);
                    if better(v, val) {
                        val = v;
                        c = trial;
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if better(val, best) {
            best = val;
        }
    }
    best
}

/// Sampling oracle for `δ(M, N)`: `sup` over unit `x ∈ M` of `dist(x, N)`.
pub fn oracle_delta(bm: &DMatrix<f64>, bn: &DMatrix<f64>, rng: &mut ChaCha8Rng) -> f64 {
    if bm.ncols() == 0 {
        return 0.0;
    }
    let d = bm.nrows();
    let resid = (DMatrix::identity(d, d) - bn * bn.transpose()) * bm;
    sphere_extremum(&resid, true, rng)
}

/// Sampling oracle for `γ(M, N)`: `inf dist(x, N) / dist(x, M ∩ N)` over
/// `x ∈ M \ N`, i.e. the infimum over unit `x ∈ M ⊖ (M ∩ N)`.
pub fn oracle_gamma(bm: &DMatrix<f64>, bn: &DMatrix<f64>, rng: &mut ChaCha8Rng) -> f64 {
    if bm.ncols() == 0 {
        return 1.0;
    }
    let d = bm.nrows();
    let resid = (DMatrix::identity(d, d) - bn * bn.transpose()) * bm;
    // Coefficients of M ⊖ (M ∩ N): eigenvectors of residᵀresid away from zero.
    let eig = (resid.transpose() * &resid).symmetric_eigen();
    let keep: Vec<usize> = (0..bm.ncols()).filter(|&i| eig.eigenvalues[i] > 1e-12).collect();
    if keep.is_empty() {
        return 1.0;
    }
    let k = DMatrix::from_fn(bm.ncols(), keep.len(), |i, j| eig.eigenvectors[(i, keep[j])]);
    sphere_extremum(&(resid * k), false, rng)
}

/// Pair of raw spanning sets in `ℝ^d`; sometimes with a planted common vector
/// so that intersections occur below the generic dimension.
pub fn random_raw_pair(rng: &mut ChaCha8Rng, max_dim: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let d = rng.random_range(1..=max_dim);
    let km = rng.random_range(0..=d);
    let kn = rng.random_range(0..=d);
    let mut m: DMatrix<f64> = random::gaussian(d, km, rng);
    let mut n: DMatrix<f64> = random::gaussian(d, kn, rng);
    if km > 0 && kn > 0 && rng.random_bool(0.3) {
        let shared: DMatrix<f64> = random::gaussian(d, 1, rng);
        m.set_column(0, &shared.column(0));
        n.set_column(0, &shared.column(0));
    }
    (m, n)
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn herm_norm<T: Scalar>(m: &DMatrix<T>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let h = (m + m.adjoint()).scale(0.5);
    h.symmetric_eigen().eigenvalues.iter().fold(0.0, |a: f64, v| a.max(v.abs()))
}

/// Random Hermitian matrix with spectrum in `[-scale, scale]`.
pub fn random_herm<T: Scalar>(k: usize, scale: f64, rng: &mut ChaCha8Rng) -> DMatrix<T> {
    let eig: Vec<f64> = (0..k).map(|_| rng.random_range(-scale..=scale)).collect();
    let u: DMatrix<T> = random::haar_unitary(k, rng);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(k, eig.iter().map(|&e| T::from_real(e))));
    &u * d * u.adjoint()
}

/// `c`-gap sandwich on `V = W`, `c ≥ ‖Q‖`: returns `(lo, hi, ‖R − Q‖)`.
pub fn sandwich_instance<T: Scalar>(
    rng: &mut ChaCha8Rng,
    samples: usize,
    seed: u64,
) -> (f64, f64, f64) {
    let d = rng.random_range(1..=5);
    let k = rng.random_range(1..=d);
    let v: Subspace<T> = random::subspace(d, k, tol(), rng);
    let qg: DMatrix<T> = random_herm(k, 1.0, rng);
    let rg: DMatrix<T> = &qg + random_herm::<T>(k, rng.random_range(0.01..1.5), rng);
    let qn = herm_norm(&qg);
    let c = qn * rng.random_range(1.0..2.0);
    let q = SymmetricPair::new(v.clone(), qg.clone()).unwrap();
    let r = SymmetricPair::new(v, rg.clone()).unwrap();
    let iv = linrel::morse::c_gap_bounds(&q, &r, c, samples, seed).unwrap();
    (iv.lo, iv.hi, herm_norm(&(rg - qg)))
}

fn random_subspace_of<T: Scalar>(outer: &DMatrix<T>, k: usize, rng: &mut ChaCha8Rng) -> Subspace<T> {
    let c: DMatrix<T> = random::gaussian(outer.ncols(), k, rng);
    Subspace::span(&(outer * c), tol()).unwrap()
}

fn double_annihilator_trial<T: Scalar>(rng: &mut ChaCha8Rng) -> bool {
    let n = rng.random_range(1..=6);
    let k = rng.random_range(0..=n);
    let omega: Form<T> = random_nondegenerate(n, tol(), rng);
    let s: Subspace<T> = random::subspace(n, k, tol(), rng);
    let right = omega.annihilator(&s, Side::Right).unwrap();
    let left = omega.annihilator(&s, Side::Left).unwrap();
    right.dim() == n - k
        && omega.annihilator(&right, Side::Left).unwrap().same_as(&s).unwrap()
        && omega.annihilator(&left, Side::Right).unwrap().same_as(&s).unwrap()
}

/// `(λ^{Ω,r})^{Ω,l} = λ` on random nondegenerate forms, both fields. Returns failures.
pub fn double_annihilator_suite(trials: usize, seed: u64) -> usize {
    (0..trials)
        .filter(|&i| {
            let mut rng = random::trial_rng(seed, i as u64);
            let ok = if i % 2 == 0 {
                double_annihilator_trial::<f64>(&mut rng)
            } else {
                double_annihilator_trial::<Complex64>(&mut rng)
            };
            !ok
        })
        .count()
}

fn adjoint_trial<T: Scalar>(rng: &mut ChaCha8Rng) -> bool {
    let n = rng.random_range(1..=5);
    let k = rng.random_range(0..=2 * n);
    let omega: Form<T> = random_nondegenerate(n, tol(), rng);
    let raw: DMatrix<T> = random::gaussian(2 * n, k, rng);
    let a = Relation::span(n, n, &raw, tol()).unwrap();
    let adj = omega_adjoint(&a, &omega).unwrap();
    let back = omega_adjoint(&adj, &omega).unwrap();
    adj.dim() + a.dim() == 2 * n && back.same_as(&a).unwrap()
}

/// `A^{ΩΩ} = A` and `dim A + dim A^Ω = 2n`. Returns failures.
pub fn adjoint_involution_suite(trials: usize, seed: u64) -> usize {
    (0..trials)
        .filter(|&i| {
            let mut rng = random::trial_rng(seed, i as u64);
            let ok = if i % 2 == 0 {
                adjoint_trial::<f64>(&mut rng)
            } else {
                adjoint_trial::<Complex64>(&mut rng)
            };
            !ok
        })
        .count()
}

/// A random h-symmetric relation: a random subrelation of either a
/// skew-adjoint relation (h = −1, any nondegenerate Ω) or the graph of a
/// Hermitian matrix (h = 1, Ω = I).
pub fn random_h_symmetric<T: Scalar>(rng: &mut ChaCha8Rng) -> (Relation<T>, Form<T>, T) {
    let n = rng.random_range(1..=5);
    let (full, omega, h) = if rng.random_bool(0.5) {
        let omega: Form<T> = random_nondegenerate(n, tol(), rng);
        let k = rng.random_range(0..=n);
        let t = linrel::cayley::random_skew_adjoint_with(n, k, &omega, rng).unwrap();
        (t, omega, T::from_real(-1.0))
    } else {
        let s: DMatrix<T> = random_herm(n, 2.0, rng);
        (Relation::from_operator(&s, tol()).unwrap(), Form::identity(n, tol()), T::from_real(1.0))
    };
    let k = rng.random_range(0..=full.dim());
    let sub = random_subspace_of(full.graph().basis(), k, rng);
    (Relation::from_graph(n, n, sub).unwrap(), omega, h)
}

fn index_trial<T: Scalar>(rng: &mut ChaCha8Rng) -> bool {
    let (a, omega, h) = random_h_symmetric::<T>(rng);
    let rep = classify_symmetry(&a, &omega, h).unwrap();
    rep.is_h_symmetric && a.index_and_parity().index <= 0
}

/// `Index A ≤ 0` for h-symmetric relations. Returns failures.
pub fn index_suite(trials: usize, seed: u64) -> usize {
    (0..trials)
        .filter(|&i| {
            let mut rng = random::trial_rng(seed, i as u64);
            let ok = if i % 2 == 0 {
                index_trial::<f64>(&mut rng)
            } else {
                index_trial::<Complex64>(&mut rng)
            };
            !ok
        })
        .count()
}

/// Real symplectic form `Pᵀ J P` with a well-conditioned random `P`.
pub fn random_real_symplectic(m: usize, rng: &mut ChaCha8Rng) -> (Form<f64>, DMatrix<f64>) {
    let n = 2 * m;
    let j = Form::<f64>::standard_symplectic(m, tol()).matrix().clone();
    let u: DMatrix<f64> = random::haar_unitary(n, rng);
    let w: DMatrix<f64> = random::haar_unitary(n, rng);
    let d = DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| rng.random_range(0.5..2.0)));
    let p = u * d * w;
    let g = p.transpose() * j * &p;
    let g = (&g - g.transpose()).scale(0.5);
    (Form::new(g, FormKind::Skew, tol()).unwrap(), p)
}

/// One trial: returns (isotropic, consistent).
fn lagrangian_trial(rng: &mut ChaCha8Rng) -> (bool, bool) {
    let m = rng.random_range(1..=4);
    let (omega, p) = random_real_symplectic(m, rng);
    let lambda = if rng.random_bool(0.8) {
        // Subspace of P⁻¹{(x, Sx)} with S symmetric: isotropic for Pᵀ J P.
        let s: DMatrix<f64> = random_herm(m, 1.0, rng);
        let mut l = DMatrix::zeros(2 * m, m);
        l.view_mut((0, 0), (m, m)).copy_from(&DMatrix::identity(m, m));
        l.view_mut((m, 0), (m, m)).copy_from(&s);
        let l = p.clone().try_inverse().unwrap() * l;
        let k = rng.random_range(0..=m);
        random_subspace_of(&l, k, rng)
    } else {
        let k = rng.random_range(0..=2 * m);
        random::subspace(2 * m, k, tol(), rng)
    };
    let rep = classify_subspace(&lambda, &omega).unwrap();
    if !rep.isotropic {
        return (false, rep.maximal_isotropic != Some(true) && !rep.lagrangian);
    }
    let lagr = lambda.dim() == m;
    (true, rep.maximal_isotropic == Some(rep.lagrangian) && rep.lagrangian == lagr)
}

/// Over ℝ, maximal isotropic ⇔ Lagrangian. Returns (isotropic instances, failures).
pub fn lagrangian_suite(trials: usize, seed: u64) -> (usize, usize) {
    let mut iso = 0;
    let mut fails = 0;
    for i in 0..trials {
        let mut rng = random::trial_rng(seed, i as u64);
        let (is_iso, ok) = lagrangian_trial(&mut rng);
        iso += is_iso as usize;
        fails += !ok as usize;
    }
    (iso, fails)
}
