//! Certifiers for the perturbation theorems and the mod-2 experiments.
//!
//! Every checker re-verifies its own preconditions and reports
//! `PreconditionViolated` when they fail. A certified hypothesis whose
//! conclusion then fails is a counterexample, which would indicate a bug.
//! Operator norms of `L_ω` are spectral norms of the Gram matrix.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::cayley::{cayley_forward, cayley_inverse, CayleyData};
use crate::dense;
use crate::error::{mismatch, Error, Result};
use crate::forms::{Form, FormKind};
use crate::random;
use crate::relations::{require_skew_adjoint_index0, Relation};
use crate::scalar::{Scalar, Tolerance};
use crate::subspace::{hat_delta, Subspace};
use crate::symplectic::{classify_subspace, IsotropicReport};

#[derive(Clone, Debug)]
pub struct StabilityReport {
    /// Named hypothesis quantities in a fixed order.
    pub quantities: Vec<(&'static str, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub hypothesis_certified: bool,
    /// The conclusion evaluated regardless of the hypothesis.
    pub conclusion_observed: bool,
    /// Certified and the conclusion holds.
    pub conclusion_checked: bool,
    pub lambda_report: IsotropicReport,
    pub mu_report: IsotropicReport,
}

impl StabilityReport {
    pub fn is_counterexample(&self) -> bool {
        self.hypothesis_certified && !self.conclusion_checked
    }

    pub fn quantity(&self, key: &str) -> Option<f64> {
        self.quantities.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HessKatoReport {
    pub product: f64,
    pub passes: bool,
    pub dims_equal: bool,
}

impl HessKatoReport {
    pub fn is_counterexample(&self) -> bool {
        self.passes && !self.dims_equal
    }
}

pub fn hess_kato_check<T: Scalar>(m: &Subspace<T>, n: &Subspace<T>, n_prime: &Subspace<T>) -> Result<HessKatoReport> {
    if !n.contains(n_prime)? {
        return Err(Error::NotNested("N' ⊄ N".into()));
    }
    let product = (1.0 + n.directed_gap(m)?) * (1.0 + m.directed_gap(n_prime)?);
    // A product within rounding of 2 is not certified.
    let band = m.tol().max(n.tol()).unit_cutoff(m.ambient_dim());
    Ok(HessKatoReport {
        product,
        passes: product < 2.0 - band,
        dims_equal: n_prime.dim() == n.dim(),
    })
}

fn form_distance<T: Scalar>(a: &Form<T>, b: &Form<T>) -> Result<f64> {
    if a.matrix().shape() != b.matrix().shape() {
        return Err(mismatch("forms act on different spaces"));
    }
    Ok(dense::spectral_norm(&(a.matrix() - b.matrix())))
}

/// Checks the base hypothesis and returns `(report, h, γ)`.
fn base_hypothesis<T: Scalar>(lambda: &Subspace<T>, omega0: &Form<T>) -> Result<(IsotropicReport, i8, f64)> {
    let rep = classify_subspace(lambda, omega0)?;
    if rep.maximal_isotropic != Some(true) {
        return Err(Error::PreconditionViolated("λ is not maximal isotropic for ω₀".into()));
    }
    let h = rep.h_lambda.expect("maximal isotropic has a sign");
    let gamma = rep.gamma_lambda.unwrap_or(0.0);
    if h != 0 && gamma <= 0.0 {
        return Err(Error::PreconditionViolated("γ_λ = 0 with h_λ ≠ 0".into()));
    }
    Ok((rep, h, gamma))
}

fn mu_hypothesis<T: Scalar>(mu: &Subspace<T>, omega: &Form<T>) -> Result<IsotropicReport> {
    let rep = classify_subspace(mu, omega)?;
    if !rep.isotropic {
        return Err(Error::PreconditionViolated("μ is not isotropic for ω".into()));
    }
    Ok(rep)
}

fn conclusion(h_lambda: i8, mu: &IsotropicReport) -> bool {
    mu.maximal_isotropic == Some(true) && matches!(mu.h_lambda, Some(h) if h == h_lambda || h == 0)
}

fn ratio(d: f64) -> f64 {
    (1.0 - d) / (1.0 + d)
}

pub fn max_isotropic_stability<T: Scalar>(
    lambda: &Subspace<T>,
    omega0: &Form<T>,
    mu: &Subspace<T>,
    omega: &Form<T>,
) -> Result<StabilityReport> {
    let (lambda_report, h, gamma) = base_hypothesis(lambda, omega0)?;
    let mu_report = mu_hypothesis(mu, omega)?;
    let dl = form_distance(omega, omega0)?;
    let nl0 = omega0.norm();
    let delta1 = omega.omega_perp(mu)?.directed_gap(&omega0.omega_perp(lambda)?)?;
    let dlm = lambda.directed_gap(mu)?;
    let l = if h == 0 {
        0.0
    } else {
        ((dl + nl0 * delta1 * (2.0 + delta1)) / gamma).sqrt()
    };
    let lhs = delta1 + l;
    let rhs = ratio(dlm);
    let hypothesis_certified = lhs < rhs;
    let observed = conclusion(h, &mu_report);
    Ok(StabilityReport {
        quantities: vec![
            ("h_lambda", h as f64),
            ("gamma_lambda", gamma),
            ("delta_mu_perp_lambda_perp", delta1),
            ("delta_lambda_mu", dlm),
            ("form_delta", dl),
            ("form_norm", nl0),
            ("l", l),
        ],
        lhs,
        rhs,
        hypothesis_certified,
        conclusion_observed: observed,
        conclusion_checked: hypothesis_certified && observed,
        lambda_report,
        mu_report,
    })
}

pub fn strong_stability<T: Scalar>(
    lambda: &Subspace<T>,
    omega0: &Form<T>,
    mu: &Subspace<T>,
    omega: &Form<T>,
) -> Result<StabilityReport> {
    omega0
        .require_nondegenerate()
        .map_err(|e| Error::PreconditionViolated(format!("ω₀: {e}")))?;
    let (lambda_report, h, gamma) = base_hypothesis(lambda, omega0)?;
    let mu_report = mu_hypothesis(mu, omega)?;
    let nd = omega0.nondegeneracy();
    let inv_norm = 1.0 / nd.sigma_min;
    let nl0 = nd.sigma_max;
    let dl = form_distance(omega, omega0)?;
    let a = inv_norm * nl0;
    let b = inv_norm * dl;
    let dlm = lambda.directed_gap(mu)?;
    let f = b + (a + b) * dlm;
    let g = if h == 0 {
        0.0
    } else {
        ((dl + nl0 * f * (2.0 + f)) / gamma).sqrt()
    };
    let lhs = f + g;
    let rhs = ratio(dlm);
    let hypothesis_certified = lhs < rhs;
    let observed = conclusion(h, &mu_report);
    Ok(StabilityReport {
        quantities: vec![
            ("h_lambda", h as f64),
            ("gamma_lambda", gamma),
            ("a", a),
            ("b", b),
            ("delta_lambda_mu", dlm),
            ("f", f),
            ("g", g),
        ],
        lhs,
        rhs,
        hypothesis_certified,
        conclusion_observed: observed,
        conclusion_checked: hypothesis_certified && observed,
        lambda_report,
        mu_report,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorGapReport {
    pub c_norm: f64,
    pub bound_a: f64,
    pub observed: f64,
    pub holds: bool,
    /// `‖B⁻¹‖(‖A − B‖ + ‖A‖ δ(AM, BN))` against `δ(M, N)`, when `B` is injective.
    pub reverse: Option<(f64, f64, bool)>,
}

pub fn operator_gap_bounds<T: Scalar>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    m: &Subspace<T>,
    n: &Subspace<T>,
) -> Result<OperatorGapReport> {
    if a.shape() != b.shape() || a.ncols() != m.ambient_dim() || m.ambient_dim() != n.ambient_dim() {
        return Err(mismatch("operators and subspaces do not match"));
    }
    let tol = m.tol().max(n.tol());
    let am = a * m.basis();
    let c_norm = if m.dim() == 0 {
        0.0
    } else {
        let s = dense::singular_values(&am);
        let smin = if s.len() < m.dim() { 0.0 } else { s[s.len() - 1] };
        if smin <= tol.cutoff(dense::spectral_norm(a), a.nrows().max(a.ncols())) {
            return Err(Error::SingularRestriction(format!("σ_min(A|M) = {smin:e}")));
        }
        1.0 / smin
    };
    let diff = dense::spectral_norm(&(a - b));
    let (na, nb) = (dense::spectral_norm(a), dense::spectral_norm(b));
    let dmn = m.directed_gap(n)?;
    let img_m = m.image(a)?;
    let img_n = n.image(b)?;
    let observed = img_m.directed_gap(&img_n)?;
    let bound_a = c_norm * (diff + nb * dmn);
    let slack = tol.unit_cutoff(a.nrows());
    let sb = dense::singular_values(b);
    let reverse = if b.nrows() >= b.ncols()
        && sb.len() == b.ncols()
        && sb.last().is_some_and(|&s| s > tol.cutoff(nb, b.nrows()))
    {
        let binv = 1.0 / sb[sb.len() - 1];
        let rb = binv * (diff + na * observed);
        Some((rb, dmn, dmn <= rb + slack))
    } else {
        None
    };
    Ok(OperatorGapReport {
        c_norm,
        bound_a,
        observed,
        holds: observed <= bound_a + slack,
        reverse,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMethod {
    /// `‖T − S‖ ≤ a`.
    Norm,
    /// `(T−S)ᴴ(T−S) ⪯ a² + b'² TᴴT + b''² SᴴS`.
    Quadratic,
    /// No sphere sample violated the bound.
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilReport {
    pub method: BoundMethod,
    pub bound: f64,
    pub observed: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilParams {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub kappa: f64,
    pub kappa_prime: f64,
}

/// `T(κ) = T + κ(S − T)`.
pub fn pencil_at<T: Scalar>(t: &DMatrix<T>, s: &DMatrix<T>, kappa: f64) -> DMatrix<T> {
    t + (s - t) * T::from_real(kappa)
}

fn verify_relative_bound<T: Scalar>(
    t: &DMatrix<T>,
    s: &DMatrix<T>,
    p: &PencilParams,
    samples: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<BoundMethod> {
    let d = t - s;
    let nd = dense::spectral_norm(&d);
    let scale = dense::spectral_norm(t).max(dense::spectral_norm(s)).max(1.0);
    let slack = tol.cutoff(scale, t.ncols());
    if nd <= p.a + slack {
        return Ok(BoundMethod::Norm);
    }
    let gram = DMatrix::<T>::identity(t.ncols(), t.ncols()) * T::from_real(p.a * p.a)
        + t.adjoint() * t * T::from_real(p.b1 * p.b1)
        + s.adjoint() * s * T::from_real(p.b2 * p.b2)
        - d.adjoint() * &d;
    let vals = dense::hermitian_eigenvalues(&gram);
    if vals.first().is_none_or(|&v| v >= -slack * scale) {
        return Ok(BoundMethod::Quadratic);
    }
    let full = Subspace::<T>::full(t.ncols(), tol);
    let mut rng = random::rng(seed);
    for _ in 0..samples {
        let x = full.sample_unit(&mut rng);
        let lhs = (&d * &x).norm();
        let rhs = p.a + p.b1 * (t * &x).norm() + p.b2 * (s * &x).norm();
        if lhs > rhs + slack {
            return Err(Error::RelativeBoundUnverified(format!(
                "‖(T−S)x‖ = {lhs:e} exceeds {rhs:e} at a sampled point"
            )));
        }
    }
    // The sampled minimizer direction of the quadratic test is checked too.
    let (_, vecs) = dense::hermitian_eigen(&gram);
    let x = vecs.column(0).map(|z| z.conjugate());
    let lhs = (&d * &x).norm();
    let rhs = p.a + p.b1 * (t * &x).norm() + p.b2 * (s * &x).norm();
    if lhs > rhs + slack {
        return Err(Error::RelativeBoundUnverified(format!(
            "‖(T−S)x‖ = {lhs:e} exceeds {rhs:e} along the extremal direction"
        )));
    }
    Ok(BoundMethod::Sampled)
}

pub fn pencil_gap_bound<T: Scalar>(
    t: &DMatrix<T>,
    s: &DMatrix<T>,
    p: &PencilParams,
    samples: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<PencilReport> {
    if t.shape() != s.shape() {
        return Err(mismatch("pencil endpoints differ in shape"));
    }
    for v in [p.a, p.b1, p.b2] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidArgument(format!("constants must be nonnegative, got {v}")));
        }
    }
    let b = p.b1.max(p.b2);
    let dk = (p.kappa_prime - p.kappa).abs();
    if b >= 1.0 {
        return Err(Error::RelativeBoundUnverified(format!("b = {b} is not below 1")));
    }
    if dk * (p.b1 + p.b2) >= 1.0 - b {
        return Err(Error::RelativeBoundUnverified("|κ' − κ|(b' + b'') ≥ 1 − b".into()));
    }
    let method = verify_relative_bound(t, s, p, samples, seed, tol)?;
    let bound = dk * (p.a * p.a + (p.b1 + p.b2).powi(2)).sqrt() / (1.0 - b - dk * (p.b1 + p.b2));
    let g1 = Relation::from_operator(&pencil_at(t, s, p.kappa_prime), tol)?;
    let g0 = Relation::from_operator(&pencil_at(t, s, p.kappa), tol)?;
    let observed = hat_delta(g1.graph(), g0.graph())?;
    Ok(PencilReport {
        method,
        bound,
        observed,
        holds: observed <= bound + tol.unit_cutoff(t.nrows() + t.ncols()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Perturbation {
    pub form_delta_norm: f64,
    pub relation_delta_norm: f64,
}

impl Perturbation {
    /// Requested bound on `δ̂(S, T) + ‖L_Ω − L_Ω₀‖`.
    pub fn level(&self) -> f64 {
        self.form_delta_norm + self.relation_delta_norm
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mod2Report {
    pub base_ker_dim: usize,
    pub base_parity: u8,
    pub trials: usize,
    pub violations: usize,
    pub path_violations: usize,
    /// `min(level − δ̂(S, T) − ‖L_Ω − L_Ω₀‖)` over accepted samples.
    pub min_observed_margin: f64,
    pub max_observed_distance: f64,
}

struct Mod2Sample {
    ker_dim: usize,
    distance: f64,
    path_ok: bool,
}

const PATH_STEPS: usize = 8;
const MAX_HALVINGS: usize = 40;

fn mod2_trial<R: Rng + ?Sized>(
    t: &Relation<f64>,
    omega0: &Form<f64>,
    u0: &DMatrix<f64>,
    pert: &Perturbation,
    rng: &mut R,
) -> Result<Mod2Sample> {
    let n = t.nx();
    let level = pert.level();
    let mut k: DMatrix<f64> = random::skew_hermitian(n, rng);
    let kn = dense::spectral_norm(&k);
    if kn > 0.0 {
        k /= kn;
    }
    k *= pert.relation_delta_norm * rng.random_range(0.0..1.0);
    let e: DMatrix<f64> = random::with_norm(n, n, pert.form_delta_norm * rng.random_range(0.0..1.0), rng);
    let build = |s: f64| -> Result<(Relation<f64>, Form<f64>, f64)> {
        let omega = Form::new(omega0.matrix() + &e * s, FormKind::General, omega0.tol())?;
        let u = dense::polar(&(u0 * (&k * s).exp()));
        let rel = cayley_forward(&CayleyData::new(u, omega.clone()))?;
        let dist = hat_delta(rel.graph(), t.graph())? + dense::spectral_norm(&(&e * s));
        Ok((rel, omega, dist))
    };
    let mut scale = 1.0;
    let mut sample = build(scale)?;
    let mut halvings = 0;
    while sample.2 >= level && level > 0.0 {
        halvings += 1;
        if halvings > MAX_HALVINGS {
            return Err(Error::PreconditionViolated("could not meet the perturbation level".into()));
        }
        scale *= 0.5;
        sample = build(scale)?;
    }
    if level == 0.0 {
        scale = 0.0;
        sample = build(0.0)?;
    }
    let (s_rel, s_omega, distance) = sample;
    require_skew_adjoint_index0(&s_rel, &s_omega)
        .map_err(|e| Error::PreconditionViolated(format!("perturbed relation: {e}")))?;
    let base = t.ker().dim() % 2;
    let mut path_ok = true;
    for j in 0..=PATH_STEPS {
        let (r, _, _) = build(scale * j as f64 / PATH_STEPS as f64)?;
        if r.ker().dim() % 2 != base {
            path_ok = false;
        }
    }
    Ok(Mod2Sample {
        ker_dim: s_rel.ker().dim(),
        distance,
        path_ok,
    })
}

pub fn mod2_experiment(
    t: &Relation<f64>,
    omega0: &Form<f64>,
    pert: &Perturbation,
    trials: usize,
    seed: u64,
) -> Result<Mod2Report> {
    require_skew_adjoint_index0(t, omega0).map_err(|e| Error::PreconditionViolated(format!("base relation: {e}")))?;
    for v in [pert.form_delta_norm, pert.relation_delta_norm] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidArgument(format!("perturbation norms must be nonnegative, got {v}")));
        }
    }
    let n = t.nx();
    let q = Form::identity(n, omega0.tol());
    let u0 = cayley_inverse(t, omega0, &q)?;
    let samples: Vec<Mod2Sample> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::trial_rng(seed, i);
            mod2_trial(t, omega0, &u0, pert, &mut rng)
        })
        .collect::<Result<_>>()?;
    let base = t.ker().dim();
    let level = pert.level();
    Ok(Mod2Report {
        base_ker_dim: base,
        base_parity: (base % 2) as u8,
        trials,
        violations: samples.iter().filter(|s| s.ker_dim % 2 != base % 2).count(),
        path_violations: samples.iter().filter(|s| !s.path_ok).count(),
        min_observed_margin: samples.iter().map(|s| level - s.distance).fold(level, f64::min),
        max_observed_distance: samples.iter().map(|s| s.distance).fold(0.0, f64::max),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub trials: usize,
    pub nondegenerate: usize,
    /// Nondegenerate skew extensions by an odd number of dimensions.
    pub violations: usize,
}

/// Random skew extensions of a symplectic form on `ℝ^{2m}` to `ℝ^{2m+n}`:
/// a nondegenerate one should exist only for even `n`.
pub fn symplectic_extension_check(m: usize, n: usize, trials: usize, seed: u64, tol: Tolerance) -> ExtensionReport {
    let d = 2 * m + n;
    let found: Vec<bool> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::trial_rng(seed, i);
            let mut w: DMatrix<f64> = random::skew_hermitian(d, &mut rng);
            let base = Form::<f64>::standard_symplectic(m, tol);
            w.view_mut((0, 0), (2 * m, 2 * m)).copy_from(base.matrix());
            Form::new(w, FormKind::Skew, tol).is_ok_and(|f| f.is_nondegenerate())
        })
        .collect();
    let nondegenerate = found.iter().filter(|&&b| b).count();
    ExtensionReport {
        trials,
        nondegenerate,
        violations: if n % 2 == 1 { nondegenerate } else { 0 },
    }
}
