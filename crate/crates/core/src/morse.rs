//! Bounded symmetric pairs `(Q, V)`, Morse indices, the c-gap and the Witt
//! parity identity.
//!
//! A pair is stored by the Gram matrix of `Q` on an orthonormal basis of `V`,
//! so `‖Q‖` is the largest eigenvalue modulus and, for semidefinite `Q`,
//! `γ(Q)` is the smallest nonzero eigenvalue modulus: `dist(x, V^Q)` is the
//! norm of the component of `x` orthogonal to the kernel.
//!
//! The c-gap `δ_c(Q, R)` is an infimum over a universally quantified
//! inequality. It is returned as an interval: a certified upper bound from the
//! range and sandwich estimates, and a lower bound from explicit quadruples
//! `(x, y, u, v)` that violate the inequality for every smaller `δ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::dense;
use crate::error::{mismatch, Error, Result};
use crate::forms::Form;
use crate::random;
use crate::relations::{associated_form, classify_symmetry, Relation};
use crate::scalar::Scalar;
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct SymmetricPair<T: Scalar> {
    v: Subspace<T>,
    gram: DMatrix<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairStats {
    pub norm: f64,
    pub m_plus: usize,
    pub m_minus: usize,
    pub m_zero: usize,
    /// Defined only for semidefinite forms.
    pub gamma: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpperRule {
    /// `V = W` and `c ≥ ‖Q‖`: `δ_c ≤ ‖R − Q‖`.
    SameDomain,
    /// `δ_c ≤ max(‖Q‖, ‖R‖)`.
    Range,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CGapInterval {
    pub lo: f64,
    pub hi: f64,
    pub rule: UpperRule,
    /// `‖R − Q‖` when the domains agree.
    pub diff_norm: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MorseCertificate {
    pub k: usize,
    pub gamma_alpha: f64,
    pub delta_c_upper: f64,
    pub delta_vw: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub hypothesis_certified: bool,
    pub m_plus_hr: usize,
    /// The conclusion `m⁺(hR) ≥ k` was checked and holds.
    pub conclusion_checked: bool,
}

impl MorseCertificate {
    pub fn is_counterexample(&self) -> bool {
        self.hypothesis_certified && !self.conclusion_checked
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WittReport {
    pub dom_dim: usize,
    pub m_minus_iq: usize,
    pub ker_q_dim: usize,
    pub ker_t_dim: usize,
    pub identity_holds: bool,
    /// `dim dom T ≡ dim ker T (mod 2)`.
    pub parity_consistent: bool,
}

impl<T: Scalar> SymmetricPair<T> {
    /// Pair from a Gram matrix on the orthonormal basis of `v`.
    pub fn new(v: Subspace<T>, gram: DMatrix<T>) -> Result<Self> {
        if gram.shape() != (v.dim(), v.dim()) {
            return Err(mismatch(format!(
                "Gram is {}×{}, domain has dimension {}",
                gram.nrows(),
                gram.ncols(),
                v.dim()
            )));
        }
        if !dense::all_finite(&gram) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let scale = dense::max_abs_entry(&gram);
        let defect = dense::max_abs_entry(&(&gram - gram.adjoint()));
        let cut = v.tol().cutoff(scale, v.dim()).max(64.0 * f64::EPSILON * scale);
        if defect > cut {
            return Err(Error::KindViolation(format!("Gram is not Hermitian (defect {defect:e})")));
        }
        let gram = (&gram + gram.adjoint()).scale(0.5);
        Ok(SymmetricPair { v, gram })
    }

    /// Restriction to `v` of the ambient form `Q(x, y) = xᵀ q ȳ`.
    pub fn from_ambient(v: Subspace<T>, q: &DMatrix<T>) -> Result<Self> {
        if q.shape() != (v.ambient_dim(), v.ambient_dim()) {
            return Err(mismatch("ambient Gram must be d×d"));
        }
        let b = v.basis();
        let gram = b.transpose() * q * dense::conj(b);
        SymmetricPair::new(v, gram)
    }

    pub fn domain(&self) -> &Subspace<T> {
        &self.v
    }

    pub fn gram(&self) -> &DMatrix<T> {
        &self.gram
    }

    pub fn ambient_dim(&self) -> usize {
        self.v.ambient_dim()
    }

    /// `Q(x, y)` for `x, y ∈ V` in ambient coordinates.
    pub fn eval(&self, x: &DVector<T>, y: &DVector<T>) -> T {
        let b = self.v.basis();
        let cx = b.adjoint() * x;
        let cy = b.adjoint() * y;
        (cx.transpose() * &self.gram * cy.map(|z| z.conjugate()))[(0, 0)]
    }

    pub fn scale(&self, h: f64) -> Self {
        SymmetricPair {
            v: self.v.clone(),
            gram: self.gram.scale(h),
        }
    }

    /// Restriction to a subspace `m ⊆ V`.
    pub fn restrict(&self, m: &Subspace<T>) -> Result<Self> {
        if m.ambient_dim() != self.ambient_dim() {
            return Err(mismatch("restriction subspace lives elsewhere"));
        }
        if !self.v.contains(m)? {
            return Err(Error::NotNested("restriction subspace is not inside the domain".into()));
        }
        let c = self.v.basis().adjoint() * m.basis();
        let gram = c.transpose() * &self.gram * dense::conj(&c);
        SymmetricPair::new(m.clone(), gram)
    }

    /// Gram of this form re-expressed on the basis of `w`, assuming `w = V`.
    fn on_basis_of(&self, w: &Subspace<T>) -> DMatrix<T> {
        // x = B_W a = B_V (C a) with C = B_Vᴴ B_W.
        let c = self.v.basis().adjoint() * w.basis();
        c.transpose() * &self.gram * dense::conj(&c)
    }

    fn eigenvalues(&self) -> Vec<f64> {
        dense::hermitian_eigenvalues(&self.gram)
    }

    /// `‖Q‖` (0 on the zero space).
    pub fn norm(&self) -> f64 {
        self.eigenvalues().iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn stats(&self) -> PairStats {
        let vals = self.eigenvalues();
        let norm = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let cut = self.v.tol().cutoff(norm, vals.len());
        let inr = dense::inertia(&vals, cut);
        let gamma = if inr.pos > 0 && inr.neg > 0 {
            None
        } else {
            Some(
                vals.iter()
                    .map(|v| v.abs())
                    .filter(|&a| a > cut)
                    .fold(f64::INFINITY, f64::min),
            )
            .map(|g| if g.is_finite() { g } else { 0.0 })
        };
        PairStats {
            norm,
            m_plus: inr.pos,
            m_minus: inr.neg,
            m_zero: inr.zero,
            gamma,
        }
    }
}

pub fn pair_stats<T: Scalar>(p: &SymmetricPair<T>) -> PairStats {
    p.stats()
}

/// Right-hand side of the c-gap inequality without the `δ` term, and the
/// `δ` coefficient, for one quadruple.
fn quadruple_violation<T: Scalar>(
    q: &SymmetricPair<T>,
    r: &SymmetricPair<T>,
    c: f64,
    x: &DVector<T>,
    y: &DVector<T>,
    u: &DVector<T>,
    v: &DVector<T>,
) -> f64 {
    let (nx, ny, nu, nv) = (x.norm(), y.norm(), u.norm(), v.norm());
    let coef = (nu + nx) * (nv + ny);
    if coef <= 0.0 {
        return 0.0;
    }
    let lhs = (q.eval(x, y) - r.eval(u, v)).modulus();
    let slack = c * ((nu + nx) * (v - y).norm() + (u - x).norm() * (nv + ny));
    (lhs - slack) / coef
}

fn top_eigvec<T: Scalar>(gram: &DMatrix<T>, basis: &DMatrix<T>) -> Option<DVector<T>> {
    if gram.nrows() == 0 {
        return None;
    }
    let (vals, vecs) = dense::hermitian_eigen(gram);
    let (mut best, mut idx) = (-1.0, 0);
    for (i, v) in vals.iter().enumerate() {
        if v.abs() > best {
            best = v.abs();
            idx = i;
        }
    }
    // The eigenvector of the coefficient-space matrix gramᵀ = conj(gram) is the conjugate.
    let c = vecs.column(idx).map(|z| z.conjugate());
    Some(basis * c)
}

/// Certified upper bound for `δ_c(Q, R)` and the rule used.
pub fn c_gap_upper<T: Scalar>(q: &SymmetricPair<T>, r: &SymmetricPair<T>, c: f64) -> Result<(f64, UpperRule, Option<f64>)> {
    if q.ambient_dim() != r.ambient_dim() {
        return Err(mismatch("pairs live in different spaces"));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("c must be finite and nonnegative, got {c}")));
    }
    let nq = q.norm();
    let nr = r.norm();
    let same = q.domain().same_as(r.domain())?;
    let slack = q.domain().tol().cutoff(nq, q.domain().dim());
    if same && c + slack >= nq {
        let rg = r.on_basis_of(q.domain());
        let d = &rg - q.gram();
        let dn = dense::hermitian_eigenvalues(&d).iter().map(|v| v.abs()).fold(0.0, f64::max);
        return Ok((dn, UpperRule::SameDomain, Some(dn)));
    }
    let diff = if same {
        let rg = r.on_basis_of(q.domain());
        Some(dense::hermitian_eigenvalues(&(&rg - q.gram())).iter().map(|v| v.abs()).fold(0.0, f64::max))
    } else {
        None
    };
    Ok((nq.max(nr), UpperRule::Range, diff))
}

pub fn c_gap_bounds<T: Scalar>(
    q: &SymmetricPair<T>,
    r: &SymmetricPair<T>,
    c: f64,
    samples: usize,
    seed: u64,
) -> Result<CGapInterval> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let (hi, rule, diff_norm) = c_gap_upper(q, r, c)?;
    let d = q.ambient_dim();
    let zero = DVector::<T>::zeros(d);
    let mut lo: f64 = 0.0;
    let mut consider = |x: &DVector<T>, y: &DVector<T>, u: &DVector<T>, v: &DVector<T>| {
        lo = lo.max(quadruple_violation(q, r, c, x, y, u, v));
    };

    // Structured candidates: top directions of Q and R against zero, and the
    // top direction of R − Q on the common part of the domains.
    if let Some(e) = top_eigvec(q.gram(), q.domain().basis()) {
        consider(&e, &e, &zero, &zero);
    }
    if let Some(f) = top_eigvec(r.gram(), r.domain().basis()) {
        consider(&zero, &zero, &f, &f);
    }
    let common = q.domain().intersect(r.domain())?;
    if common.dim() > 0 {
        let qc = q.restrict(&common)?;
        let rc = r.restrict(&common)?;
        let diff = rc.gram() - qc.gram();
        if let Some(g) = top_eigvec(&diff, common.basis()) {
            consider(&g, &g, &g, &g);
        }
    }

    let mut rng = random::rng(seed);
    let (vz, wz) = (q.domain().dim() == 0, r.domain().dim() == 0);
    if vz && wz {
        return Ok(CGapInterval { lo: 0.0, hi, rule, diff_norm });
    }
    for i in 0..samples {
        if vz {
            let u = r.domain().sample_unit(&mut rng);
            consider(&zero, &zero, &u, &u);
            continue;
        }
        let x = q.domain().sample_unit(&mut rng);
        let y = q.domain().sample_unit(&mut rng);
        if wz {
            consider(&x, &y, &zero, &zero);
            consider(&x, &x, &zero, &zero);
            continue;
        }
        let (u, v) = match i % 3 {
            // Independent directions.
            0 => (r.domain().sample_unit(&mut rng), r.domain().sample_unit(&mut rng)),
            // Nearest points of W, scaled.
            1 => {
                let pu = r.domain().basis() * (r.domain().basis().adjoint() * &x);
                let pv = r.domain().basis() * (r.domain().basis().adjoint() * &y);
                (pu, pv)
            }
            // Nearby points of W with random amplitude.
            _ => {
                let t: f64 = rng.random_range(0.0..2.0);
                let pu = r.domain().basis() * (r.domain().basis().adjoint() * &x) * T::from_real(t);
                (pu.clone(), pu)
            }
        };
        consider(&x, &y, &u, &v);
        consider(&x, &x, &u, &u);
    }
    Ok(CGapInterval {
        lo: lo.min(hi),
        hi,
        rule,
        diff_norm,
    })
}

pub fn perturbed_morse_certify<T: Scalar>(
    q: &SymmetricPair<T>,
    r: &SymmetricPair<T>,
    c: f64,
    alpha: &Subspace<T>,
    h: f64,
) -> Result<MorseCertificate> {
    if h != 1.0 && h != -1.0 {
        return Err(Error::InvalidScalar(format!("h must be ±1, got {h}")));
    }
    let k = alpha.dim();
    if k == 0 {
        return Err(Error::PreconditionViolated("α must be nonzero".into()));
    }
    let qa = q
        .restrict(alpha)
        .map_err(|e| Error::PreconditionViolated(format!("α ⊄ V: {e}")))?
        .scale(h);
    let vals = dense::hermitian_eigenvalues(qa.gram());
    let gamma_alpha = vals[0];
    let cut = q.domain().tol().cutoff(q.norm(), k);
    if gamma_alpha <= cut {
        return Err(Error::PreconditionViolated(format!(
            "h·Q|α is not positive definite (smallest eigenvalue {gamma_alpha:e})"
        )));
    }
    let (upper, _, _) = c_gap_upper(q, r, c)?;
    let delta_vw = q.domain().directed_gap(r.domain())?;
    let lhs = k as f64 * (upper + 2.0 * c * delta_vw) * (2.0 + delta_vw);
    let rhs = gamma_alpha;
    let hypothesis_certified = lhs < rhs;
    let m_plus_hr = r.scale(h).stats().m_plus;
    Ok(MorseCertificate {
        k,
        gamma_alpha,
        delta_c_upper: upper,
        delta_vw,
        lhs,
        rhs,
        hypothesis_certified,
        m_plus_hr,
        conclusion_checked: hypothesis_certified && m_plus_hr >= k,
    })
}

/// `dim dom T = 2 m⁻(i Q_T) + dim ker Q_T` for a skew-adjoint real relation.
pub fn witt_parity(t: &Relation<f64>, omega: &Form<f64>) -> Result<WittReport> {
    let sym = classify_symmetry(t, omega, -1.0)?;
    if !sym.is_h_selfadjoint {
        return Err(Error::NotSkewAdjoint(format!(
            "T^Ω has dimension {} versus {}",
            sym.adjoint.dim(),
            t.dim()
        )));
    }
    let q = associated_form(t, omega)?;
    let dom_dim = q.domain.dim();
    let scale = omega.norm();
    let tol = t.tol().max(omega.tol());
    let cut = tol.cutoff(scale.max(dense::max_abs_entry(&q.gram)), dom_dim);
    // i·Q_T is Hermitian because Q_T is real skew.
    let iq = q.gram.map(|z| Complex64::new(0.0, z));
    let vals = dense::hermitian_eigenvalues(&iq);
    let m_minus_iq = vals.iter().filter(|&&v| v < -cut).count();
    // Kernel dimension from an independent rank computation on the real Gram.
    let rank = dense::singular_values(&q.gram).iter().filter(|&&s| s > cut).count();
    let ker_q_dim = dom_dim - rank;
    let ker_t_dim = t.ker().dim();
    Ok(WittReport {
        dom_dim,
        m_minus_iq,
        ker_q_dim,
        ker_t_dim,
        identity_holds: dom_dim == 2 * m_minus_iq + ker_q_dim,
        parity_consistent: (dom_dim + ker_t_dim) % 2 == 0,
    })
}

/// Pair on `V` with the given eigenvalues along a random orthonormal frame.
pub fn random_pair<T: Scalar, R: Rng + ?Sized>(v: Subspace<T>, eig: &[f64], rng: &mut R) -> SymmetricPair<T> {
    let k = v.dim();
    assert_eq!(eig.len(), k);
    let u: DMatrix<T> = random::haar_unitary(k, rng);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(k, eig.iter().map(|&e| T::from_real(e))));
    let g = &u * d * u.adjoint();
    SymmetricPair::new(v, g).expect("Hermitian by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Tolerance;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn diag(v: &[f64]) -> SymmetricPair<f64> {
        let n = v.len();
        SymmetricPair::new(Subspace::full(n, tol()), DMatrix::from_diagonal(&DVector::from_vec(v.to_vec()))).unwrap()
    }

    #[test]
    fn stats_examples() {
        let s = diag(&[1.0, -2.0, 0.0]).stats();
        assert_eq!((s.norm, s.m_plus, s.m_minus, s.m_zero, s.gamma), (2.0, 1, 1, 1, None));
        let s = diag(&[2.0, 0.0]).stats();
        assert_eq!(s.gamma, Some(2.0));
        let z = SymmetricPair::<f64>::new(Subspace::zero(3, tol()), DMatrix::zeros(0, 0)).unwrap();
        assert_eq!(z.stats().norm, 0.0);
    }

    #[test]
    fn c_gap_examples() {
        let q = diag(&[0.0]);
        let r = diag(&[1.0]);
        let iv = c_gap_bounds(&q, &r, 0.0, 1000, 1).unwrap();
        assert!(iv.lo >= 0.25 - 1e-12 && iv.hi <= 1.0 + 1e-12, "{iv:?}");
        let iv = c_gap_bounds(&r, &r, 1.0, 100, 1).unwrap();
        assert_eq!(iv.lo, 0.0);
    }

    #[test]
    fn morse_examples() {
        let q = diag(&[1.0]);
        let a = Subspace::full(1, tol());
        let cert = perturbed_morse_certify(&q, &diag(&[0.99]), 1.0, &a, 1.0).unwrap();
        assert!(cert.hypothesis_certified);
        assert_abs_diff_eq!(cert.lhs, 0.02, epsilon = 1e-12);
        assert!(cert.conclusion_checked);
        let cert = perturbed_morse_certify(&q, &diag(&[-1.0]), 1.0, &a, 1.0).unwrap();
        assert!(!cert.hypothesis_certified);
        assert!(cert.lhs >= 4.0);
        assert!(matches!(
            perturbed_morse_certify(&q, &q, 1.0, &a, -1.0),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn witt_examples() {
        let id = Form::identity(2, tol());
        let t = Relation::from_operator(&DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]), tol()).unwrap();
        let w = witt_parity(&t, &id).unwrap();
        assert_eq!((w.dom_dim, w.m_minus_iq, w.ker_q_dim), (2, 1, 0));
        assert!(w.identity_holds);
        let z = Relation::product(&Subspace::full(2, tol()), &Subspace::zero(2, tol()));
        let w = witt_parity(&z, &id).unwrap();
        assert_eq!((w.dom_dim, w.m_minus_iq, w.ker_q_dim), (2, 0, 2));

        let mut m = DMatrix::zeros(3, 3);
        m[(1, 2)] = -1.0;
        m[(2, 1)] = 1.0;
        let t = Relation::from_operator(&m, tol()).unwrap();
        let w = witt_parity(&t, &Form::identity(3, tol())).unwrap();
        assert_eq!((w.dom_dim, w.m_minus_iq, w.ker_q_dim), (3, 1, 1));
    }
}
