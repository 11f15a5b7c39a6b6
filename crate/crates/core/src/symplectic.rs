//! Isotropic subspaces of a symplectic space `(X, ω)`, the sign and reduced
//! minimum modulus of maximal isotropic subspaces, symplectic reduction, and
//! the transversal splitting of skew-adjoint relations.
//!
//! Quotients `λ^ω/λ` are realized on the Euclidean section `λ^ω ∩ λ^⊥`.
//! Since `ω(x, x)` depends only on the coset `x + λ` when `x ∈ λ^ω`, and
//! `dist(x, λ)` is the norm of the `λ^⊥` component, the infimum defining `γ_λ`
//! becomes the smallest eigenvalue of a Hermitian matrix on that section.

use nalgebra::DMatrix;

use crate::dense;
use crate::error::{mismatch, Error, Result, ToleranceWarning};
use crate::forms::{Form, FormKind, Side};
use crate::relations::{associated_form, require_skew_adjoint_index0, Relation};
use crate::scalar::{Field, Scalar};
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq)]
pub struct IsotropicReport {
    pub isotropic: bool,
    pub coisotropic: bool,
    pub symplectic_subspace: bool,
    pub lagrangian: bool,
    /// `None` when a definiteness decision fell inside the tolerance band.
    pub maximal_isotropic: Option<bool>,
    /// `Some(0)` for Lagrangian, `Some(±1)` for other maximal isotropic subspaces.
    pub h_lambda: Option<i8>,
    pub gamma_lambda: Option<f64>,
    /// Dimension of `λ^ω/λ` (meaningful when isotropic).
    pub reduced_dim: usize,
    pub warnings: Vec<ToleranceWarning>,
}

fn check_ambient<T: Scalar>(s: &Subspace<T>, omega: &Form<T>) -> Result<()> {
    if s.ambient_dim() != omega.nx() {
        return Err(mismatch(format!(
            "subspace lives in K^{}, form acts on K^{}",
            s.ambient_dim(),
            omega.nx()
        )));
    }
    Ok(())
}

/// `[i·ω(s_i, s_j)]` arranged as the Hermitian matrix of `c ↦ i·ω(Sc, Sc)`.
fn i_omega<T: Scalar>(s: &DMatrix<T>, omega: &Form<T>) -> DMatrix<T> {
    let w = omega.gram(s, s).transpose();
    let i = T::from_c64(num_complex::Complex64::new(0.0, 1.0));
    w * i
}

pub fn classify_subspace<T: Scalar>(lambda: &Subspace<T>, omega: &Form<T>) -> Result<IsotropicReport> {
    omega.require_symplectic()?;
    check_ambient(lambda, omega)?;
    let perp = omega.omega_perp(lambda)?;
    let isotropic = perp.contains(lambda)?;
    let coisotropic = lambda.contains(&perp)?;
    let symplectic_subspace = lambda.intersect(&perp)?.is_zero();
    let lagrangian = isotropic && coisotropic;
    let mut report = IsotropicReport {
        isotropic,
        coisotropic,
        symplectic_subspace,
        lagrangian,
        maximal_isotropic: Some(false),
        h_lambda: None,
        gamma_lambda: None,
        reduced_dim: perp.dim().saturating_sub(lambda.dim()),
        warnings: Vec::new(),
    };
    if !isotropic {
        return Ok(report);
    }
    if lagrangian {
        report.maximal_isotropic = Some(true);
        report.h_lambda = Some(0);
        report.gamma_lambda = Some(0.0);
        return Ok(report);
    }
    if T::FIELD == Field::Real {
        // ω(x, x) = 0 identically over ℝ, so only Lagrangians are maximal.
        return Ok(report);
    }
    let section = perp.complement_in(lambda)?;
    let h = i_omega(section.basis(), omega);
    let vals = dense::hermitian_eigenvalues(&h);
    let cut = omega.tol().cutoff(omega.norm(), omega.nx());
    let inr = dense::inertia(&vals, cut);
    let d = vals.len();
    if inr.pos > 0 && inr.neg > 0 {
        return Ok(report);
    }
    if inr.zero > 0 {
        let near = vals.iter().copied().fold(f64::INFINITY, |m, v| if v.abs() < m.abs() { v } else { m });
        report.maximal_isotropic = None;
        report.warnings.push(ToleranceWarning {
            context: "sign of i·ω on the reduction",
            value: near,
            cutoff: cut,
        });
        return Ok(report);
    }
    report.maximal_isotropic = Some(true);
    if inr.pos == d {
        report.h_lambda = Some(1);
        report.gamma_lambda = Some(vals[0]);
    } else {
        report.h_lambda = Some(-1);
        report.gamma_lambda = Some(-vals[d - 1]);
    }
    Ok(report)
}

/// Symplectic reduction `(λ^ω/λ, ω̃)` realized on the section `λ^ω ∩ λ^⊥`.
#[derive(Clone, Debug)]
pub struct Reduction<T: Scalar> {
    pub lambda: Subspace<T>,
    pub lambda_omega: Subspace<T>,
    /// Orthonormal basis `S` of `λ^ω ∩ λ^⊥`; coordinates of `x + λ` are `Sᴴx`.
    pub section: Subspace<T>,
    /// The reduced form on section coordinates.
    pub form: Form<T>,
}

impl<T: Scalar> Reduction<T> {
    pub fn dim(&self) -> usize {
        self.section.dim()
    }

    /// Coordinates of `π_λ(x)` for `x ∈ λ^ω`.
    pub fn project(&self, x: &DMatrix<T>) -> DMatrix<T> {
        self.section.basis().adjoint() * x
    }

    /// Representative in `λ^ω ∩ λ^⊥` of reduced coordinates `c`.
    pub fn lift(&self, c: &DMatrix<T>) -> DMatrix<T> {
        self.section.basis() * c
    }
}

pub fn reduce<T: Scalar>(lambda: &Subspace<T>, omega: &Form<T>) -> Result<Reduction<T>> {
    omega.require_symplectic()?;
    check_ambient(lambda, omega)?;
    let perp = omega.omega_perp(lambda)?;
    if !perp.contains(lambda)? {
        return Err(Error::NotIsotropic(format!(
            "δ(λ, λ^ω) = {:e}",
            lambda.directed_gap(&perp)?
        )));
    }
    let section = perp.complement_in(lambda)?;
    let w = omega.gram(section.basis(), section.basis());
    // Re-skew to remove rounding before the kind check.
    let w = (&w - w.adjoint()).scale(0.5);
    let form = Form::new(w, FormKind::Skew, omega.tol())?;
    Ok(Reduction {
        lambda: lambda.clone(),
        lambda_omega: perp,
        section,
        form,
    })
}

/// `π_λ(α) = ((α + λ) ∩ λ^ω)/λ` in reduced coordinates.
pub fn reduce_subspace<T: Scalar>(alpha: &Subspace<T>, red: &Reduction<T>) -> Result<Subspace<T>> {
    let lifted = alpha.sum(&red.lambda)?.intersect(&red.lambda_omega)?;
    Subspace::span(&red.project(lifted.basis()), alpha.tol())
}

/// The second description `(α ∩ λ^ω + λ)/λ`, used as a cross-check.
pub fn reduce_subspace_alt<T: Scalar>(alpha: &Subspace<T>, red: &Reduction<T>) -> Result<Subspace<T>> {
    let lifted = alpha.intersect(&red.lambda_omega)?.sum(&red.lambda)?;
    Subspace::span(&red.project(lifted.basis()), alpha.tol())
}

/// Pieces of `T = T0 ⊕ T1` for a skew-adjoint index-0 relation.
#[derive(Clone, Debug)]
pub struct TransversalSplit<T: Scalar> {
    pub x0: Subspace<T>,
    pub x1: Subspace<T>,
    pub y0: Subspace<T>,
    pub y1: Subspace<T>,
    /// `X0 × {0}`.
    pub t0: Relation<T>,
    /// `T ∩ (X1 × Y1)`.
    pub t1: Relation<T>,
    pub y0_auto: bool,
}

/// Outcome of checking the splitting identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitIdentities {
    pub x0_is_y1_ann: bool,
    pub x1_is_y0_ann: bool,
    pub y0_is_x1_ann: bool,
    pub y1_is_x0_ann: bool,
    pub x_direct: bool,
    pub y_direct: bool,
    pub t1_invertible: bool,
    pub reassembles: bool,
    pub ker_q_is_ker_t: bool,
}

impl SplitIdentities {
    pub fn all(&self) -> bool {
        self.x0_is_y1_ann
            && self.x1_is_y0_ann
            && self.y0_is_x1_ann
            && self.y1_is_x0_ann
            && self.x_direct
            && self.y_direct
            && self.t1_invertible
            && self.reassembles
            && self.ker_q_is_ker_t
    }
}

fn is_direct_sum<T: Scalar>(a: &Subspace<T>, b: &Subspace<T>) -> Result<bool> {
    Ok(a.dim() + b.dim() == a.ambient_dim() && a.intersect(b)?.is_zero())
}

pub fn transversal_split<T: Scalar>(
    t: &Relation<T>,
    omega: &Form<T>,
    y0: Option<&Subspace<T>>,
) -> Result<TransversalSplit<T>> {
    require_skew_adjoint_index0(t, omega)?;
    let x0 = t.ker().clone();
    let y1 = t.ran().clone();
    let (y0, y0_auto) = match y0 {
        Some(s) => {
            if s.ambient_dim() != t.ny() {
                return Err(mismatch("Y0 must live in Y"));
            }
            if !is_direct_sum(s, &y1)? {
                return Err(Error::SplitFailure(format!(
                    "Y0 (dim {}) is not a complement of ran T (dim {})",
                    s.dim(),
                    y1.dim()
                )));
            }
            (s.clone(), false)
        }
        None => (y1.perp(), true),
    };
    let x1 = omega.annihilator(&y0, Side::Left)?;
    let t0 = Relation::product(&x0, &Subspace::zero(t.ny(), t.tol()));
    let box1 = Relation::product(&x1, &y1);
    let t1 = t.graph_intersect(&box1)?;
    Ok(TransversalSplit {
        x0,
        x1,
        y0,
        y1,
        t0,
        t1,
        y0_auto,
    })
}

impl<T: Scalar> TransversalSplit<T> {
    pub fn check(&self, t: &Relation<T>, omega: &Form<T>) -> Result<SplitIdentities> {
        let left = |s: &Subspace<T>| omega.annihilator(s, Side::Left);
        let right = |s: &Subspace<T>| omega.annihilator(s, Side::Right);
        let reassembled = self.t0.graph_sum(&self.t1)?;
        let q = associated_form(t, omega)?;
        let ker_q = q.kernel(omega.tol(), omega.norm());
        Ok(SplitIdentities {
            x0_is_y1_ann: self.x0.same_as(&left(&self.y1)?)?,
            x1_is_y0_ann: self.x1.same_as(&left(&self.y0)?)?,
            y0_is_x1_ann: self.y0.same_as(&right(&self.x1)?)?,
            y1_is_x0_ann: self.y1.same_as(&right(&self.x0)?)?,
            x_direct: is_direct_sum(&self.x0, &self.x1)?,
            y_direct: is_direct_sum(&self.y0, &self.y1)?,
            t1_invertible: self.t1.ker().is_zero()
                && self.t1.mul().is_zero()
                && self.t1.dom().same_as(&self.x1)?
                && self.t1.ran().same_as(&self.y1)?,
            reassembles: reassembled.same_as(t)?,
            ker_q_is_ker_t: ker_q.same_as(t.ker())?,
        })
    }
}

/// The map `f_Ω(A): X0^{Ω,r} → Y0` determined by `Ω(x0, f_Ω(A) y1) = Ω(A x0, y1)`.
#[derive(Clone, Debug)]
pub struct FOmega<T: Scalar> {
    pub x0: Subspace<T>,
    pub y0: Subspace<T>,
    /// `Y0^{Ω,l}`, the codomain of `A`.
    pub x1: Subspace<T>,
    /// `X0^{Ω,r}`, the domain of `f_Ω(A)`.
    pub y1: Subspace<T>,
    m0: DMatrix<T>,
    m1: DMatrix<T>,
}

impl<T: Scalar> FOmega<T> {
    pub fn new(x0: &Subspace<T>, y0: &Subspace<T>, omega: &Form<T>) -> Result<Self> {
        omega.require_nondegenerate()?;
        if x0.ambient_dim() != omega.nx() || y0.ambient_dim() != omega.ny() {
            return Err(mismatch("X0 ⊆ X and Y0 ⊆ Y required"));
        }
        let y1 = omega.annihilator(x0, Side::Right)?;
        if x0.dim() != y0.dim() || !is_direct_sum(y0, &y1)? {
            return Err(Error::SplitFailure(format!(
                "Y0 (dim {}) is not a complement of X0^Ω,r (dim {}) or dim X0 = {} differs",
                y0.dim(),
                y1.dim(),
                x0.dim()
            )));
        }
        let x1 = omega.annihilator(y0, Side::Left)?;
        let m0 = omega.gram(x0.basis(), y0.basis());
        let m1 = omega.gram(x1.basis(), y1.basis());
        Ok(FOmega {
            x0: x0.clone(),
            y0: y0.clone(),
            x1,
            y1,
            m0,
            m1,
        })
    }

    /// `f_Ω(A)` in orthonormal coordinates: `a` is (dim X1)×(dim X0) with
    /// `A x0 = B_{X1} a c` for `x0 = B_{X0} c`; the result `F` satisfies
    /// `f_Ω(A)(B_{Y1} d) = B_{Y0} F d`.
    pub fn apply(&self, a: &DMatrix<T>) -> Result<DMatrix<T>> {
        if a.shape() != (self.x1.dim(), self.x0.dim()) {
            return Err(mismatch(format!(
                "A must be {}×{} in coordinates",
                self.x1.dim(),
                self.x0.dim()
            )));
        }
        // Ω(B0 c, B_{Y0} F d) = cᵀ M0 F̄ d̄ and Ω(B1 a c, B_{Y1} d) = cᵀ aᵀ M1 d̄.
        let rhs = a.transpose() * &self.m1;
        let lu = self.m0.clone().lu();
        let fbar = lu
            .solve(&rhs)
            .ok_or_else(|| Error::SplitFailure("Ω restricted to X0×Y0 is singular".into()))?;
        Ok(dense::conj(&fbar))
    }

    /// Ambient matrix of `A ↦ f_Ω(A)` composed with the coordinate maps,
    /// as a map `Y → Y` vanishing on `Y0`.
    pub fn ambient(&self, f: &DMatrix<T>) -> DMatrix<T> {
        // Coordinates of y1 in the (non-orthogonal) splitting Y = Y0 ⊕ Y1.
        let b = dense::hstack(self.y0.ambient_dim(), &[self.y0.basis(), self.y1.basis()]);
        let inv = dense::inverse(&b).expect("direct sum basis is invertible");
        let k = self.y0.dim();
        let coords = inv.rows(k, self.y1.dim()).into_owned();
        self.y0.basis() * f * coords
    }
}
