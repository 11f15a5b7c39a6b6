//! Sesquilinear pairings `Ω: X × Y → K`.
//!
//! A form is stored by its Gram matrix `G` in the standard bases, with
//! `Ω(x, y) = xᵀ G ȳ`. Identifying `Y*` with `K^{n_Y}` through
//! `f(y) = Σ c_j ȳ_j`, the induced maps are `L_Ω = Gᵀ` and `R_Ω = Ḡ`, so
//! `‖L_Ω‖ = ‖R_Ω‖ = ‖G‖₂`.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::dense;
use crate::error::{mismatch, Error, Result};
use crate::scalar::{Field, Scalar, Tolerance};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    General,
    /// `G = Gᴴ`, i.e. `Ω(x, y) = conj Ω(y, x)`.
    Symmetric,
    /// `G = −Gᴴ`, i.e. `Ω(x, y) = −conj Ω(y, x)`.
    Skew,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::General => "general",
            FormKind::Symmetric => "symmetric",
            FormKind::Skew => "skew",
        })
    }
}

impl std::str::FromStr for FormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(FormKind::General),
            "symmetric" => Ok(FormKind::Symmetric),
            "skew" => Ok(FormKind::Skew),
            other => Err(Error::Parse(format!("unknown form kind `{other}`"))),
        }
    }
}

/// Which annihilator to take.
///
/// `Right` maps `S ⊆ X` to `{y : Ω(x, y) = 0 ∀x ∈ S} ⊆ Y`; `Left` maps
/// `S ⊆ Y` to `{x : Ω(x, y) = 0 ∀y ∈ S} ⊆ X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Parse(format!("unknown side `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nondegeneracy {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub cutoff: f64,
    pub nondegenerate: bool,
}

#[derive(Clone, Debug)]
pub struct Form<T: Scalar> {
    matrix: DMatrix<T>,
    kind: FormKind,
    tol: Tolerance,
    cert: Nondegeneracy,
}

impl<T: Scalar> Form<T> {
    pub fn new(matrix: DMatrix<T>, kind: FormKind, tol: Tolerance) -> Result<Self> {
        if !dense::all_finite(&matrix) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let (nx, ny) = matrix.shape();
        let s = dense::singular_values(&matrix);
        let sigma_max = s.first().copied().unwrap_or(0.0);
        let sigma_min = if nx == ny {
            s.last().copied().unwrap_or(0.0)
        } else {
            0.0
        };
        let cutoff = tol.cutoff(sigma_max, nx.max(ny));
        let kind_cut = tol.cutoff(sigma_max, nx.max(ny)).max(64.0 * f64::EPSILON * sigma_max);
        match kind {
            FormKind::General => {}
            FormKind::Symmetric | FormKind::Skew => {
                if nx != ny {
                    return Err(Error::KindViolation(format!(
                        "{kind} form needs a square matrix, got {nx}×{ny}"
                    )));
                }
                let defect = if kind == FormKind::Symmetric {
                    dense::max_abs_entry(&(&matrix - matrix.adjoint()))
                } else {
                    dense::max_abs_entry(&(&matrix + matrix.adjoint()))
                };
                if defect > kind_cut {
                    return Err(Error::KindViolation(format!(
                        "{kind} condition fails by {defect:e}"
                    )));
                }
            }
        }
        let nondegenerate = nx == ny && (nx == 0 || sigma_min > cutoff);
        Ok(Form {
            matrix,
            kind,
            tol,
            cert: Nondegeneracy {
                sigma_min,
                sigma_max,
                cutoff,
                nondegenerate,
            },
        })
    }

    /// Identity pairing `Ω(x, y) = xᵀ ȳ` on `K^n`.
    pub fn identity(n: usize, tol: Tolerance) -> Self {
        Form::new(DMatrix::identity(n, n), FormKind::Symmetric, tol).expect("identity is valid")
    }

    /// Standard symplectic form on `K^{2m}` with Gram `[[0, −I], [I, 0]]`.
    pub fn standard_symplectic(m: usize, tol: Tolerance) -> Self {
        let mut g = DMatrix::zeros(2 * m, 2 * m);
        for i in 0..m {
            g[(i, m + i)] = -T::one();
            g[(m + i, i)] = T::one();
        }
        Form::new(g, FormKind::Skew, tol).expect("standard form is valid")
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn field(&self) -> Field {
        T::FIELD
    }

    pub fn tol(&self) -> Tolerance {
        self.tol
    }

    pub fn nx(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ny(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn nondegeneracy(&self) -> Nondegeneracy {
        self.cert
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.cert.nondegenerate
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<()> {
        if !self.cert.nondegenerate {
            return Err(Error::DegenerateForm(format!(
                "σ_min = {:e} with cutoff {:e} ({}×{})",
                self.cert.sigma_min,
                self.cert.cutoff,
                self.nx(),
                self.ny()
            )));
        }
        Ok(())
    }

    pub(crate) fn require_symplectic(&self) -> Result<()> {
        if self.kind != FormKind::Skew {
            return Err(Error::DegenerateForm(format!(
                "expected a skew form, got kind {}",
                self.kind
            )));
        }
        self.require_nondegenerate()
    }

    /// `‖L_Ω‖ = ‖G‖₂`.
    pub fn norm(&self) -> f64 {
        self.cert.sigma_max
    }

    /// Matrix of `L_Ω: X → Y*`, which is `Gᵀ`.
    pub fn induced_matrix(&self) -> DMatrix<T> {
        self.matrix.transpose()
    }

    /// Matrix of `R_Ω: Y → X*`, which is `Ḡ`.
    pub fn right_induced_matrix(&self) -> DMatrix<T> {
        dense::conj(&self.matrix)
    }

    pub fn eval(&self, x: &DVector<T>, y: &DVector<T>) -> T {
        (x.transpose() * &self.matrix * y.map(|z| z.conjugate()))[(0, 0)]
    }

    /// `[Ω(a_i, b_j)]` for the columns of `a ⊆ X` and `b ⊆ Y`.
    pub fn gram(&self, a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
        a.transpose() * &self.matrix * dense::conj(b)
    }

    fn rank_cut(&self) -> f64 {
        self.tol.cutoff(self.cert.sigma_max, self.nx().max(self.ny()))
    }

    pub fn annihilator(&self, s: &Subspace<T>, side: Side) -> Result<Subspace<T>> {
        let tol = self.tol.max(s.tol());
        match side {
            Side::Right => {
                if s.ambient_dim() != self.nx() {
                    return Err(mismatch(format!(
                        "right annihilator takes a subspace of K^{}, got K^{}",
                        self.nx(),
                        s.ambient_dim()
                    )));
                }
                let sys = s.basis().adjoint() * dense::conj(&self.matrix);
                Ok(Subspace::from_basis(dense::null_space(&sys, self.rank_cut()), tol))
            }
            Side::Left => {
                if s.ambient_dim() != self.ny() {
                    return Err(mismatch(format!(
                        "left annihilator takes a subspace of K^{}, got K^{}",
                        self.ny(),
                        s.ambient_dim()
                    )));
                }
                let sys = s.basis().adjoint() * self.matrix.transpose();
                Ok(Subspace::from_basis(dense::null_space(&sys, self.rank_cut()), tol))
            }
        }
    }

    /// `λ^ω` for a skew form (left and right annihilators agree).
    pub fn omega_perp(&self, s: &Subspace<T>) -> Result<Subspace<T>> {
        self.annihilator(s, Side::Right)
    }

    /// Graph symplectic form on `X × Y`:
    /// `ω((x₁, y₁), (x₂, y₂)) = Ω(x₁, y₂) − conj Ω(x₂, y₁)`, Gram `[[0, G], [−Gᴴ, 0]]`.
    ///
    /// Its induced operator `[[0, −R_Ω], [L_Ω, 0]]` is the transpose of that Gram.
    pub fn graph_symplectic(&self) -> Result<Form<T>> {
        self.require_nondegenerate()?;
        let (nx, ny) = (self.nx(), self.ny());
        let mut w = DMatrix::zeros(nx + ny, nx + ny);
        w.view_mut((0, nx), (nx, ny)).copy_from(&self.matrix);
        w.view_mut((nx, 0), (ny, nx)).copy_from(&(-self.matrix.adjoint()));
        Form::new(w, FormKind::Skew, self.tol)
    }

    /// Pull back along `x ↦ Px`, `y ↦ Qy`: Gram `Pᵀ G Q̄`.
    pub fn pullback(&self, p: &DMatrix<T>, q: &DMatrix<T>, kind: FormKind) -> Result<Form<T>> {
        if p.nrows() != self.nx() || q.nrows() != self.ny() {
            return Err(mismatch("pullback matrices do not match the form"));
        }
        Form::new(self.gram(p, q), kind, self.tol)
    }

    pub fn with_tol(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }
}
