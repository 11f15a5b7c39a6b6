//! Linear relations `A: X ⇝ Y`, stored as graph subspaces of `X × Y`.
//!
//! Parts are read off one SVD per block of the graph basis `[B_x; B_y]`:
//! right singular vectors with a nonzero `B_x`-image span the domain, those
//! annihilated by `B_x` carry the multivalued part `A0`, and symmetrically for
//! `B_y` with range and kernel.

use nalgebra::DMatrix;

use crate::dense;
use crate::error::{mismatch, Error, Result, ToleranceWarning};
use crate::forms::{Form, Side};
use crate::scalar::{check_unit, Scalar, Tolerance};
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct Relation<T: Scalar> {
    nx: usize,
    ny: usize,
    graph: Subspace<T>,
    dom: Subspace<T>,
    ran: Subspace<T>,
    ker: Subspace<T>,
    mul: Subspace<T>,
}

/// Fredholm data of a relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub ker_dim: usize,
    pub coker_dim: usize,
    pub index: i64,
    pub parity: u8,
}

#[derive(Clone, Debug)]
pub struct SymmetryReport<T: Scalar> {
    pub h: T,
    pub is_h_symmetric: bool,
    pub is_h_selfadjoint: bool,
    pub is_maximal_h_symmetric: bool,
    pub adjoint: Relation<T>,
    /// Dimension of the extension search space modulo `A` (0 for selfadjoint `A`).
    pub extension_dim: usize,
    pub warnings: Vec<ToleranceWarning>,
}

/// The sesquilinear form `Q_A(x, y) = Ω(x, Ay)` on `dom A`.
#[derive(Clone, Debug)]
pub struct AssociatedForm<T: Scalar> {
    pub domain: Subspace<T>,
    /// `gram[(i, j)] = Q_A(d_i, d_j)` for the orthonormal basis `d` of the domain.
    pub gram: DMatrix<T>,
}

impl<T: Scalar> Relation<T> {
    /// Relation with the given graph in `K^{nx+ny}`.
    pub fn from_graph(nx: usize, ny: usize, graph: Subspace<T>) -> Result<Self> {
        if graph.ambient_dim() != nx + ny {
            return Err(mismatch(format!(
                "graph lives in K^{}, expected K^{}",
                graph.ambient_dim(),
                nx + ny
            )));
        }
        let tol = graph.tol();
        let b = graph.basis();
        let k = b.ncols();
        let bx = b.rows(0, nx).into_owned();
        let by = b.rows(nx, ny).into_owned();
        let cut = tol.unit_cutoff(nx + ny);

        let sx = dense::right_split(&bx, cut);
        let dom = Subspace::from_basis(sx.u_big, tol);
        let mul = Subspace::from_basis(dense::polar(&(&by * &sx.v_small)), tol);

        let sy = dense::right_split(&by, cut);
        let ran = Subspace::from_basis(sy.u_big, tol);
        let ker = Subspace::from_basis(dense::polar(&(&bx * &sy.v_small)), tol);

        debug_assert_eq!(dom.dim() + mul.dim(), k);
        debug_assert_eq!(ran.dim() + ker.dim(), k);
        Ok(Relation {
            nx,
            ny,
            graph,
            dom,
            ran,
            ker,
            mul,
        })
    }

    /// Relation spanned by the columns of `raw` ((nx+ny)×m).
    pub fn span(nx: usize, ny: usize, raw: &DMatrix<T>, tol: Tolerance) -> Result<Self> {
        if raw.nrows() != nx + ny {
            return Err(mismatch(format!(
                "spanning set has {} rows, expected {}",
                raw.nrows(),
                nx + ny
            )));
        }
        Relation::from_graph(nx, ny, Subspace::span(raw, tol)?)
    }

    /// Graph of the operator `m: X → Y` (an ny×nx matrix).
    pub fn from_operator(m: &DMatrix<T>, tol: Tolerance) -> Result<Self> {
        let (ny, nx) = m.shape();
        let id = DMatrix::<T>::identity(nx, nx);
        Relation::span(nx, ny, &dense::vstack(nx, &[&id, m]), tol)
    }

    /// `dom × mul` style product relation `a × b`.
    pub fn product(a: &Subspace<T>, b: &Subspace<T>) -> Self {
        let (nx, ny) = (a.ambient_dim(), b.ambient_dim());
        Relation::from_graph(nx, ny, a.product(b)).expect("dimensions agree by construction")
    }

    pub fn identity(n: usize, tol: Tolerance) -> Self {
        Relation::from_operator(&DMatrix::identity(n, n), tol).expect("identity is valid")
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    pub fn tol(&self) -> Tolerance {
        self.graph.tol()
    }

    pub fn graph(&self) -> &Subspace<T> {
        &self.graph
    }

    pub fn dom(&self) -> &Subspace<T> {
        &self.dom
    }

    pub fn ran(&self) -> &Subspace<T> {
        &self.ran
    }

    pub fn ker(&self) -> &Subspace<T> {
        &self.ker
    }

    /// Multivalued part `A0 = {y : (0, y) ∈ A}`.
    pub fn mul(&self) -> &Subspace<T> {
        &self.mul
    }

    pub fn x_block(&self) -> DMatrix<T> {
        self.graph.basis().rows(0, self.nx).into_owned()
    }

    pub fn y_block(&self) -> DMatrix<T> {
        self.graph.basis().rows(self.nx, self.ny).into_owned()
    }

    /// True when `A0 = {0}`, i.e. the relation is the graph of a map on its domain.
    pub fn is_operator(&self) -> bool {
        self.mul.is_zero()
    }

    /// Matrix `M` with graph `{(x, Mx)}` when `A` is the graph of an everywhere
    /// defined operator; `None` otherwise.
    pub fn operator_matrix(&self) -> Option<DMatrix<T>> {
        if !self.mul.is_zero() || !self.dom.is_full() {
            return None;
        }
        let bx = self.x_block();
        let by = self.y_block();
        // B_x is square and invertible here.
        let inv = dense::inverse(&bx)?;
        Some(by * inv)
    }

    pub fn same_as(&self, other: &Self) -> Result<bool> {
        self.check_shape(other)?;
        self.graph.same_as(&other.graph)
    }

    /// `other ⊆ self` as graphs.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.check_shape(other)?;
        self.graph.contains(&other.graph)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if (self.nx, self.ny) != (other.nx, other.ny) {
            return Err(mismatch(format!(
                "relations {}⇝{} and {}⇝{}",
                self.nx, self.ny, other.nx, other.ny
            )));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        let b = dense::vstack(self.dim(), &[&self.y_block(), &self.x_block()]);
        Relation::from_graph(self.ny, self.nx, Subspace::from_basis(b, self.tol()))
            .expect("dimensions agree by construction")
    }

    /// `a ∘ A = {(x, a y) : (x, y) ∈ A}`.
    pub fn scale(&self, a: T) -> Self {
        let by = self.y_block() * a;
        let b = dense::vstack(self.dim(), &[&self.x_block(), &by]);
        if a.modulus() == 1.0 || (a.modulus() - 1.0).abs() < 1e-15 {
            // A unimodular factor keeps the basis orthonormal.
            Relation::from_graph(self.nx, self.ny, Subspace::from_basis(b, self.tol()))
                .expect("dimensions agree by construction")
        } else {
            Relation::span(self.nx, self.ny, &b, self.tol()).expect("finite by construction")
        }
    }

    /// `A +̂ B = {(x, y + z) : (x, y) ∈ A, (x, z) ∈ B}`.
    pub fn hat_sum(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let tol = self.tol().max(other.tol());
        let (ka, kb) = (self.dim(), other.dim());
        let sys = dense::hstack(self.nx, &[&self.x_block(), &(-other.x_block())]);
        let null = dense::null_space(&sys, tol.unit_cutoff(self.nx + self.ny));
        let p = null.rows(0, ka).into_owned();
        let q = null.rows(ka, kb).into_owned();
        let xs = self.x_block() * &p;
        let ys = self.y_block() * &p + other.y_block() * &q;
        let raw = dense::vstack(null.ncols(), &[&xs, &ys]);
        Relation::span(self.nx, self.ny, &raw, tol)
    }

    /// `B ∘ A = {(x, z) : ∃y, (x, y) ∈ A, (y, z) ∈ B}` where `self = A`.
    pub fn then(&self, b: &Relation<T>) -> Result<Relation<T>> {
        if self.ny != b.nx {
            return Err(mismatch(format!(
                "cannot compose {}⇝{} with {}⇝{}",
                self.nx, self.ny, b.nx, b.ny
            )));
        }
        let tol = self.tol().max(b.tol());
        let (ka, kb) = (self.dim(), b.dim());
        let sys = dense::hstack(self.ny, &[&self.y_block(), &(-b.x_block())]);
        let null = dense::null_space(&sys, tol.unit_cutoff(self.nx + self.ny + b.ny));
        let p = null.rows(0, ka).into_owned();
        let q = null.rows(ka, kb).into_owned();
        let xs = self.x_block() * p;
        let zs = b.y_block() * q;
        let raw = dense::vstack(null.ncols(), &[&xs, &zs]);
        Relation::span(self.nx, b.ny, &raw, tol)
    }

    /// Subspace sum of graphs (direct sum reassembly when the parts are independent).
    pub fn graph_sum(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Relation::from_graph(self.nx, self.ny, self.graph.sum(&other.graph)?)
    }

    pub fn graph_intersect(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Relation::from_graph(self.nx, self.ny, self.graph.intersect(&other.graph)?)
    }

    pub fn index_and_parity(&self) -> IndexReport {
        let ker_dim = self.ker.dim();
        let coker_dim = self.ny - self.ran.dim();
        IndexReport {
            ker_dim,
            coker_dim,
            index: ker_dim as i64 - coker_dim as i64,
            parity: (ker_dim % 2) as u8,
        }
    }
}

/// `B ∘ A`.
pub fn compose<T: Scalar>(b: &Relation<T>, a: &Relation<T>) -> Result<Relation<T>> {
    a.then(b)
}

fn graph_form<T: Scalar>(a: &Relation<T>, omega: &Form<T>) -> Result<Form<T>> {
    if (omega.nx(), omega.ny()) != (a.nx(), a.ny()) {
        return Err(mismatch(format!(
            "form is {}×{}, relation is {}⇝{}",
            omega.nx(),
            omega.ny(),
            a.nx(),
            a.ny()
        )));
    }
    omega.graph_symplectic()
}

/// `A^Ω`, the annihilator of the graph under the graph symplectic form.
pub fn omega_adjoint<T: Scalar>(a: &Relation<T>, omega: &Form<T>) -> Result<Relation<T>> {
    let w = graph_form(a, omega)?;
    let adj = w.annihilator(a.graph(), Side::Right)?;
    Relation::from_graph(a.nx(), a.ny(), adj)
}

/// Symmetry predicates for the unit scalar `h`.
///
/// Maximality is decided by a finite extension search. With
/// `b(u, v) = ω(u, h⋄v)`, an h-symmetric `B ⊇ A` lies in
/// `C = {u : b(a, u) = 0 ∀a ∈ A} = h̄ ∘ A^Ω`, and `b` descends to `C/A`
/// where `i·√h·b` is Hermitian. `A` is maximal exactly when that Hermitian form
/// has no nonzero isotropic vector, i.e. is definite (over ℝ the symmetric part
/// of `b` is used; it vanishes identically for `h = 1`). The quotient is
/// realized on the Euclidean section `C ∩ A^⊥`.
pub fn classify_symmetry<T: Scalar>(a: &Relation<T>, omega: &Form<T>, h: T) -> Result<SymmetryReport<T>> {
    let tol = a.tol().max(omega.tol());
    check_unit(h, tol)?;
    let w = graph_form(a, omega)?;
    let adjoint = Relation::from_graph(a.nx(), a.ny(), w.annihilator(a.graph(), Side::Right)?)?;
    let ha = a.scale(h);
    let is_h_symmetric = adjoint.graph().contains(ha.graph())?;
    let is_h_selfadjoint = is_h_symmetric && adjoint.dim() == a.dim();

    let mut warnings = Vec::new();
    let (is_maximal, extension_dim) = if !is_h_symmetric {
        (false, 0)
    } else if is_h_selfadjoint {
        (true, 0)
    } else {
        let c = adjoint.scale(h.conjugate());
        let section = c.graph().complement_in(a.graph())?;
        let s = section.basis();
        let d = s.ncols();
        if d == 0 {
            (true, 0)
        } else {
            let nx = a.nx();
            let mut hs = s.clone();
            for mut row in hs.rows_mut(nx, a.ny()).row_iter_mut() {
                row *= h;
            }
            let b = w.gram(s, &hs);
            let herm = hermitian_of(&b, h);
            let vals = dense::hermitian_eigenvalues(&herm);
            let cut = tol.cutoff(omega.norm().max(f64::MIN_POSITIVE), a.nx() + a.ny());
            let pos = vals.iter().filter(|&&v| v > cut).count();
            let neg = vals.iter().filter(|&&v| v < -cut).count();
            if pos + neg < d {
                // Over ℝ with h = 1 the form vanishes identically, so a zero
                // eigenvalue there is structural rather than borderline.
                let structural = T::FIELD == crate::scalar::Field::Real && h.to_c64().re > 0.0;
                if !structural {
                    let near = vals
                        .iter()
                        .copied()
                        .fold(f64::INFINITY, |m, v| if v.abs() < m.abs() { v } else { m });
                    warnings.push(ToleranceWarning {
                        context: "maximality: extension form eigenvalue",
                        value: near,
                        cutoff: cut,
                    });
                }
                (false, d)
            } else {
                (pos == d || neg == d, d)
            }
        }
    };
    Ok(SymmetryReport {
        h,
        is_h_symmetric,
        is_h_selfadjoint,
        is_maximal_h_symmetric: is_maximal,
        adjoint,
        extension_dim,
        warnings,
    })
}

/// Hermitian matrix of the quadratic form `u ↦ c·b(u, u)` with `c = i√h`
/// over ℂ, or the symmetric part of `b` over ℝ.
fn hermitian_of<T: Scalar>(b: &DMatrix<T>, h: T) -> DMatrix<T> {
    use crate::scalar::Field;
    match T::FIELD {
        Field::Real => (b + b.transpose()).scale(0.5),
        Field::Complex => {
            let hc = h.to_c64();
            let c = num_complex::Complex64::new(0.0, 1.0) * hc.sqrt();
            let cb = b.map(|z| T::from_c64(z.to_c64() * c));
            // Gram entries are b(s_i, s_j); the Hermitian matrix of the quadratic
            // form in coefficient vectors is its transpose.
            let t = cb.transpose();
            (&t + t.adjoint()).scale(0.5)
        }
    }
}

/// `Q_A` on an orthonormal basis of `dom A`, using the minimum-norm selection.
pub fn associated_form<T: Scalar>(a: &Relation<T>, omega: &Form<T>) -> Result<AssociatedForm<T>> {
    if (omega.nx(), omega.ny()) != (a.nx(), a.ny()) {
        return Err(mismatch("form and relation dimensions differ"));
    }
    let tol = a.tol().max(omega.tol());
    let bx = a.x_block();
    let by = a.y_block();
    let split = dense::right_split(&bx, tol.unit_cutoff(a.nx() + a.ny()));
    let d = split.u_big.clone();
    // (d_i σ_i, B_y v_i) lies in A, so (d_i, B_y v_i / σ_i) does too.
    let mut ysel = &by * &split.v_big;
    for (j, s) in split.s_big.iter().enumerate() {
        let mut c = ysel.column_mut(j);
        c.unscale_mut(*s);
    }
    let ysel = a.mul().residual(&ysel);

    let mul = a.mul().basis();
    if mul.ncols() > 0 && d.ncols() > 0 {
        let leak = dense::max_abs_entry(&omega.gram(&d, mul));
        let cut = tol.cutoff(omega.norm(), a.nx() + a.ny()).max(64.0 * f64::EPSILON * omega.norm());
        if leak > cut {
            return Err(Error::IllDefinedForm(format!(
                "Ω(dom A, A0) reaches {leak:e} (cutoff {cut:e})"
            )));
        }
    }
    let gram = omega.gram(&d, &ysel);
    Ok(AssociatedForm {
        domain: Subspace::from_basis(d, tol),
        gram,
    })
}

impl<T: Scalar> AssociatedForm<T> {
    /// Evaluates `Q_A(x, y)` for domain vectors given in ambient coordinates.
    pub fn eval(&self, x: &nalgebra::DVector<T>, y: &nalgebra::DVector<T>) -> T {
        let b = self.domain.basis();
        let cx = b.adjoint() * x;
        let cy = b.adjoint() * y;
        (cx.transpose() * &self.gram * cy.map(|z| z.conjugate()))[(0, 0)]
    }

    /// `ker Q_A = {x ∈ dom A : Q_A(x, y) = 0 ∀y}`, as a subspace of `X`.
    pub fn kernel(&self, tol: Tolerance, scale: f64) -> Subspace<T> {
        // Q_A(x, ·) = 0 with x = D c means cᵀ G_Q = 0, i.e. (G_Qᴴ) c̄ = 0, i.e. G_Qᵀ c = 0.
        let cut = tol.cutoff(scale, self.gram.nrows().max(1));
        let c = dense::null_space(&self.gram.transpose(), cut);
        Subspace::from_basis(self.domain.basis() * c, tol)
    }
}

/// A relation is skew-adjoint (h = −1 selfadjoint) of index 0.
pub fn require_skew_adjoint_index0<T: Scalar>(t: &Relation<T>, omega: &Form<T>) -> Result<()> {
    let rep = classify_symmetry(t, omega, T::from_real(-1.0))?;
    if !rep.is_h_selfadjoint {
        return Err(Error::NotSkewAdjoint(format!(
            "T^Ω has dimension {}, −1∘T ⊆ T^Ω is {}",
            rep.adjoint.dim(),
            rep.is_h_symmetric
        )));
    }
    let idx = t.index_and_parity();
    if idx.index != 0 {
        return Err(Error::IndexNonzero(format!("index = {}", idx.index)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::FormKind;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn m(r: usize, c: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(r, c, v)
    }

    #[test]
    fn parts_of_projection_like_relation() {
        // A = ℝ×{0} ⊂ ℝ×ℝ
        let a = Relation::span(1, 1, &m(2, 1, &[1.0, 0.0]), tol()).unwrap();
        assert_eq!((a.dom().dim(), a.mul().dim(), a.ran().dim(), a.ker().dim()), (1, 0, 0, 1));
        let b = a.inverse();
        assert_eq!((b.dom().dim(), b.mul().dim(), b.ran().dim(), b.ker().dim()), (0, 1, 1, 0));
    }

    #[test]
    fn inverse_of_invertible_graph() {
        let mm = m(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let a = Relation::from_operator(&mm, tol()).unwrap();
        let inv = Relation::from_operator(&mm.clone().try_inverse().unwrap(), tol()).unwrap();
        assert!(a.inverse().same_as(&inv).unwrap());
    }

    #[test]
    fn compose_with_identity() {
        let a = Relation::span(2, 2, &m(4, 2, &[1.0, 0.0, 0.0, 0.0, 2.0, 1.0, 0.0, 3.0]), tol()).unwrap();
        let id = Relation::identity(2, tol());
        assert!(compose(&id, &a).unwrap().same_as(&a).unwrap());
        assert!(compose(&a, &id).unwrap().same_as(&a).unwrap());
    }

    #[test]
    fn scalar_zero_collapses_range() {
        let a = Relation::from_operator(&m(2, 2, &[1.0, 2.0, 3.0, 4.0]), tol()).unwrap();
        let z = a.scale(0.0);
        let expected = Relation::product(&Subspace::<f64>::full(2, tol()), &Subspace::zero(2, tol()));
        assert!(z.same_as(&expected).unwrap());
    }

    #[test]
    fn hat_sum_of_operators_adds() {
        let p = m(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let q = m(2, 2, &[0.0, -1.0, 4.0, 1.0]);
        let a = Relation::from_operator(&p, tol()).unwrap();
        let b = Relation::from_operator(&q, tol()).unwrap();
        let s = Relation::from_operator(&(&p + &q), tol()).unwrap();
        assert!(a.hat_sum(&b).unwrap().same_as(&s).unwrap());
    }

    #[test]
    fn adjoint_examples() {
        let one = Form::new(m(1, 1, &[1.0]), FormKind::General, tol()).unwrap();
        let a = Relation::span(1, 1, &m(2, 1, &[1.0, 0.0]), tol()).unwrap();
        assert!(omega_adjoint(&a, &one).unwrap().same_as(&a).unwrap());
        let whole = Relation::product(&Subspace::<f64>::full(2, tol()), &Subspace::full(2, tol()));
        assert_eq!(omega_adjoint(&whole, &Form::identity(2, tol())).unwrap().dim(), 0);
        let sym = Relation::from_operator(&m(2, 2, &[1.0, 2.0, 2.0, -3.0]), tol()).unwrap();
        assert!(omega_adjoint(&sym, &Form::identity(2, tol())).unwrap().same_as(&sym).unwrap());
    }

    #[test]
    fn classify_examples() {
        let one = Form::new(m(1, 1, &[1.0]), FormKind::General, tol()).unwrap();
        let a = Relation::span(1, 1, &m(2, 1, &[1.0, 0.0]), tol()).unwrap();
        let r = classify_symmetry(&a, &one, -1.0).unwrap();
        assert!(r.is_h_selfadjoint && r.is_maximal_h_symmetric && r.is_h_symmetric);

        // A(x, 0) = (0, x) with dom = ℝ×{0}.
        let g = m(4, 1, &[1.0, 0.0, 0.0, 1.0]);
        let a = Relation::span(2, 2, &g, tol()).unwrap();
        let id = Form::identity(2, tol());
        let r = classify_symmetry(&a, &id, 1.0).unwrap();
        assert!(r.is_h_symmetric);
        assert!(!r.is_h_selfadjoint);
        assert!(a.ker().is_zero());
        let q = associated_form(&a, &id).unwrap();
        assert_abs_diff_eq!(q.gram.norm(), 0.0, epsilon = 1e-14);
        let kq = q.kernel(tol(), 1.0);
        assert!(kq.same_as(&Subspace::<f64>::coordinate(2, &[0], tol()).unwrap()).unwrap());

        let skew = Relation::from_operator(&m(2, 2, &[0.0, 3.0, -3.0, 0.0]), tol()).unwrap();
        let r = classify_symmetry(&skew, &id, -1.0).unwrap();
        assert!(r.is_h_selfadjoint);
        assert!(matches!(classify_symmetry(&skew, &id, 2.0), Err(Error::InvalidScalar(_))));
    }

    #[test]
    fn associated_form_of_diagonal() {
        let a = Relation::from_operator(&m(2, 2, &[2.0, 0.0, 0.0, -3.0]), tol()).unwrap();
        let q = associated_form(&a, &Form::identity(2, tol())).unwrap();
        // Express in the standard basis: D G_Q Dᴴ.
        let d = q.domain.basis();
        let std = d * &q.gram * d.adjoint();
        let want = m(2, 2, &[2.0, 0.0, 0.0, -3.0]);
        assert_abs_diff_eq!((std.transpose() - want).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn associated_form_detects_ill_definedness() {
        // A = {0}×ℝ ⊕ ℝ×{0} = whole space: A0 = ℝ is not Ω-orthogonal to dom = ℝ.
        let one = Form::new(m(1, 1, &[1.0]), FormKind::General, tol()).unwrap();
        let a = Relation::product(&Subspace::<f64>::full(1, tol()), &Subspace::full(1, tol()));
        assert!(matches!(associated_form(&a, &one), Err(Error::IllDefinedForm(_))));
    }

    #[test]
    fn index_examples() {
        let a = Relation::from_operator(&m(2, 2, &[2.0, 1.0, 1.0, 1.0]), tol()).unwrap();
        assert_eq!(a.index_and_parity(), IndexReport { ker_dim: 0, coker_dim: 0, index: 0, parity: 0 });
        let z = Relation::product(&Subspace::<f64>::full(2, tol()), &Subspace::zero(2, tol()));
        assert_eq!(z.index_and_parity(), IndexReport { ker_dim: 2, coker_dim: 2, index: 0, parity: 0 });
    }
}
