//! Worked instances checked against independent oracles: nalgebra QR, SVD,
//! inverses and eigensolvers, closed forms, or sphere sampling.

mod common;

use approx::assert_abs_diff_eq;
use linrel::cayley::{cayley_forward, connect, CayleyData};
use linrel::forms::Form;
use linrel::morse::{c_gap_bounds, perturbed_morse_certify, witt_parity, SymmetricPair};
use linrel::relations::{associated_form, classify_symmetry, omega_adjoint, Relation};
use linrel::stability::{hess_kato_check, mod2_experiment, pencil_gap_bound, PencilParams, Perturbation};
use linrel::subspace::{gap_metrics, hausdorff_estimate};
use linrel::symplectic::{classify_subspace, reduce, reduce_subspace, transversal_split};
use linrel::{Complex64, DMatrix, Subspace};

use common::*;

fn line(theta: f64) -> DMatrix<f64> {
    DMatrix::from_column_slice(2, 1, &[theta.cos(), theta.sin()])
}

fn span(raw: &DMatrix<f64>) -> Subspace<f64> {
    Subspace::span(raw, tol()).unwrap()
}

fn graph_basis(r: &Relation<f64>) -> DMatrix<f64> {
    r.graph().basis().clone()
}

#[test]
fn tiny_singular_value_is_dropped() {
    let raw = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1e-30]);
    let sv = raw.clone().svd(false, false).singular_values;
    assert!(sv[1] < 1e-10 * sv[0]);
    assert_eq!(span(&raw).dim(), 1);
}

#[test]
fn gaps_of_lines_match_sampling() {
    let mut rng = linrel::random::rng(1);
    for (a, b) in [(0.0, std::f64::consts::FRAC_PI_2), (0.0, std::f64::consts::FRAC_PI_6), (0.3, 1.1)] {
        let (bm, bn) = (line(a), line(b));
        let g = gap_metrics(&span(&bm), &span(&bn)).unwrap();
        assert_abs_diff_eq!(g.delta_mn, oracle_delta(&bm, &bn, &mut rng), epsilon = 1e-9);
        assert_abs_diff_eq!(g.gamma_mn, oracle_gamma(&bm, &bn, &mut rng), epsilon = 1e-9);
        assert_abs_diff_eq!(g.delta_mn, (b - a).sin().abs(), epsilon = 1e-12);
    }
    let g = gap_metrics(&span(&line(0.0)), &span(&line(std::f64::consts::FRAC_PI_2))).unwrap();
    assert_eq!((g.hat_delta, g.hat_gamma), (1.0, 1.0));
}

#[test]
fn hausdorff_of_orthogonal_lines() {
    let (m, n) = (span(&line(0.0)), span(&line(std::f64::consts::FRAC_PI_2)));
    let (lo, hi) = hausdorff_estimate(&m, &n, 1000, 3).unwrap();
    // Unit circles of orthogonal lines are √2 apart.
    assert_abs_diff_eq!(lo, std::f64::consts::SQRT_2, epsilon = 1e-12);
    assert_eq!(hi, 2.0);
    let z = Subspace::<f64>::zero(2, tol());
    assert_eq!(hausdorff_estimate(&z, &n, 10, 0).unwrap(), (2.0, 2.0));
}

#[test]
fn inverse_graph_is_graph_of_inverse() {
    let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, -1.0, 3.0, 1.0, 0.5, 0.0, 1.0]);
    let inv = m.clone().try_inverse().unwrap();
    let a = Relation::from_operator(&m, tol()).unwrap().inverse();
    assert_abs_diff_eq!(a.operator_matrix().unwrap(), inv, epsilon = 1e-12);
}

/// `ω((x₁,y₁),(x₂,y₂)) = Ω(x₁,y₂) − conj Ω(x₂,y₁)` for Ω = I, evaluated entrywise.
fn graph_pairing_identity(a: &DMatrix<f64>, b: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let (xa, ya) = (a.rows(0, n), a.rows(n, n));
    let (xb, yb) = (b.rows(0, n), b.rows(n, n));
    xa.transpose() * yb - (xb.transpose() * ya).transpose()
}

#[test]
fn adjoint_of_symmetric_graph_is_itself() {
    let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, -0.5]);
    let a = Relation::from_operator(&s, tol()).unwrap();
    let o = Form::identity(2, tol());
    let ga = graph_basis(&a);
    assert!(graph_pairing_identity(&ga, &ga, 2).norm() < 1e-12);
    assert!(omega_adjoint(&a, &o).unwrap().same_as(&a).unwrap());
}

#[test]
fn skew_graph_is_selfadjoint_for_minus_one() {
    let k = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, -2.0, -1.0, 0.0, 0.5, 2.0, -0.5, 0.0]);
    let a = Relation::from_operator(&k, tol()).unwrap();
    let o = Form::identity(3, tol());
    let rep = classify_symmetry(&a, &o, -1.0).unwrap();
    assert!(rep.is_h_selfadjoint);
    assert!(rep.adjoint.same_as(&a.scale(-1.0)).unwrap());
}

#[test]
fn shift_example_is_symmetric_not_selfadjoint() {
    // A(x, 0) = (0, x) on dom = ℝ × {0}.
    let raw = DMatrix::from_column_slice(4, 1, &[1.0, 0.0, 0.0, 1.0]);
    let a = Relation::span(2, 2, &raw, tol()).unwrap();
    let o = Form::identity(2, tol());
    let rep = classify_symmetry(&a, &o, 1.0).unwrap();
    assert!(rep.is_h_symmetric && !rep.is_h_selfadjoint);
    assert_eq!(a.ker().dim(), 0);
    let q = associated_form(&a, &o).unwrap();
    assert_eq!(q.gram.norm(), 0.0);
    assert_eq!(q.kernel(tol(), 1.0).dim(), 1);
}

#[test]
fn associated_form_of_diagonal_graph() {
    let d = DMatrix::from_diagonal(&linrel::DVector::from_column_slice(&[2.0, -3.0]));
    let a = Relation::from_operator(&d, tol()).unwrap();
    let q = associated_form(&a, &Form::identity(2, tol())).unwrap();
    // Direct evaluation Ω(d_i, A d_j) on the computed domain basis.
    let b = q.domain.basis();
    let direct = b.transpose() * &d * b;
    assert_abs_diff_eq!(q.gram, direct, epsilon = 1e-12);
    let mut e = direct.symmetric_eigen().eigenvalues.as_slice().to_vec();
    e.sort_by(f64::total_cmp);
    assert_abs_diff_eq!(e[0], -3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(e[1], 2.0, epsilon = 1e-12);
}

#[test]
fn complex_line_signs() {
    let i = Complex64::new(0.0, 1.0);
    let w = Form::new(DMatrix::from_element(1, 1, i), linrel::FormKind::Skew, tol()).unwrap();
    let rep = classify_subspace(&Subspace::zero(1, tol()), &w).unwrap();
    // i·ω(x, x) = −|x|², so {0} is maximal with sign −1 and modulus 1.
    assert_eq!(rep.maximal_isotropic, Some(true));
    assert_eq!(rep.h_lambda, Some(-1));
    assert_abs_diff_eq!(rep.gamma_lambda.unwrap(), 1.0, epsilon = 1e-12);

    let g = DMatrix::from_diagonal(&linrel::DVector::from_column_slice(&[i, -i]));
    let herm = g.map(|z| z * i);
    let mut ev: Vec<f64> = herm.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    assert_eq!(ev, vec![-1.0, 1.0]);
    let w2 = Form::new(g, linrel::FormKind::Skew, tol()).unwrap();
    let rep = classify_subspace(&Subspace::zero(2, tol()), &w2).unwrap();
    assert!(rep.isotropic);
    assert_eq!(rep.maximal_isotropic, Some(false));
}

#[test]
fn reduction_by_a_line() {
    let w = Form::<f64>::standard_symplectic(2, tol());
    let l = Subspace::coordinate(4, &[0], tol()).unwrap();
    assert_eq!(w.omega_perp(&l).unwrap().dim(), 3);
    let red = reduce(&l, &w).unwrap();
    assert_eq!(red.dim(), 2);
    assert!(red.form.is_nondegenerate());
    let alpha = Subspace::coordinate(4, &[1], tol()).unwrap();
    assert_eq!(reduce_subspace(&alpha, &red).unwrap().dim(), 1);
}

#[test]
fn split_recovers_blocks() {
    let raw = DMatrix::from_column_slice(
        6,
        3,
        &[
            1.0, 0.0, 0.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0, -1.0, 0.0,
        ],
    );
    let t = Relation::span(3, 3, &raw, tol()).unwrap();
    let o = Form::identity(3, tol());
    let sp = transversal_split(&t, &o, None).unwrap();
    assert!(sp.x0.same_as(&Subspace::coordinate(3, &[0], tol()).unwrap()).unwrap());
    assert!(sp.check(&t, &o).unwrap().all());
    let rebuilt = sp.t0.graph().sum(sp.t1.graph()).unwrap();
    assert!(linrel::subspace::hat_delta(&rebuilt, t.graph()).unwrap() <= 1e-9);
}

#[test]
fn witt_examples() {
    let j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let t = Relation::from_operator(&j, tol()).unwrap();
    let w = witt_parity(&t, &Form::identity(2, tol())).unwrap();
    // i·J has eigenvalues ±1.
    assert_eq!((w.dom_dim, w.m_minus_iq, w.ker_q_dim), (2, 1, 0));
    assert!(w.identity_holds);

    let raw = DMatrix::from_column_slice(
        6,
        3,
        &[
            1.0, 0.0, 0.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0, -1.0, 0.0,
        ],
    );
    let t = Relation::span(3, 3, &raw, tol()).unwrap();
    let w = witt_parity(&t, &Form::identity(3, tol())).unwrap();
    assert_eq!((w.dom_dim, w.m_minus_iq, w.ker_q_dim), (3, 1, 1));
}

#[test]
fn hess_kato_products() {
    let e1 = span(&line(0.0));
    let e2 = span(&line(std::f64::consts::FRAC_PI_2));
    let plane = Subspace::<f64>::full(2, tol());
    let r = hess_kato_check(&e1, &plane, &e2).unwrap();
    // δ(ℝ², e₁) = 1 and δ(e₁, e₂) = 1.
    assert_eq!(r.product, 4.0);
    assert!(!r.passes);

    let n = span(&line(0.1));
    let r = hess_kato_check(&e1, &n, &n).unwrap();
    let s = 0.1f64.sin();
    assert_abs_diff_eq!(r.product, (1.0 + s) * (1.0 + s), epsilon = 1e-12);
    assert!(r.passes && r.dims_equal);
}

#[test]
fn pencil_identity_example() {
    let mut rng = linrel::random::rng(5);
    let mut e: DMatrix<f64> = linrel::random::gaussian(3, 3, &mut rng);
    let en = e.clone().svd(false, false).singular_values.max();
    e /= en;
    let t = DMatrix::<f64>::identity(3, 3);
    let s = &t + &e * 0.1;
    let p = PencilParams {
        a: 0.1,
        b1: 0.0,
        b2: 0.0,
        kappa: 0.0,
        kappa_prime: 1.0,
    };
    let r = pencil_gap_bound(&t, &s, &p, 500, 1, tol()).unwrap();
    let gt = Relation::from_operator(&t, tol()).unwrap();
    let gs = Relation::from_operator(&s, tol()).unwrap();
    let (bt, bs) = (qr_basis(&graph_basis(&gt)), qr_basis(&graph_basis(&gs)));
    let oracle = oracle_delta(&bt, &bs, &mut rng).max(oracle_delta(&bs, &bt, &mut rng));
    assert_abs_diff_eq!(r.observed, oracle, epsilon = 1e-9);
    assert_abs_diff_eq!(r.bound, 0.1, epsilon = 1e-12);
    assert!(r.observed <= r.bound && r.holds);
}

#[test]
fn cayley_of_quarter_rotation() {
    let u = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let o = Form::identity(2, tol());
    let t = cayley_forward(&CayleyData::new(u.clone(), o.clone())).unwrap();
    let id = DMatrix::<f64>::identity(2, 2);
    let expect = (&id - &u) * (&id + &u).try_inverse().unwrap();
    let got = t.operator_matrix().unwrap();
    assert_abs_diff_eq!(got, expect, epsilon = 1e-12);
    assert_abs_diff_eq!(&got + got.transpose(), DMatrix::zeros(2, 2), epsilon = 1e-12);
    assert_eq!(t.ker().dim(), 0);
    assert!(omega_adjoint(&t, &o).unwrap().same_as(&t.scale(-1.0)).unwrap());
}

#[test]
fn morse_closed_form_instances() {
    let v = Subspace::<f64>::full(1, tol());
    let one = |x: f64| DMatrix::from_element(1, 1, x);
    let q = SymmetricPair::new(v.clone(), one(1.0)).unwrap();
    let near = SymmetricPair::new(v.clone(), one(0.99)).unwrap();
    let cert = perturbed_morse_certify(&q, &near, 1.0, &v, 1.0).unwrap();
    assert!(cert.hypothesis_certified && cert.conclusion_checked);
    assert_eq!(cert.m_plus_hr, 1);
    let far = SymmetricPair::new(v.clone(), one(-1.0)).unwrap();
    assert!(!perturbed_morse_certify(&q, &far, 1.0, &v, 1.0).unwrap().hypothesis_certified);
}

#[test]
fn modulus_and_norm_conventions() {
    let g = DMatrix::from_diagonal(&linrel::DVector::from_column_slice(&[2.0, 0.0]));
    let p = SymmetricPair::new(Subspace::full(2, tol()), g).unwrap();
    assert_abs_diff_eq!(p.stats().gamma.unwrap(), 2.0, epsilon = 1e-12);
    let z = SymmetricPair::new(Subspace::<f64>::zero(3, tol()), DMatrix::zeros(0, 0)).unwrap();
    assert_eq!(z.norm(), 0.0);
}

#[test]
fn c_gap_of_zero_against_one() {
    let v = Subspace::<f64>::full(1, tol());
    let q = SymmetricPair::new(v.clone(), DMatrix::zeros(1, 1)).unwrap();
    let r = SymmetricPair::new(v, DMatrix::from_element(1, 1, 1.0)).unwrap();
    let iv = c_gap_bounds(&q, &r, 0.0, 1000, 2).unwrap();
    assert!(iv.lo >= 0.25 - 1e-12 && iv.hi <= 1.0 + 1e-12 && iv.lo <= iv.hi);
}

#[test]
fn connect_kernel_plane_to_rotation() {
    let o = Form::identity(2, tol());
    let t0 = Relation::product(&Subspace::full(2, tol()), &Subspace::zero(2, tol()));
    let j = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let t1 = Relation::from_operator(&j, tol()).unwrap();
    let path = connect(&t0, &t1, &o, 8).unwrap();
    assert_eq!(path.parity, 0);
    // Rank oracle: dim ker T(t) = dim ker(U(t) − I).
    let id = DMatrix::<f64>::identity(2, 2);
    for (u, &k) in path.unitaries.iter().zip(&path.ker_dims) {
        let sv = (u - &id).svd(false, false).singular_values;
        let oracle = sv.iter().filter(|&&s| s < 1e-9).count();
        assert_eq!(k, oracle);
        assert_eq!(k % 2, 0);
    }
    assert_eq!(path.ker_dims.first(), Some(&2));
    assert_eq!(path.ker_dims.last(), Some(&0));
}

#[test]
fn mod2_kernel_one_in_three_dims() {
    let o = Form::identity(3, tol());
    let t = linrel::cayley::random_skew_adjoint(3, 1, &o, 9).unwrap();
    assert_eq!(t.ker().dim(), 1);
    let pert = Perturbation {
        form_delta_norm: 0.05,
        relation_delta_norm: 0.05,
    };
    let rep = mod2_experiment(&t, &o, &pert, 1000, 4).unwrap();
    assert_eq!(rep.violations + rep.path_violations, 0);
}
