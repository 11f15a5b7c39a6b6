mod common;

use linrel::cayley::{cayley_forward, cayley_inverse, random_unitary_with_kernel, CayleyData};
use linrel::experiment::random_nondegenerate;
use linrel::forms::Form;
use linrel::io;
use linrel::morse::{c_gap_bounds, pair_stats, witt_parity, SymmetricPair};
use linrel::random;
use linrel::subspace::{gap_metrics, pair_index};
use linrel::{Complex64, DMatrix, Subspace};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn gap_close(a: &linrel::GapReport, b: &linrel::GapReport) -> bool {
    let pairs = [
        (a.delta_mn, b.delta_mn),
        (a.delta_nm, b.delta_nm),
        (a.gamma_mn, b.gamma_mn),
        (a.gamma_nm, b.gamma_nm),
    ];
    pairs.iter().all(|(x, y)| (x - y).abs() < 1e-9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn span_ignores_the_spanning_set(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = random::rng(seed);
        let (rm, rn) = random_raw_pair(&mut rng, d);
        let km = rm.ncols();
        let mix: DMatrix<f64> = random::haar_unitary::<f64, _>(km, &mut rng)
            * DMatrix::from_diagonal(&linrel::DVector::from_fn(km, |_, _| rng.random_range(0.5..3.0)));
        let m = Subspace::span(&rm, tol()).unwrap();
        let m2 = Subspace::span(&(&rm * mix), tol()).unwrap();
        let n = Subspace::span(&rn, tol()).unwrap();
        prop_assert!(m.same_as(&m2).unwrap());
        prop_assert!(gap_close(&gap_metrics(&m, &n).unwrap(), &gap_metrics(&m2, &n).unwrap()));
        prop_assert_eq!(pair_index(&m, &n).unwrap(), pair_index(&m2, &n).unwrap());
    }

    #[test]
    fn gap_ranges_and_symmetry(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (rm, rn) = random_raw_pair(&mut rng, 6);
        let (m, n) = (Subspace::span(&rm, tol()).unwrap(), Subspace::span(&rn, tol()).unwrap());
        let g = gap_metrics(&m, &n).unwrap();
        let h = gap_metrics(&n, &m).unwrap();
        for v in [g.delta_mn, g.delta_nm, g.gamma_mn, g.gamma_nm] {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
        }
        prop_assert_eq!(g.hat_delta, h.hat_delta);
        prop_assert_eq!(g.hat_gamma, h.hat_gamma);
        // Equal dimensions give equal directed gaps.
        if m.dim() == n.dim() {
            prop_assert!((g.delta_mn - g.delta_nm).abs() < 1e-9);
        }
        let p = pair_index(&m, &n).unwrap();
        prop_assert_eq!(p.index, m.dim() as i64 + n.dim() as i64 - m.ambient_dim() as i64);
    }

    #[test]
    fn double_annihilator(seed in any::<u64>()) {
        prop_assert_eq!(double_annihilator_suite(4, seed), 0);
    }

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>()) {
        prop_assert_eq!(adjoint_involution_suite(4, seed), 0);
    }

    #[test]
    fn h_symmetric_index_is_nonpositive(seed in any::<u64>()) {
        prop_assert_eq!(index_suite(4, seed), 0);
    }

    #[test]
    fn real_maximal_isotropic_is_lagrangian(seed in any::<u64>()) {
        prop_assert_eq!(lagrangian_suite(4, seed).1, 0);
    }

    #[test]
    fn pair_stats_do_not_depend_on_the_basis(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = random::rng(seed);
        let k = rng.random_range(0..=d);
        let raw: DMatrix<Complex64> = random::gaussian(d, k, &mut rng);
        let q: DMatrix<Complex64> = random_herm(d, 2.0, &mut rng);
        let v1 = Subspace::span(&raw, tol()).unwrap();
        let mix: DMatrix<Complex64> = random::gaussian(k, k, &mut rng);
        let v2 = Subspace::span(&(&raw * mix), tol()).unwrap();
        let a = pair_stats(&SymmetricPair::from_ambient(v1, &q).unwrap());
        let b = pair_stats(&SymmetricPair::from_ambient(v2, &q).unwrap());
        prop_assert_eq!((a.m_plus, a.m_minus, a.m_zero), (b.m_plus, b.m_minus, b.m_zero));
        prop_assert!((a.norm - b.norm).abs() < 1e-9 * (1.0 + a.norm));
        prop_assert_eq!(a.m_plus + a.m_minus + a.m_zero, k);
    }

    #[test]
    fn c_gap_interval_is_ordered(seed in any::<u64>(), c in 0.0f64..3.0) {
        let mut rng = random::rng(seed);
        let d = rng.random_range(1..=4);
        let (v, w): (Subspace<f64>, Subspace<f64>) = (
            random::subspace(d, rng.random_range(0..=d), tol(), &mut rng),
            random::subspace(d, rng.random_range(0..=d), tol(), &mut rng),
        );
        let qg: DMatrix<f64> = random_herm(v.dim(), 1.0, &mut rng);
        let rg: DMatrix<f64> = random_herm(w.dim(), 1.0, &mut rng);
        let q = SymmetricPair::new(v, qg).unwrap();
        let r = SymmetricPair::new(w, rg).unwrap();
        let iv = c_gap_bounds(&q, &r, c, 300, seed).unwrap();
        prop_assert!(0.0 <= iv.lo && iv.lo <= iv.hi);
        prop_assert!(iv.hi <= q.norm().max(r.norm()) + 1e-12 || iv.diff_norm.is_some());
    }

    #[test]
    fn cayley_round_trip_and_kernel(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = random::rng(seed);
        let k = rng.random_range(0..=n);
        let omega: Form<f64> = random_nondegenerate(n, tol(), &mut rng);
        let u: DMatrix<f64> = random_unitary_with_kernel(n, k, &mut rng).unwrap();
        let cd = CayleyData::new(u.clone(), omega.clone());
        let t = cayley_forward(&cd).unwrap();
        prop_assert_eq!(t.ker().dim(), k);
        let back = cayley_inverse(&t, &omega, &cd.q).unwrap();
        prop_assert!((back - u).amax() < 1e-9);
        let w = witt_parity(&t, &omega).unwrap();
        prop_assert!(w.identity_holds && w.parity_consistent);
    }

    #[test]
    fn matrix_text_round_trip(rows in 0usize..4, cols in 0usize..4, vals in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 16)) {
        let m = DMatrix::from_fn(rows, cols, |i, j| vals[i * 4 + j]);
        let back = io::parse_matrix(&io::write_matrix(&m)).unwrap().into_real().unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn complex_matrix_text_round_trip(re in prop::collection::vec(-1e6f64..1e6, 4), im in prop::collection::vec(-1e-3f64..1e-3, 4)) {
        let m = DMatrix::from_fn(2, 2, |i, j| Complex64::new(re[2 * i + j], im[2 * i + j]));
        let back = io::parse_matrix(&io::write_matrix(&m)).unwrap().into_complex();
        prop_assert_eq!(back, m);
    }
}
