//! Seeded sweeps over random instances.
//!
//! Trial `i` draws from [`random::trial_rng`]`(seed, i)` and trials run on the
//! rayon pool; tallies are merged by counting, so the outcome does not depend
//! on scheduling.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::cayley::{cayley_forward, cayley_inverse, connect, fixed_space, predicted_mul, random_skew_adjoint_with,
    random_unitary_with_kernel, CayleyData};
use crate::dense;
use crate::error::{Error, Result};
use crate::forms::{Form, FormKind};
use crate::morse::{perturbed_morse_certify, witt_parity, SymmetricPair};
use crate::random;
use crate::relations::{classify_symmetry, require_skew_adjoint_index0};
use crate::report::Report;
use crate::scalar::{Field, Scalar, Tolerance};
use crate::stability::{
    hess_kato_check, max_isotropic_stability, mod2_experiment, operator_gap_bounds, pencil_gap_bound,
    strong_stability, symplectic_extension_check, PencilParams, Perturbation,
};
use crate::subspace::Subspace;

/// Report plus the number of failed assertions.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub failures: usize,
}

/// Random real or complex form with `σ_min ≥ 0.2 σ_max`.
pub fn random_nondegenerate<T: Scalar, R: Rng + ?Sized>(n: usize, tol: Tolerance, rng: &mut R) -> Form<T> {
    loop {
        let g: DMatrix<T> = random::gaussian(n, n, rng);
        let s = dense::singular_values(&g);
        let ok = s.is_empty() || s[s.len() - 1] >= 0.2 * s[0];
        if ok {
            return Form::new(g, FormKind::General, tol).expect("finite Gaussian matrix");
        }
        if n <= 1 {
            continue;
        }
        // Condition the draw instead of rejecting forever in larger dimensions.
        let q: DMatrix<T> = random::haar_unitary(n, rng);
        let d = DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| T::from_real(rng.random_range(0.5..2.0))));
        let w: DMatrix<T> = random::haar_unitary(n, rng);
        return Form::new(q * d * w, FormKind::General, tol).expect("finite");
    }
}

fn par_trials<S: Send, F>(trials: usize, seed: u64, f: F) -> Vec<S>
where
    F: Fn(usize, &mut rand_chacha::ChaCha8Rng) -> S + Sync + Send,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::trial_rng(seed, i as u64);
            f(i, &mut rng)
        })
        .collect()
}

#[derive(Default)]
struct CayleyTally {
    not_selfadjoint: usize,
    kernel_mismatch: usize,
    mul_mismatch: usize,
    roundtrip_failures: usize,
    errors: usize,
    max_defect: f64,
}

fn cayley_trial<T: Scalar>(n: usize, tol: Tolerance, rng: &mut rand_chacha::ChaCha8Rng) -> CayleyTally {
    let mut t = CayleyTally::default();
    let omega: Form<T> = random_nondegenerate(n, tol, rng);
    let u: DMatrix<T> = if rng.random_range(0..3) == 0 {
        let k = rng.random_range(0..=n);
        random_unitary_with_kernel(n, k, rng).expect("k ≤ n")
    } else {
        random::haar_unitary(n, rng)
    };
    let cd = CayleyData::new(u.clone(), omega.clone());
    let mut run = || -> Result<()> {
        let rel = cayley_forward(&cd)?;
        if !classify_symmetry(&rel, &omega, T::from_real(-1.0))?.is_h_selfadjoint {
            t.not_selfadjoint += 1;
        }
        if !rel.ker().same_as(&fixed_space(&u, tol))? {
            t.kernel_mismatch += 1;
        }
        if !rel.mul().same_as(&predicted_mul(&cd)?)? {
            t.mul_mismatch += 1;
        }
        let back = cayley_inverse(&rel, &omega, &cd.q)?;
        let defect = dense::max_abs_entry(&(back - &u));
        t.max_defect = t.max_defect.max(defect);
        if defect > 1e-9 {
            t.roundtrip_failures += 1;
        }
        Ok(())
    };
    if run().is_err() {
        t.errors += 1;
    }
    t
}

/// Forward image skew-adjoint, `ker T = ker(U − I)`, `T0 = R_Ω⁻¹R_Q ker(U + I)`, round trip.
pub fn cayley_suite(trials: usize, max_dim: usize, field: Field, seed: u64, tol: Tolerance) -> Outcome {
    let tallies = par_trials(trials, seed, |i, rng| {
        let n = 1 + i % max_dim.max(1);
        match field {
            Field::Real => cayley_trial::<f64>(n, tol, rng),
            Field::Complex => cayley_trial::<Complex64>(n, tol, rng),
        }
    });
    let sum = |f: fn(&CayleyTally) -> usize| tallies.iter().map(f).sum::<usize>();
    let (a, b, c, d, e) = (
        sum(|t| t.not_selfadjoint),
        sum(|t| t.kernel_mismatch),
        sum(|t| t.mul_mismatch),
        sum(|t| t.roundtrip_failures),
        sum(|t| t.errors),
    );
    let mut r = Report::new();
    r.push("kind", "cayley")
        .push("field", field.to_string())
        .push("trials", trials)
        .push("max_dim", max_dim)
        .push("not_selfadjoint", a)
        .push("kernel_mismatch", b)
        .push("mul_mismatch", c)
        .push("roundtrip_failures", d)
        .push("errors", e)
        .push("max_roundtrip_defect", tallies.iter().map(|t| t.max_defect).fold(0.0, f64::max));
    Outcome {
        report: r,
        failures: a + b + c + d + e,
    }
}

/// `dim dom T = 2 m⁻(iQ_T) + dim ker Q_T` on random real skew-adjoint relations.
pub fn witt_suite(trials: usize, max_dim: usize, seed: u64, tol: Tolerance) -> Outcome {
    let res = par_trials(trials, seed, |i, rng| -> Result<(bool, bool)> {
        let n = 1 + i % max_dim.max(1);
        let k = rng.random_range(0..=n);
        let omega: Form<f64> = random_nondegenerate(n, tol, rng);
        let t = random_skew_adjoint_with(n, k, &omega, rng)?;
        let w = witt_parity(&t, &omega)?;
        Ok((w.identity_holds, w.parity_consistent))
    });
    let errors = res.iter().filter(|r| r.is_err()).count();
    let identity_failures = res.iter().filter(|r| matches!(r, Ok((false, _)))).count();
    let parity_failures = res.iter().filter(|r| matches!(r, Ok((_, false)))).count();
    let mut r = Report::new();
    r.push("kind", "witt")
        .push("trials", trials)
        .push("max_dim", max_dim)
        .push("identity_failures", identity_failures)
        .push("parity_failures", parity_failures)
        .push("errors", errors);
    Outcome {
        report: r,
        failures: identity_failures + parity_failures + errors,
    }
}

/// Mod-2 stability around one random base relation per kernel dimension.
pub fn mod2_suite(n: usize, ker_dims: &[usize], trials: usize, pert: Perturbation, seed: u64, tol: Tolerance) -> Result<Outcome> {
    let mut r = Report::new();
    r.push("kind", "mod2").push("dim", n).push("trials", trials).push("level", pert.level());
    let mut failures = 0;
    for (j, &k) in ker_dims.iter().enumerate() {
        if k > n {
            return Err(Error::InvalidArgument(format!("kernel dimension {k} exceeds {n}")));
        }
        let mut rng = random::trial_rng(seed ^ 0x6d6f_6432, j as u64);
        let omega: Form<f64> = random_nondegenerate(n, tol, &mut rng);
        let t = random_skew_adjoint_with(n, k, &omega, &mut rng)?;
        let rep = mod2_experiment(&t, &omega, &pert, trials, seed.wrapping_add(j as u64))?;
        failures += rep.violations + rep.path_violations;
        let p = format!("ker{k}");
        r.push(format!("{p}.base_parity"), rep.base_parity)
            .push(format!("{p}.violations"), rep.violations)
            .push(format!("{p}.path_violations"), rep.path_violations)
            .push(format!("{p}.min_margin"), rep.min_observed_margin)
            .push(format!("{p}.max_distance"), rep.max_observed_distance);
    }
    Ok(Outcome { report: r, failures })
}

#[derive(Default)]
struct ConnectTally {
    same: usize,
    connected: usize,
    opposite: usize,
    mismatches: usize,
    parity_breaks: usize,
    unexpected: usize,
}

/// Same-parity pairs connect with constant parity; opposite parities are rejected.
pub fn connect_suite(pairs: usize, max_dim: usize, steps: usize, seed: u64, tol: Tolerance) -> Outcome {
    let tallies = par_trials(pairs, seed, |i, rng| {
        let mut t = ConnectTally::default();
        let n = 1 + i % max_dim.max(1);
        let omega: Form<f64> = if rng.random_bool(0.5) {
            Form::identity(n, tol)
        } else {
            random_nondegenerate(n, tol, rng)
        };
        let k0 = rng.random_range(0..=n);
        let want_same = i % 2 == 0;
        let choices: Vec<usize> = (0..=n).filter(|k| (k % 2 == k0 % 2) == want_same).collect();
        let k1 = choices[rng.random_range(0..choices.len())];
        let built = (|| -> Result<_> {
            Ok((
                random_skew_adjoint_with(n, k0, &omega, rng)?,
                random_skew_adjoint_with(n, k1, &omega, rng)?,
            ))
        })();
        let Ok((t0, t1)) = built else {
            t.unexpected += 1;
            return t;
        };
        match connect(&t0, &t1, &omega, steps) {
            Ok(path) if want_same => {
                t.same += 1;
                t.connected += 1;
                let constant = path.ker_dims.iter().all(|k| k % 2 == k0 % 2);
                let adjoint = path.relations.iter().all(|r| require_skew_adjoint_index0(r, &omega).is_ok());
                if !constant || !adjoint || path.endpoint_defect > 1e-8 {
                    t.parity_breaks += 1;
                }
            }
            Err(Error::ParityMismatch(_)) if !want_same => {
                t.opposite += 1;
                t.mismatches += 1;
            }
            _ => {
                if want_same {
                    t.same += 1;
                } else {
                    t.opposite += 1;
                }
                t.unexpected += 1;
            }
        }
        t
    });
    let sum = |f: fn(&ConnectTally) -> usize| tallies.iter().map(f).sum::<usize>();
    let (breaks, unexpected) = (sum(|t| t.parity_breaks), sum(|t| t.unexpected));
    let mut r = Report::new();
    r.push("kind", "connect")
        .push("pairs", pairs)
        .push("same_parity_pairs", sum(|t| t.same))
        .push("connected", sum(|t| t.connected))
        .push("opposite_parity_pairs", sum(|t| t.opposite))
        .push("parity_mismatch_reported", sum(|t| t.mismatches))
        .push("path_failures", breaks)
        .push("unexpected", unexpected);
    Outcome {
        report: r,
        failures: breaks + unexpected,
    }
}

/// Counts for one certifier over a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub instances: usize,
    pub certified: usize,
    pub counterexamples: usize,
    pub preconditions_failed: usize,
}

impl Tally {
    fn add(mut self, o: Tally) -> Tally {
        self.instances += o.instances;
        self.certified += o.certified;
        self.counterexamples += o.counterexamples;
        self.preconditions_failed += o.preconditions_failed;
        self
    }

    fn one(certified: bool, counterexample: bool) -> Tally {
        Tally {
            instances: 1,
            certified: certified as usize,
            counterexamples: counterexample as usize,
            preconditions_failed: 0,
        }
    }

    fn precondition() -> Tally {
        Tally {
            instances: 1,
            preconditions_failed: 1,
            ..Tally::default()
        }
    }
}

fn small_scale<R: Rng + ?Sized>(rng: &mut R, lo_exp: f64, hi_exp: f64) -> f64 {
    10f64.powf(-rng.random_range(lo_exp..hi_exp))
}

fn near_identity<T: Scalar, R: Rng + ?Sized>(n: usize, size: f64, rng: &mut R) -> DMatrix<T> {
    DMatrix::<T>::identity(n, n) + random::with_norm::<T, R>(n, n, size, rng)
}

/// Base Gram `J_m ⊕ i·s·D` (the second block only over ℂ).
fn base_gram<T: Scalar>(m: usize, d: &[f64], sign: f64) -> DMatrix<T> {
    let n = 2 * m + d.len();
    let mut g = DMatrix::<T>::zeros(n, n);
    for i in 0..m {
        g[(i, m + i)] = -T::one();
        g[(m + i, i)] = T::one();
    }
    for (j, &dj) in d.iter().enumerate() {
        g[(2 * m + j, 2 * m + j)] = T::from_c64(Complex64::new(0.0, sign * dj));
    }
    g
}

struct IsotropicInstance<T: Scalar> {
    lambda: Subspace<T>,
    omega0: Form<T>,
    mu: Subspace<T>,
    omega: Form<T>,
}

/// `ω₀ = Pᵀ G P̄` with `λ = P⁻¹ span{e_0..e_{m−1}}`, and a perturbed copy for
/// `μ`; the definite block may be pushed through zero so that some `μ` are
/// not maximal.
fn isotropic_instance<T: Scalar, R: Rng + ?Sized>(max_dim: usize, tol: Tolerance, rng: &mut R) -> Result<IsotropicInstance<T>> {
    let mmax = (max_dim / 2).max(1);
    let m = rng.random_range(1..=mmax);
    let r = if T::FIELD == Field::Complex {
        rng.random_range(0..=(max_dim - 2 * m).min(2))
    } else {
        0
    };
    let n = 2 * m + r;
    let d: Vec<f64> = (0..r).map(|_| rng.random_range(0.5..2.0)).collect();
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let eps = small_scale(rng, 0.0, 4.0);
    let d1: Vec<f64> = d.iter().map(|&x| x * (1.0 - eps * rng.random_range(0.0..3.0))).collect();
    let p: DMatrix<T> = near_identity(n, 0.3, rng);
    let q = &p + random::with_norm::<T, R>(n, n, eps, rng);
    let (pinv, qinv) = match (dense::inverse(&p), dense::inverse(&q)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::PreconditionViolated("singular change of basis".into())),
    };
    let g0 = p.transpose() * base_gram::<T>(m, &d, sign) * dense::conj(&p);
    let g1 = q.transpose() * base_gram::<T>(m, &d1, sign) * dense::conj(&q);
    let skew = |g: DMatrix<T>| (&g - g.adjoint()).scale(0.5);
    let omega0 = Form::new(skew(g0), FormKind::Skew, tol)?;
    let omega = Form::new(skew(g1), FormKind::Skew, tol)?;
    let lambda = Subspace::span(&pinv.columns(0, m).into_owned(), tol)?;
    let keep = if rng.random_range(0..4) == 0 { m - 1 } else { m };
    let mu = Subspace::span(&qinv.columns(0, keep).into_owned(), tol)?;
    Ok(IsotropicInstance { lambda, omega0, mu, omega })
}

fn tally_result<X>(r: Result<X>, f: impl FnOnce(X) -> Tally) -> Tally {
    match r {
        Ok(x) => f(x),
        Err(Error::PreconditionViolated(_))
        | Err(Error::SingularRestriction(_))
        | Err(Error::RelativeBoundUnverified(_))
        | Err(Error::NotNested(_)) => Tally::precondition(),
        Err(_) => Tally {
            instances: 1,
            counterexamples: 1,
            ..Tally::default()
        },
    }
}

fn isotropic_trial<T: Scalar, R: Rng + ?Sized>(max_dim: usize, tol: Tolerance, rng: &mut R) -> (Tally, Tally) {
    match isotropic_instance::<T, R>(max_dim, tol, rng) {
        Ok(inst) => (
            tally_result(max_isotropic_stability(&inst.lambda, &inst.omega0, &inst.mu, &inst.omega), |s| {
                Tally::one(s.hypothesis_certified, s.is_counterexample())
            }),
            tally_result(strong_stability(&inst.lambda, &inst.omega0, &inst.mu, &inst.omega), |s| {
                Tally::one(s.hypothesis_certified, s.is_counterexample())
            }),
        ),
        Err(_) => (Tally::precondition(), Tally::precondition()),
    }
}

fn morse_trial<R: Rng + ?Sized>(max_dim: usize, tol: Tolerance, rng: &mut R) -> Tally {
    let n = rng.random_range(1..=max_dim.max(1));
    let k = rng.random_range(1..=n);
    let v: Subspace<f64> = random::subspace(n, k, tol, rng);
    let eig: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let frame: DMatrix<f64> = random::haar_unitary(n, rng);
    let qa = &frame * DMatrix::from_diagonal(&DVector::from_vec(eig)) * frame.transpose();
    let eps = small_scale(rng, 0.0, 5.0);
    let w = Subspace::span(&(v.basis() + random::with_norm::<f64, R>(n, k, eps, rng)), tol);
    let e: DMatrix<f64> = random::hermitian(n, rng);
    let ra = &qa + e.scale(eps / dense::spectral_norm(&e).max(1e-300));
    let built = (|| -> Result<_> {
        let w = w?;
        let q = SymmetricPair::from_ambient(v.clone(), &qa)?;
        let r = SymmetricPair::from_ambient(w, &ra)?;
        Ok((q, r))
    })();
    let Ok((q, r)) = built else {
        return Tally::precondition();
    };
    let h = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let (vals, vecs) = dense::hermitian_eigen(&q.scale(h).gram().clone());
    let cut = tol.cutoff(q.norm(), k);
    let pos: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > cut).collect();
    if pos.is_empty() {
        return Tally::precondition();
    }
    let take = rng.random_range(1..=pos.len());
    // Coefficient eigenvectors of the Gram are conjugated for the basis map; real here.
    let coeffs = DMatrix::from_fn(k, take, |i, j| vecs[(i, pos[pos.len() - 1 - j])]);
    let Ok(alpha) = Subspace::span(&(v.basis() * coeffs), tol) else {
        return Tally::precondition();
    };
    let c = q.norm() * rng.random_range(0.0..2.0);
    tally_result(perturbed_morse_certify(&q, &r, c, &alpha, h), |m| {
        Tally::one(m.hypothesis_certified, m.is_counterexample())
    })
}

fn hess_kato_trial<R: Rng + ?Sized>(max_dim: usize, tol: Tolerance, rng: &mut R) -> Tally {
    let n = rng.random_range(1..=max_dim.max(1));
    let k = rng.random_range(1..=n);
    let nn: Subspace<f64> = random::subspace(n, k, tol, rng);
    let j = if rng.random_bool(0.5) { k } else { rng.random_range(0..=k) };
    let inner: DMatrix<f64> = random::gaussian(k, j, rng);
    let np = match Subspace::span(&(nn.basis() * inner), tol) {
        Ok(s) => s,
        Err(_) => return Tally::precondition(),
    };
    let eps = small_scale(rng, 0.0, 4.0);
    let m = Subspace::span(&(nn.basis() + random::with_norm::<f64, R>(n, k, eps, rng)), tol);
    tally_result(m.and_then(|m| hess_kato_check(&m, &nn, &np)), |r| {
        Tally::one(r.passes, r.is_counterexample())
    })
}

fn operator_gap_trial<R: Rng + ?Sized>(max_dim: usize, tol: Tolerance, rng: &mut R) -> (Tally, Tally) {
    let n = rng.random_range(1..=max_dim.max(1));
    let rows = rng.random_range(n..=max_dim.max(n));
    let a: DMatrix<f64> = random::gaussian(rows, n, rng);
    let eps = small_scale(rng, 0.0, 4.0);
    let b = &a + random::with_norm::<f64, R>(rows, n, eps, rng);
    let k = rng.random_range(0..=n);
    let m: Subspace<f64> = random::subspace(n, k, tol, rng);
    let nn = if k == 0 {
        Ok(m.clone())
    } else {
        Subspace::span(&(m.basis() + random::with_norm::<f64, R>(n, k, eps, rng)), tol)
    };
    let res = nn.and_then(|nn| operator_gap_bounds(&a, &b, &m, &nn));
    let forward = tally_result(res.clone(), |r| Tally::one(true, !r.holds));
    let reverse = tally_result(res, |r| match r.reverse {
        Some((_, _, holds)) => Tally::one(true, !holds),
        None => Tally::precondition(),
    });
    (forward, reverse)
}

fn pencil_trial<R: Rng + ?Sized>(max_dim: usize, tol: Tolerance, seed: u64, rng: &mut R) -> Tally {
    let n = rng.random_range(1..=max_dim.clamp(1, 6));
    let m = rng.random_range(1..=max_dim.clamp(1, 6));
    let t: DMatrix<f64> = random::gaussian(m, n, rng);
    let eps = small_scale(rng, 0.0, 3.0);
    let s = &t + random::with_norm::<f64, R>(m, n, eps, rng);
    let nd = dense::spectral_norm(&(&t - &s));
    let p = PencilParams {
        a: nd * rng.random_range(0.3..1.3),
        b1: rng.random_range(0.0..0.4),
        b2: rng.random_range(0.0..0.4),
        kappa: rng.random_range(0.0..1.0),
        kappa_prime: rng.random_range(0.0..1.0),
    };
    tally_result(pencil_gap_bound(&t, &s, &p, 2000, seed, tol), |r| Tally::one(true, !r.holds))
}

/// Soundness sweep over every certifier: a certified hypothesis must be
/// followed by its conclusion.
pub fn certifier_suite(instances: usize, max_dim: usize, seed: u64, tol: Tolerance) -> Outcome {
    let rows = par_trials(instances, seed, |i, rng| {
        let (mi_r, st_r) = isotropic_trial::<f64, _>(max_dim, tol, rng);
        let (mi_c, st_c) = isotropic_trial::<Complex64, _>(max_dim, tol, rng);
        let morse = morse_trial(max_dim, tol, rng);
        let hk = hess_kato_trial(max_dim, tol, rng);
        let (og, ogr) = operator_gap_trial(max_dim, tol, rng);
        let pencil = pencil_trial(max_dim, tol, seed.wrapping_add(i as u64), rng);
        [mi_r.add(mi_c), st_r.add(st_c), morse, hk, og, ogr, pencil]
    });
    let names = [
        "max_isotropic",
        "strong",
        "perturbed_morse",
        "hess_kato",
        "operator_gap",
        "operator_gap_reverse",
        "pencil",
    ];
    let mut r = Report::new();
    r.push("kind", "certifiers").push("instances", instances).push("max_dim", max_dim);
    let mut failures = 0;
    for (j, name) in names.iter().enumerate() {
        let t = rows.iter().map(|row| row[j]).fold(Tally::default(), Tally::add);
        failures += t.counterexamples;
        r.push(format!("{name}.instances"), t.instances)
            .push(format!("{name}.certified"), t.certified)
            .push(format!("{name}.preconditions_failed"), t.preconditions_failed)
            .push(format!("{name}.counterexamples"), t.counterexamples);
    }
    Outcome { report: r, failures }
}

pub fn extension_suite(m: usize, n: usize, trials: usize, seed: u64, tol: Tolerance) -> Outcome {
    let e = symplectic_extension_check(m, n, trials, seed, tol);
    let mut r = Report::new();
    r.push("kind", "extension")
        .push("m", m)
        .push("n", n)
        .push("trials", trials)
        .push("nondegenerate", e.nondegenerate)
        .push("violations", e.violations);
    Outcome {
        report: r,
        failures: e.violations,
    }
}

/// Typed access to a parsed config, rejecting unknown keys.
pub struct Config {
    map: BTreeMap<String, String>,
    used: std::cell::RefCell<Vec<String>>,
}

impl Config {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        Config {
            map,
            used: Default::default(),
        }
    }

    fn raw(&self, key: &str) -> Option<&String> {
        self.used.borrow_mut().push(key.to_string());
        self.map.get(key)
    }

    pub fn get<V: std::str::FromStr>(&self, key: &str, default: V) -> Result<V> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| Error::Parse(format!("config key `{key}`: bad value `{s}`"))),
        }
    }

    pub fn list(&self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => s
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("config key `{key}`: bad entry `{p}`")))
                })
                .collect(),
        }
    }

    fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        if let Some(k) = self.map.keys().find(|k| !used.contains(k)) {
            return Err(Error::Parse(format!("unknown config key `{k}`")));
        }
        Ok(())
    }
}

/// Runs the sweep named by `kind`. `seed` overrides the config seed when given.
pub fn run_config(map: BTreeMap<String, String>, seed: Option<u64>, tol: Tolerance) -> Result<Outcome> {
    let cfg = Config::new(map);
    let kind: String = cfg.get("kind", String::new())?;
    let seed = match seed {
        Some(s) => {
            cfg.raw("seed");
            s
        }
        None => cfg.get("seed", 0u64)?,
    };
    let out = match kind.as_str() {
        "cayley" => {
            let trials = cfg.get("trials", 1000)?;
            let max_dim = cfg.get("max_dim", 10)?;
            let field: Field = cfg.get("field", Field::Real)?;
            cayley_suite(trials, max_dim, field, seed, tol)
        }
        "witt" => witt_suite(cfg.get("trials", 1000)?, cfg.get("max_dim", 12)?, seed, tol),
        "mod2" => {
            let n = cfg.get("dim", 8)?;
            let ker = cfg.list("ker_dims", &[0, 1, 2, 3])?;
            let pert = Perturbation {
                form_delta_norm: cfg.get("form_delta", 0.05)?,
                relation_delta_norm: cfg.get("relation_delta", 0.05)?,
            };
            mod2_suite(n, &ker, cfg.get("trials", 1000)?, pert, seed, tol)?
        }
        "connect" => connect_suite(
            cfg.get("pairs", 200)?,
            cfg.get("max_dim", 8)?,
            cfg.get("steps", 8)?,
            seed,
            tol,
        ),
        "certifiers" => certifier_suite(cfg.get("instances", 1000)?, cfg.get("max_dim", 10)?, seed, tol),
        "extension" => extension_suite(cfg.get("m", 2)?, cfg.get("n", 1)?, cfg.get("trials", 100)?, seed, tol),
        "" => return Err(Error::Parse("config needs a `kind`".into())),
        other => return Err(Error::Parse(format!("unknown experiment kind `{other}`"))),
    };
    cfg.finish()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn small_sweeps_pass() {
        for o in [
            cayley_suite(30, 5, Field::Real, 1, tol()),
            cayley_suite(30, 5, Field::Complex, 1, tol()),
            witt_suite(30, 6, 2, tol()),
            connect_suite(12, 4, 5, 3, tol()),
            certifier_suite(20, 6, 4, tol()),
        ] {
            assert_eq!(o.failures, 0, "{}", o.report);
        }
    }

    #[test]
    fn config_dispatch() {
        let cfg = crate::io::parse_config("kind = witt\ntrials = 5\nmax_dim = 4\n").unwrap();
        let a = run_config(cfg.clone(), Some(7), tol()).unwrap();
        let b = run_config(cfg, Some(7), tol()).unwrap();
        assert_eq!(a.report, b.report);
        let bad = crate::io::parse_config("kind = witt\nbogus = 1\n").unwrap();
        assert!(matches!(run_config(bad, None, tol()), Err(Error::Parse(_))));
    }
}
