use std::fs;
use std::path::Path;

use linrel::cayley::{self, CayleyData};
use linrel::io;
use linrel::morse::{self, SymmetricPair, UpperRule};
use linrel::relations::{classify_symmetry, omega_adjoint};
use linrel::report::{format_f64, Report};
use linrel::scalar::{Field, Scalar, Tolerance};
use linrel::stability::{self, BoundMethod, PencilParams, Perturbation, StabilityReport};
use linrel::subspace::{gap_metrics, pair_index};
use linrel::symplectic::{self, IsotropicReport};
use linrel::{Complex64, DMatrix, Error, Form, Relation, Result, Side};

use crate::inputs::Inputs;
use crate::*;

const DEFAULT_SEED: u64 = 0;

macro_rules! by_field {
    ($inp:expr, $f:ident($($arg:expr),*)) => {
        match $inp.field() {
            Field::Real => $f::<f64>($($arg),*),
            Field::Complex => $f::<Complex64>($($arg),*),
        }
    };
}

pub fn run(cmd: &Command, tol: Tolerance, seed: Option<u64>) -> Result<Output> {
    let s = seed.unwrap_or(DEFAULT_SEED);
    match cmd {
        Command::Gap(a) => {
            let inp = Inputs::new().matrix("left", &a.left)?.matrix("right", &a.right)?;
            by_field!(inp, gap(inp, tol))
        }
        Command::PairIndex(a) => {
            let inp = Inputs::new().matrix("left", &a.left)?.matrix("right", &a.right)?;
            by_field!(inp, pair_idx(inp, tol))
        }
        Command::Annihilator(a) => {
            let inp = Inputs::new().form("form", &a.form)?.matrix("subspace", &a.subspace)?;
            let side = match a.side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            by_field!(inp, annihilator(inp, side, a.out.as_deref(), tol))
        }
        Command::Adjoint(a) => {
            let inp = Inputs::new().relation("relation", &a.relation)?.form("form", &a.form)?;
            by_field!(inp, adjoint(inp, a.out.as_deref(), tol))
        }
        Command::Classify(a) => {
            let inp = Inputs::new().form("form", &a.form)?;
            match (&a.relation, &a.subspace) {
                (Some(r), _) => {
                    let h = parse_scalar(&a.h)?;
                    let inp = inp.relation("relation", r)?;
                    let complex = h.im != 0.0 || inp.field() == Field::Complex;
                    if complex {
                        classify_relation::<Complex64>(inp, h, tol)
                    } else {
                        classify_relation::<f64>(inp, h, tol)
                    }
                }
                (None, Some(sub)) => {
                    let inp = inp.matrix("subspace", sub)?;
                    by_field!(inp, classify_sub(inp, tol))
                }
                (None, None) => Err(Error::InvalidArgument("--relation or --subspace is required".into())),
            }
        }
        Command::Reduce(a) => {
            let inp = Inputs::new()
                .matrix("subspace", &a.subspace)?
                .form("form", &a.form)?
                .opt_matrix("alpha", a.alpha.as_deref())?;
            by_field!(inp, reduce(inp, a.out.as_deref(), tol))
        }
        Command::Split(a) => {
            let inp = Inputs::new()
                .relation("relation", &a.relation)?
                .form("form", &a.form)?
                .opt_matrix("y0", a.y0.as_deref())?;
            by_field!(inp, split(inp, tol))
        }
        Command::Morse(a) => {
            let inp = Inputs::new()
                .matrix("q", &a.q)?
                .matrix("v", &a.v)?
                .opt_matrix("r", a.r.as_deref())?
                .opt_matrix("w", a.w.as_deref())?
                .opt_matrix("alpha", a.alpha.as_deref())?;
            by_field!(inp, morse_cmd(inp, a.c, a.h, tol))
        }
        Command::Cgap(a) => {
            let inp = Inputs::new()
                .matrix("q", &a.q)?
                .matrix("v", &a.v)?
                .matrix("r", &a.r)?
                .matrix("w", &a.w)?;
            by_field!(inp, cgap(inp, a.c, a.samples, s, tol))
        }
        Command::Witt(a) => {
            let mut inp = Inputs::new().relation("relation", &a.relation)?.form("form", &a.form)?;
            inp.require_real("witt")?;
            let t = inp.get_relation::<f64>("relation", tol)?;
            let omega = inp.get_form::<f64>("form", tol)?;
            let w = morse::witt_parity(&t, &omega)?;
            let mut r = Report::new();
            r.push("dom_dim", w.dom_dim)
                .push("m_minus_iq", w.m_minus_iq)
                .push("ker_q_dim", w.ker_q_dim)
                .push("ker_t_dim", w.ker_t_dim)
                .push("identity_holds", w.identity_holds)
                .push("parity_consistent", w.parity_consistent);
            Ok(Output {
                report: r,
                failed: !(w.identity_holds && w.parity_consistent),
            })
        }
        Command::Stability(a) => stability_cmd(a, s, tol),
        Command::Mod2(a) => {
            let mut inp = Inputs::new().relation("relation", &a.relation)?.form("form", &a.form)?;
            inp.require_real("mod2")?;
            let t = inp.get_relation::<f64>("relation", tol)?;
            let omega = inp.get_form::<f64>("form", tol)?;
            let pert = Perturbation {
                form_delta_norm: a.form_delta,
                relation_delta_norm: a.relation_delta,
            };
            let m = stability::mod2_experiment(&t, &omega, &pert, a.trials, s)?;
            let mut r = Report::new();
            r.push("base_ker_dim", m.base_ker_dim)
                .push("base_parity", m.base_parity)
                .push("level", pert.level())
                .push("trials", m.trials)
                .push("violations", m.violations)
                .push("path_violations", m.path_violations)
                .push("max_observed_distance", m.max_observed_distance)
                .push("min_observed_margin", m.min_observed_margin);
            Ok(Output {
                report: r,
                failed: m.violations + m.path_violations > 0,
            })
        }
        Command::Cayley(a) => {
            let inp = Inputs::new().form("omega", &a.omega)?.opt_form("q", a.q.as_deref())?;
            match (&a.unitary, &a.relation) {
                (Some(u), _) => {
                    let inp = inp.matrix("unitary", u)?;
                    by_field!(inp, cayley_fwd(inp, a.out.as_deref(), tol))
                }
                (None, Some(rel)) => {
                    let inp = inp.relation("relation", rel)?;
                    by_field!(inp, cayley_inv(inp, a.out.as_deref(), tol))
                }
                (None, None) => Err(Error::InvalidArgument("--unitary or --relation is required".into())),
            }
        }
        Command::Connect(a) => connect(a, tol),
        Command::Experiment(a) => {
            let map = io::parse_config(&io::read_file(&a.config)?)?;
            let out = linrel::experiment::run_config(map, seed, tol)?;
            Ok(Output {
                report: out.report,
                failed: out.failures > 0,
            })
        }
    }
}

fn parse_scalar(s: &str) -> Result<Complex64> {
    let num = |t: &str| -> Result<f64> {
        t.trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad scalar `{s}`")))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

fn scalar_text<T: Scalar>(z: T) -> String {
    let z = z.to_c64();
    match T::FIELD {
        Field::Real => format_f64(z.re),
        Field::Complex => format!("{},{}", format_f64(z.re), format_f64(z.im)),
    }
}

fn write_out(path: Option<&Path>, text: String) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn max_abs_diff<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (*x - *y).to_c64().norm()).fold(0.0, f64::max)
}

fn opt_text(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), format_f64)
}

fn gap<T: Scalar>(mut inp: Inputs, tol: Tolerance) -> Result<Output> {
    let m = inp.get_subspace::<T>("left", tol)?;
    let n = inp.get_subspace::<T>("right", tol)?;
    let g = gap_metrics(&m, &n)?;
    let mut r = Report::new();
    r.push("field", T::FIELD.to_string())
        .push("dim_left", m.dim())
        .push("dim_right", n.dim())
        .push("delta_lr", g.delta_mn)
        .push("delta_rl", g.delta_nm)
        .push("hat_delta", g.hat_delta)
        .push("gamma_lr", g.gamma_mn)
        .push("gamma_rl", g.gamma_nm)
        .push("hat_gamma", g.hat_gamma);
    Ok(Output::ok(r))
}

fn pair_idx<T: Scalar>(mut inp: Inputs, tol: Tolerance) -> Result<Output> {
    let m = inp.get_subspace::<T>("left", tol)?;
    let n = inp.get_subspace::<T>("right", tol)?;
    let p = pair_index(&m, &n)?;
    let mut r = Report::new();
    r.push("dim_intersection", p.dim_intersection)
        .push("codim_sum", p.codim_sum)
        .push("index", p.index);
    Ok(Output::ok(r))
}

fn annihilator<T: Scalar>(mut inp: Inputs, side: Side, out: Option<&Path>, tol: Tolerance) -> Result<Output> {
    let omega = inp.get_form::<T>("form", tol)?;
    let s = inp.get_subspace::<T>("subspace", tol)?;
    let ann = omega.annihilator(&s, side)?;
    let other = match side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    };
    // In finite dimensions the double annihilator is the subspace itself
    // whenever the form is nondegenerate on the side we come back through.
    let back = omega.annihilator(&ann, other)?;
    let nondegenerate = omega.is_nondegenerate();
    let double_ok = back.same_as(&s)?;
    let mut r = Report::new();
    r.push("side", if side == Side::Left { "left" } else { "right" })
        .push("dim", ann.dim())
        .push("ambient_dim", ann.ambient_dim())
        .push("double_annihilator", double_ok);
    write_out(out, io::write_matrix(ann.basis()))?;
    Ok(Output {
        report: r,
        failed: nondegenerate && !double_ok,
    })
}

fn push_parts<T: Scalar>(r: &mut Report, prefix: &str, a: &Relation<T>) {
    r.push(format!("{prefix}dim"), a.dim())
        .push(format!("{prefix}dom_dim"), a.dom().dim())
        .push(format!("{prefix}ran_dim"), a.ran().dim())
        .push(format!("{prefix}ker_dim"), a.ker().dim())
        .push(format!("{prefix}mul_dim"), a.mul().dim());
}

fn adjoint<T: Scalar>(mut inp: Inputs, out: Option<&Path>, tol: Tolerance) -> Result<Output> {
    let a = inp.get_relation::<T>("relation", tol)?;
    let omega = inp.get_form::<T>("form", tol)?;
    let adj = omega_adjoint(&a, &omega)?;
    let back = omega_adjoint(&adj, &omega)?;
    let involution = back.same_as(&a)?;
    let mut r = Report::new();
    push_parts(&mut r, "", &adj);
    r.push("involution", involution);
    write_out(out, io::write_relation(&adj))?;
    Ok(Output {
        report: r,
        failed: !involution,
    })
}

fn classify_relation<T: Scalar>(mut inp: Inputs, h: Complex64, tol: Tolerance) -> Result<Output> {
    let a = inp.get_relation::<T>("relation", tol)?;
    let omega = inp.get_form::<T>("form", tol)?;
    let h = T::from_c64(h);
    let s = classify_symmetry(&a, &omega, h)?;
    let idx = a.index_and_parity();
    let mut r = Report::new();
    r.push("h", scalar_text(s.h))
        .push("is_h_symmetric", s.is_h_symmetric)
        .push("is_h_selfadjoint", s.is_h_selfadjoint)
        .push("is_maximal_h_symmetric", s.is_maximal_h_symmetric)
        .push("extension_dim", s.extension_dim)
        .push("adjoint_dim", s.adjoint.dim())
        .push("ker_dim", idx.ker_dim)
        .push("coker_dim", idx.coker_dim)
        .push("index", idx.index)
        .push("parity", idx.parity)
        .push("warnings", s.warnings.len());
    Ok(Output::ok(r))
}

fn push_isotropic(r: &mut Report, prefix: &str, rep: &IsotropicReport) {
    let maximal = match rep.maximal_isotropic {
        Some(b) => b.to_string(),
        None => "undecided".into(),
    };
    let sign = rep.h_lambda.map_or_else(|| "undefined".to_string(), |h| h.to_string());
    r.push(format!("{prefix}isotropic"), rep.isotropic)
        .push(format!("{prefix}coisotropic"), rep.coisotropic)
        .push(format!("{prefix}symplectic"), rep.symplectic_subspace)
        .push(format!("{prefix}lagrangian"), rep.lagrangian)
        .push(format!("{prefix}maximal_isotropic"), maximal)
        .push(format!("{prefix}h_lambda"), sign)
        .push(format!("{prefix}gamma_lambda"), opt_text(rep.gamma_lambda))
        .push(format!("{prefix}reduced_dim"), rep.reduced_dim);
}

fn classify_sub<T: Scalar>(mut inp: Inputs, tol: Tolerance) -> Result<Output> {
    let omega = inp.get_form::<T>("form", tol)?;
    let s = inp.get_subspace::<T>("subspace", tol)?;
    let rep = symplectic::classify_subspace(&s, &omega)?;
    let mut r = Report::new();
    r.push("dim", s.dim());
    push_isotropic(&mut r, "", &rep);
    r.push("warnings", rep.warnings.len());
    Ok(Output::ok(r))
}

fn reduce<T: Scalar>(mut inp: Inputs, out: Option<&Path>, tol: Tolerance) -> Result<Output> {
    let omega = inp.get_form::<T>("form", tol)?;
    let lambda = inp.get_subspace::<T>("subspace", tol)?;
    let red = symplectic::reduce(&lambda, &omega)?;
    let mut r = Report::new();
    r.push("lambda_dim", lambda.dim())
        .push("lambda_omega_dim", red.lambda_omega.dim())
        .push("reduced_dim", red.dim())
        .push("reduced_nondegenerate", red.form.is_nondegenerate());
    let mut failed = !red.form.is_nondegenerate();
    if inp.has("alpha") {
        let alpha = inp.get_subspace::<T>("alpha", tol)?;
        let a1 = symplectic::reduce_subspace(&alpha, &red)?;
        let a2 = symplectic::reduce_subspace_alt(&alpha, &red)?;
        let agree = a1.same_as(&a2)?;
        r.push("reduced_alpha_dim", a1.dim()).push("descriptions_agree", agree);
        failed |= !agree;
    }
    write_out(out, io::write_form(&red.form))?;
    Ok(Output { report: r, failed })
}

fn split<T: Scalar>(mut inp: Inputs, tol: Tolerance) -> Result<Output> {
    let t = inp.get_relation::<T>("relation", tol)?;
    let omega = inp.get_form::<T>("form", tol)?;
    let y0 = if inp.has("y0") {
        Some(inp.get_subspace::<T>("y0", tol)?)
    } else {
        None
    };
    let sp = symplectic::transversal_split(&t, &omega, y0.as_ref())?;
    let id = sp.check(&t, &omega)?;
    let mut r = Report::new();
    r.push("x0_dim", sp.x0.dim())
        .push("x1_dim", sp.x1.dim())
        .push("y0_dim", sp.y0.dim())
        .push("y1_dim", sp.y1.dim())
        .push("y0_auto", sp.y0_auto)
        .push("x0_is_y1_ann", id.x0_is_y1_ann)
        .push("x1_is_y0_ann", id.x1_is_y0_ann)
        .push("y0_is_x1_ann", id.y0_is_x1_ann)
        .push("y1_is_x0_ann", id.y1_is_x0_ann)
        .push("x_direct", id.x_direct)
        .push("y_direct", id.y_direct)
        .push("t1_invertible", id.t1_invertible)
        .push("reassembles", id.reassembles)
        .push("ker_q_is_ker_t", id.ker_q_is_ker_t);
    Ok(Output {
        report: r,
        failed: !id.all(),
    })
}

fn pair<T: Scalar>(inp: &mut Inputs, q: &str, v: &str, tol: Tolerance) -> Result<SymmetricPair<T>> {
    let g = inp.get_matrix::<T>(q)?;
    let dom = inp.get_subspace::<T>(v, tol)?;
    SymmetricPair::from_ambient(dom, &g)
}

fn morse_cmd<T: Scalar>(mut inp: Inputs, c: Option<f64>, h: f64, tol: Tolerance) -> Result<Output> {
    let q = pair::<T>(&mut inp, "q", "v", tol)?;
    let st = q.stats();
    let mut r = Report::new();
    r.push("dim", q.domain().dim())
        .push("norm", st.norm)
        .push("m_plus", st.m_plus)
        .push("m_minus", st.m_minus)
        .push("m_zero", st.m_zero)
        .push("gamma", opt_text(st.gamma));
    if !inp.has("r") {
        return Ok(Output::ok(r));
    }
    let rp = pair::<T>(&mut inp, "r", "w", tol)?;
    let alpha = inp.get_subspace::<T>("alpha", tol)?;
    let c = c.ok_or_else(|| Error::InvalidArgument("--c is required with --r".into()))?;
    let cert = morse::perturbed_morse_certify(&q, &rp, c, &alpha, h)?;
    r.push("k", cert.k)
        .push("gamma_alpha", cert.gamma_alpha)
        .push("delta_c_upper", cert.delta_c_upper)
        .push("delta_vw", cert.delta_vw)
        .push("lhs", cert.lhs)
        .push("rhs", cert.rhs)
        .push("hypothesis_certified", cert.hypothesis_certified)
        .push("m_plus_hr", cert.m_plus_hr)
        .push("conclusion_checked", cert.conclusion_checked);
    Ok(Output {
        report: r,
        failed: cert.is_counterexample(),
    })
}

fn cgap<T: Scalar>(mut inp: Inputs, c: f64, samples: usize, seed: u64, tol: Tolerance) -> Result<Output> {
    let q = pair::<T>(&mut inp, "q", "v", tol)?;
    let rp = pair::<T>(&mut inp, "r", "w", tol)?;
    let b = morse::c_gap_bounds(&q, &rp, c, samples, seed)?;
    let rule = match b.rule {
        UpperRule::SameDomain => "same_domain",
        UpperRule::Range => "range",
    };
    let mut r = Report::new();
    r.push("lo", b.lo)
        .push("hi", b.hi)
        .push("rule", rule)
        .push("diff_norm", opt_text(b.diff_norm));
    Ok(Output::ok(r))
}

fn push_stability(r: &mut Report, s: &StabilityReport) {
    for (k, v) in &s.quantities {
        r.push(*k, *v);
    }
    r.push("lhs", s.lhs)
        .push("rhs", s.rhs)
        .push("hypothesis_certified", s.hypothesis_certified)
        .push("conclusion_observed", s.conclusion_observed)
        .push("conclusion_checked", s.conclusion_checked);
    push_isotropic(r, "mu_", &s.mu_report);
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{name} is required")))
}

fn stability_cmd(a: &StabilityArgs, seed: u64, tol: Tolerance) -> Result<Output> {
    match a.test {
        StabilityTest::HessKato => {
            let inp = Inputs::new()
                .req_matrix("m", a.m.as_deref())?
                .req_matrix("n", a.n.as_deref())?
                .req_matrix("n_prime", a.n_prime.as_deref())?;
            by_field!(inp, hess_kato(inp, tol))
        }
        StabilityTest::MaxIsotropic | StabilityTest::Strong => {
            let inp = Inputs::new()
                .req_matrix("lambda", a.lambda.as_deref())?
                .req_form("omega0", a.omega0.as_deref())?
                .req_matrix("mu", a.mu.as_deref())?
                .req_form("omega", a.omega.as_deref())?;
            let strong = matches!(a.test, StabilityTest::Strong);
            by_field!(inp, isotropic_stability(inp, strong, tol))
        }
        StabilityTest::OperatorGap => {
            let inp = Inputs::new()
                .req_matrix("op_a", a.op_a.as_deref())?
                .req_matrix("op_b", a.op_b.as_deref())?
                .req_matrix("m", a.m.as_deref())?
                .req_matrix("n", a.n.as_deref())?;
            by_field!(inp, operator_gap(inp, tol))
        }
        StabilityTest::Pencil => {
            let inp = Inputs::new()
                .req_matrix("t", a.t.as_deref())?
                .req_matrix("s", a.s.as_deref())?;
            let p = PencilParams {
                a: need(a.a, "a")?,
                b1: need(a.b1, "b1")?,
                b2: need(a.b2, "b2")?,
                kappa: need(a.kappa, "kappa")?,
                kappa_prime: need(a.kappa_prime, "kappa-prime")?,
            };
            by_field!(inp, pencil(inp, p, a.samples, seed, tol))
        }
    }
}

fn hess_kato<T: Scalar>(mut inp: Inputs, tol: Tolerance) -> Result<Output> {
    let m = inp.get_subspace::<T>("m", tol)?;
    let n = inp.get_subspace::<T>("n", tol)?;
    let np = inp.get_subspace::<T>("n_prime", tol)?;
    let h = stability::hess_kato_check(&m, &n, &np)?;
    let mut r = Report::new();
    r.push("product", h.product)
        .push("hypothesis_certified", h.passes)
        .push("dims_equal", h.dims_equal);
    Ok(Output {
        report: r,
        failed: h.is_counterexample(),
    })
}

fn isotropic_stability<T: Scalar>(mut inp: Inputs, strong: bool, tol: Tolerance) -> Result<Output> {
    let lambda = inp.get_subspace::<T>("lambda", tol)?;
    let omega0 = inp.get_form::<T>("omega0", tol)?;
    let mu = inp.get_subspace::<T>("mu", tol)?;
    let omega = inp.get_form::<T>("omega", tol)?;
    let s = if strong {
        stability::strong_stability(&lambda, &omega0, &mu, &omega)?
    } else {
        stability::max_isotropic_stability(&lambda, &omega0, &mu, &omega)?
    };
    let mut r = Report::new();
    push_stability(&mut r, &s);
    Ok(Output {
        report: r,
        failed: s.is_counterexample(),
    })
}

fn operator_gap<T: Scalar>(mut inp: Inputs, tol: Tolerance) -> Result<Output> {
    let a = inp.get_matrix::<T>("op_a")?;
    let b = inp.get_matrix::<T>("op_b")?;
    let m = inp.get_subspace::<T>("m", tol)?;
    let n = inp.get_subspace::<T>("n", tol)?;
    let g = stability::operator_gap_bounds(&a, &b, &m, &n)?;
    let mut r = Report::new();
    r.push("c_norm", g.c_norm)
        .push("bound", g.bound_a)
        .push("observed", g.observed)
        .push("holds", g.holds);
    let mut failed = !g.holds;
    if let Some((bound, obs, holds)) = g.reverse {
        r.push("reverse_bound", bound)
            .push("reverse_observed", obs)
            .push("reverse_holds", holds);
        failed |= !holds;
    }
    Ok(Output { report: r, failed })
}

fn pencil<T: Scalar>(mut inp: Inputs, p: PencilParams, samples: usize, seed: u64, tol: Tolerance) -> Result<Output> {
    let t = inp.get_matrix::<T>("t")?;
    let s = inp.get_matrix::<T>("s")?;
    let rep = stability::pencil_gap_bound(&t, &s, &p, samples, seed, tol)?;
    let method = match rep.method {
        BoundMethod::Norm => "norm",
        BoundMethod::Quadratic => "quadratic",
        BoundMethod::Sampled => "sampled",
    };
    let mut r = Report::new();
    r.push("method", method)
        .push("bound", rep.bound)
        .push("observed", rep.observed)
        .push("holds", rep.holds);
    Ok(Output {
        report: r,
        failed: !rep.holds,
    })
}

fn cayley_data<T: Scalar>(inp: &mut Inputs, u: DMatrix<T>, tol: Tolerance) -> Result<CayleyData<T>> {
    let omega = inp.get_form::<T>("omega", tol)?;
    let cd = CayleyData::new(u, omega);
    Ok(if inp.has("q") {
        cd.with_q(inp.get_form::<T>("q", tol)?)
    } else {
        cd
    })
}

fn cayley_fwd<T: Scalar>(mut inp: Inputs, out: Option<&Path>, tol: Tolerance) -> Result<Output> {
    let u = inp.get_matrix::<T>("unitary")?;
    let cd = cayley_data(&mut inp, u, tol)?;
    let t = cayley::cayley_forward(&cd)?;
    let sym = classify_symmetry(&t, &cd.omega, T::from_real(-1.0))?;
    let fixed = cayley::fixed_space(&cd.u, tol);
    let kernel_matches = t.ker().same_as(&fixed)?;
    let mul_matches = t.mul().same_as(&cayley::predicted_mul(&cd)?)?;
    let back = cayley::cayley_inverse(&t, &cd.omega, &cd.q)?;
    let defect = max_abs_diff(&back, &cd.u);
    let idx = t.index_and_parity();
    let mut r = Report::new();
    r.push("n", cd.u.nrows())
        .push("ker_dim", idx.ker_dim)
        .push("mul_dim", t.mul().dim())
        .push("index", idx.index)
        .push("parity", idx.parity)
        .push("skew_adjoint", sym.is_h_selfadjoint)
        .push("kernel_matches", kernel_matches)
        .push("mul_matches", mul_matches)
        .push("roundtrip_defect", defect);
    write_out(out, io::write_relation(&t))?;
    Ok(Output {
        report: r,
        failed: !(sym.is_h_selfadjoint && kernel_matches && mul_matches && defect <= 1e-9),
    })
}

fn cayley_inv<T: Scalar>(mut inp: Inputs, out: Option<&Path>, tol: Tolerance) -> Result<Output> {
    let t = inp.get_relation::<T>("relation", tol)?;
    let n = t.nx();
    let cd = cayley_data(&mut inp, DMatrix::<T>::identity(n, n), tol)?;
    let u = cayley::cayley_inverse(&t, &cd.omega, &cd.q)?;
    let defect = max_abs_diff(&(u.adjoint() * &u), &DMatrix::<T>::identity(n, n));
    let fixed = cayley::fixed_space(&u, tol);
    let kernel_matches = fixed.same_as(t.ker())?;
    let mut r = Report::new();
    r.push("n", n)
        .push("ker_dim", t.ker().dim())
        .push("fixed_dim", fixed.dim())
        .push("kernel_matches", kernel_matches)
        .push("unitarity_defect", defect);
    write_out(out, io::write_matrix(&u))?;
    Ok(Output {
        report: r,
        failed: !kernel_matches,
    })
}

fn connect(a: &ConnectArgs, tol: Tolerance) -> Result<Output> {
    let mut inp = Inputs::new()
        .relation("t0", &a.t0)?
        .relation("t1", &a.t1)?
        .opt_form("omega", a.omega.as_deref())?;
    inp.require_real("connect")?;
    let t0 = inp.get_relation::<f64>("t0", tol)?;
    let t1 = inp.get_relation::<f64>("t1", tol)?;
    let omega = if inp.has("omega") {
        inp.get_form::<f64>("omega", tol)?
    } else {
        Form::identity(t0.nx(), tol)
    };
    let path = cayley::connect(&t0, &t1, &omega, a.steps)?;
    let constant = path.ker_dims.iter().all(|k| (k % 2) as u8 == path.parity);
    let dims: Vec<String> = path.ker_dims.iter().map(|k| k.to_string()).collect();
    let mut r = Report::new();
    r.push("n", t0.nx())
        .push("steps", path.relations.len())
        .push("parity", path.parity)
        .push("ker_dims", dims.join(","))
        .push("parity_constant", constant)
        .push("endpoint_defect", path.endpoint_defect);
    if let Some(dir) = &a.out {
        let n = path.relations.len();
        let ts: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        io::write_path(dir, &ts, &path.relations)?;
    }
    Ok(Output {
        report: r,
        failed: !constant,
    })
}
