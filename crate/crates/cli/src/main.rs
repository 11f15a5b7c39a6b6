//! `linrel`: file-driven front end; every subcommand prints a flat
//! `key = value` report.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 precondition failure,
//! 3 a checked assertion or theorem conclusion failed.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linrel::report::Report;
use linrel::{Error, Tolerance};

#[derive(Parser, Debug)]
#[command(name = "linrel", version, about = "Linear relations, forms and gap metrics in K^n")]
struct Cli {
    /// Relative rank tolerance.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_REL)]
    tol: f64,
    /// Seed for sampled quantities.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Directed gaps, gap and minimum gaps between two subspaces.
    Gap(PairArgs),
    /// Intersection dimension, codimension of the sum, and index.
    PairIndex(PairArgs),
    /// Left or right annihilator of a subspace under a form.
    Annihilator(AnnihilatorArgs),
    /// Ω-adjoint of a relation.
    Adjoint(AdjointArgs),
    /// Symmetry class of a relation, or isotropy class of a subspace.
    Classify(ClassifyArgs),
    /// Symplectic reduction by an isotropic subspace.
    Reduce(ReduceArgs),
    /// Transversal splitting of a skew-adjoint relation.
    Split(SplitArgs),
    /// Inertia of a symmetric pair, optionally the perturbed Morse certificate.
    Morse(MorseArgs),
    /// Bounds for the c-gap of two symmetric pairs.
    Cgap(CgapArgs),
    /// Parity identity for a real skew-adjoint relation.
    Witt(WittArgs),
    /// One of the perturbation certifiers.
    Stability(StabilityArgs),
    /// Kernel parity under sampled small perturbations.
    Mod2(Mod2Args),
    /// Cayley transform of a unitary, or its inverse on a relation.
    Cayley(CayleyArgs),
    /// Path between two real skew-adjoint relations of equal kernel parity.
    Connect(ConnectArgs),
    /// Seeded sweep described by a config file.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Args, Debug)]
struct AnnihilatorArgs {
    #[arg(long)]
    form: PathBuf,
    #[arg(long)]
    subspace: PathBuf,
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    side: SideArg,
    /// Write the annihilator basis here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AdjointArgs {
    #[arg(long)]
    relation: PathBuf,
    #[arg(long)]
    form: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    form: PathBuf,
    #[arg(long, conflicts_with = "subspace", required_unless_present = "subspace")]
    relation: Option<PathBuf>,
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// Unit scalar `re` or `re,im` (relations only).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    h: String,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(long)]
    subspace: PathBuf,
    #[arg(long)]
    form: PathBuf,
    /// Subspace to push through the reduction.
    #[arg(long)]
    alpha: Option<PathBuf>,
    /// Write the reduced form here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SplitArgs {
    #[arg(long)]
    relation: PathBuf,
    #[arg(long)]
    form: PathBuf,
    #[arg(long)]
    y0: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MorseArgs {
    /// Ambient Gram matrix of Q.
    #[arg(long)]
    q: PathBuf,
    /// Domain of Q.
    #[arg(long)]
    v: PathBuf,
    #[arg(long, requires_all = ["w", "alpha", "c"])]
    r: Option<PathBuf>,
    #[arg(long)]
    w: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<PathBuf>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    h: f64,
}

#[derive(Args, Debug)]
struct CgapArgs {
    #[arg(long)]
    q: PathBuf,
    #[arg(long)]
    v: PathBuf,
    #[arg(long)]
    r: PathBuf,
    #[arg(long)]
    w: PathBuf,
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
}

#[derive(Args, Debug)]
struct WittArgs {
    #[arg(long)]
    relation: PathBuf,
    #[arg(long)]
    form: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StabilityTest {
    HessKato,
    MaxIsotropic,
    Strong,
    OperatorGap,
    Pencil,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    #[arg(long, value_enum)]
    test: StabilityTest,
    // hess-kato and operator-gap
    #[arg(long)]
    m: Option<PathBuf>,
    #[arg(long)]
    n: Option<PathBuf>,
    #[arg(long)]
    n_prime: Option<PathBuf>,
    // max-isotropic and strong
    #[arg(long)]
    lambda: Option<PathBuf>,
    #[arg(long)]
    omega0: Option<PathBuf>,
    #[arg(long)]
    mu: Option<PathBuf>,
    #[arg(long)]
    omega: Option<PathBuf>,
    // operator-gap (a, b) and pencil (t, s)
    #[arg(long = "op-a")]
    op_a: Option<PathBuf>,
    #[arg(long = "op-b")]
    op_b: Option<PathBuf>,
    #[arg(long)]
    t: Option<PathBuf>,
    #[arg(long)]
    s: Option<PathBuf>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b1: Option<f64>,
    #[arg(long)]
    b2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    kappa_prime: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
}

#[derive(Args, Debug)]
struct Mod2Args {
    #[arg(long)]
    relation: PathBuf,
    #[arg(long)]
    form: PathBuf,
    #[arg(long)]
    form_delta: f64,
    #[arg(long)]
    relation_delta: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
}

#[derive(Args, Debug)]
struct CayleyArgs {
    #[arg(long, conflicts_with = "relation", required_unless_present = "relation")]
    unitary: Option<PathBuf>,
    /// Apply the inverse transform to this relation.
    #[arg(long)]
    relation: Option<PathBuf>,
    #[arg(long)]
    omega: PathBuf,
    /// Inner-product form; the identity when absent.
    #[arg(long)]
    q: Option<PathBuf>,
    /// Write the resulting relation (or unitary) here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConnectArgs {
    #[arg(long)]
    t0: PathBuf,
    #[arg(long)]
    t1: PathBuf,
    /// The identity form when absent.
    #[arg(long)]
    omega: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    steps: usize,
    /// Directory for the sampled relations and manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
}

/// What a subcommand produced: a report and whether a checked claim failed.
pub struct Output {
    pub report: Report,
    pub failed: bool,
}

impl Output {
    pub fn ok(report: Report) -> Self {
        Output { report, failed: false }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidArgument(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = Tolerance::new(cli.tol).and_then(|tol| commands::run(&cli.command, tol, cli.seed));
    match result {
        Ok(out) => {
            print!("{}", out.report);
            ExitCode::from(if out.failed { 3 } else { 0 })
        }
        Err(e) => {
            println!("error = {}", e.name());
            eprintln!("{e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
