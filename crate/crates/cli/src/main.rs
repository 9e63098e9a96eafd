//! `umetrics`: unitary-group metrics and seeded inequality suites from the
//! command line.
//!
//! Exit codes: 0 success, 1 a suite found violations, 2 usage or numerical
//! error.

mod check;
mod output;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use umetrics::inequalities::trial_rng;
use umetrics::linalg::{gue_hermitian, haar_unitary};
use umetrics::metrics::{cost, eigenphases, metric, pseudo_metric, relative_phases};
use umetrics::{ComplexMatrix, SymmetricNormSpec, Tolerances};

use crate::check::{RunConfig, SuiteName, TolOverrides};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "umetrics",
    version,
    about = "Symmetric-norm metrics on U(n) and seeded eigenphase inequality suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed.
    #[arg(long, global = true, env = "UMETRICS_SEED", default_value_t = 0)]
    seed: u64,

    /// Dimensions for `check`, comma separated (1..=64).
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    dims: Vec<usize>,

    /// Trials per suite run.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,

    /// Norm spec; repeat the flag for several (`mu:random` draws seeded
    /// positive weights per dimension).
    #[arg(long = "norm", global = true)]
    norms: Vec<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Multiplier applied to every suite slack.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol: f64,

    #[command(flatten)]
    tol_overrides: TolOverrides,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Metric d_g(X, Y) from the eigenphases of X Y*.
    Metric(PairArgs),
    /// Phase-invariant pseudo-metric, minimized over a global phase.
    PseudoMetric(PairArgs),
    /// Principal eigenphases of a unitary, descending.
    Eigenphases {
        /// Matrix JSON file (`-` for stdin).
        x: PathBuf,
    },
    /// Cost f(X) = pseudo-metric(X, I).
    Cost {
        x: PathBuf,
        /// Norm spec (falls back to the first `--norm`, then `l2`).
        norm: Option<String>,
    },
    /// Run an inequality suite.
    Check(CheckArgs),
    /// Sample random matrices as JSON lines.
    Sample {
        kind: SampleKind,
        n: usize,
        #[arg(default_value_t = 1)]
        count: usize,
        /// GUE scale factor.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
}

#[derive(Debug, clap::Args)]
struct PairArgs {
    /// Matrix JSON file (`-` for stdin).
    x: PathBuf,
    /// Matrix JSON file (`-` for stdin).
    y: PathBuf,
    /// Norm spec (falls back to the first `--norm`, then `l2`).
    norm: Option<String>,
}

#[derive(Debug, clap::Args)]
struct CheckArgs {
    suite: SuiteName,
    /// Restrict Lidskii suites to index sequences of this length.
    #[arg(long)]
    p: Option<usize>,
    /// Perturbation sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.1, 0.5])]
    eps: Vec<f64>,
    /// Index sets for `general-lidskii`, e.g. '{"I":[2],"J":[2],"K":[2]}'.
    #[arg(long)]
    sets: Option<String>,
    /// Pairs for the isotonicity stage of `schur-transfer`.
    #[arg(long, default_value_t = 1000)]
    iso_trials: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SampleKind {
    Haar,
    Gue,
}

/// A failure with its exit code and one-line diagnostic.
struct Failure {
    code: u8,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((text, code)) => match emit(&cli.output, &text) {
            Ok(()) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let tol = Tolerances::default();
    match &cli.command {
        Command::Metric(args) => {
            let (x, y) = (read_matrix(&args.x)?, read_matrix(&args.y)?);
            let norm = pair_norm(cli, args.norm.as_deref(), &x)?;
            let value = metric(&norm, &x, &y)?;
            let phases = relative_phases(&norm, &x, &y, &tol)?;
            let mut out = Map::new();
            out.insert("value".into(), json!(value));
            out.insert("phases".into(), json!(phases.as_slice()));
            Ok((output::object(cli.format, &out), 0))
        }
        Command::PseudoMetric(args) => {
            let (x, y) = (read_matrix(&args.x)?, read_matrix(&args.y)?);
            let norm = pair_norm(cli, args.norm.as_deref(), &x)?;
            let min = pseudo_metric(&norm, &x, &y)?;
            let phases = relative_phases(&norm, &x, &y, &tol)?;
            let mut out = Map::new();
            out.insert("value".into(), json!(min.value));
            out.insert("r_star".into(), json!(min.r_star));
            out.insert("phases".into(), json!(phases.as_slice()));
            Ok((output::object(cli.format, &out), 0))
        }
        Command::Eigenphases { x } => {
            let x = read_matrix(x)?;
            let phases = eigenphases(&x, &tol)?;
            let mut out = Map::new();
            out.insert("phases".into(), json!(phases.as_slice()));
            Ok((output::object(cli.format, &out), 0))
        }
        Command::Cost { x, norm } => {
            let x = read_matrix(x)?;
            let norm = pair_norm(cli, norm.as_deref(), &x)?;
            let mut out = Map::new();
            out.insert("value".into(), json!(cost(&norm, &x)?));
            Ok((output::object(cli.format, &out), 0))
        }
        Command::Sample { kind, n, count, scale } => sample(cli.seed, *kind, *n, *count, *scale).map(|s| (s, 0)),
        Command::Check(args) => {
            let cfg = RunConfig {
                seed: cli.seed,
                dims: cli.dims.clone(),
                trials: cli.trials,
                norm_specs: if cli.norms.is_empty() {
                    check::DEFAULT_NORMS.iter().map(|s| s.to_string()).collect()
                } else {
                    cli.norms.clone()
                },
                tol_scale: cli.tol,
                tol_overrides: cli.tol_overrides.clone(),
                p: args.p,
                eps: args.eps.clone(),
                sets: args.sets.clone(),
                iso_trials: args.iso_trials,
            };
            cfg.validate().map_err(usage)?;
            let outcome = check::run(args.suite, &cfg).map_err(|e| match e {
                check::CheckError::Usage(m) => usage(m),
                check::CheckError::Premise(m) => Failure { code: 1, message: m },
                check::CheckError::Numerical(e) => Failure::from(e),
            })?;
            let code = if outcome.iter().all(|r| r.passed()) { 0 } else { 1 };
            Ok((output::reports(cli.format, &outcome)?, code))
        }
    }
}

fn pair_norm(cli: &Cli, norm: Option<&str>, x: &ComplexMatrix) -> Result<SymmetricNormSpec, Failure> {
    let spec = norm.or(cli.norms.first().map(String::as_str)).unwrap_or("l2");
    if spec == check::RANDOM_MU {
        return Ok(check::random_mu(cli.seed, x.rows())?);
    }
    Ok(SymmetricNormSpec::parse(spec, x.rows())?)
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
    };
    let mut values = serde_json::Deserializer::from_str(&text).into_iter::<Value>();
    let first = values
        .next()
        .ok_or_else(|| usage(format!("{}: no matrix found", path.display())))?
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if values.next().is_some() {
        return Err(usage(format!("{}: expected a single matrix", path.display())));
    }
    serde_json::from_value(first).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn sample(seed: u64, kind: SampleKind, n: usize, count: usize, scale: f64) -> Result<String, Failure> {
    if n == 0 || n > check::MAX_DIM {
        return Err(usage(format!("n must lie in 1..={}", check::MAX_DIM)));
    }
    if count == 0 {
        return Err(usage("count must be >= 1"));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(usage("--scale must be positive and finite"));
    }
    let mut out = String::new();
    for i in 0..count {
        let mut rng = trial_rng(seed, i);
        let m = match kind {
            SampleKind::Haar => haar_unitary(n, &mut rng),
            SampleKind::Gue => gue_hermitian(n, scale, &mut rng),
        };
        out.push_str(&serde_json::to_string(&m)?);
        out.push('\n');
    }
    Ok(out)
}
