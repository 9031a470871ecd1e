//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 success / CERTIFIED_HOLDS, 1 VIOLATED or a failed check,
//! 2 usage, parse or validation error, 3 INCONCLUSIVE.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use reid_core::certifier::{certify_reid, default_epsilon};
use reid_core::generators::HypothesisClass;
use reid_core::{CertStatus, ReidInstance, TolerancePolicy};
use serde::Serialize;

use crate::campaign::{counterexample, run_fuzz, run_proofsteps, FuzzConfig, ProofStepsConfig};
use crate::format::read_matrix;
use crate::report::{human_certificate, human_counterexample, human_fuzz, human_proofsteps, CertificateJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "reidlab",
    version,
    about = "Certify Reid-type operator inequalities on finite-dimensional instances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON output (default).
    #[arg(long, global = true, conflicts_with = "human")]
    pub json: bool,
    /// Human-readable output.
    #[arg(long, global = true)]
    pub human: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct TolArgs {
    /// Absolute tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub atol: f64,
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
}

impl TolArgs {
    pub fn policy(&self) -> Result<TolerancePolicy> {
        TolerancePolicy::new(self.atol, self.rtol).context("invalid tolerance")
    }
}

/// Dimension list: `2,3,5` or the inclusive range `2..8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims(pub Vec<usize>);

pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad dimension {t:?}: {e}"))
    };
    let dims = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(parse).collect::<Result<Vec<_>, _>>()?
    };
    if dims.is_empty() {
        return Err("no dimensions".into());
    }
    Ok(Dims(dims))
}

fn parse_class(s: &str) -> Result<HypothesisClass, String> {
    HypothesisClass::from_name(s).ok_or_else(|| format!("unknown class {s:?}; expected selfadjoint, normal or cohypo"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify |<AKx,x>| <= ||K|| <Ax,x> for matrices read from JSON files.
    Check {
        /// Positive matrix A.
        #[arg(long = "a", value_name = "PATH")]
        a: PathBuf,
        /// Matrix K.
        #[arg(long = "k", value_name = "PATH")]
        k: PathBuf,
        /// Certificate resolution; defaults to 1e-6 * max(1, ||AK||).
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Seeded campaign over a hypothesis class; exit 0 iff every trial certifies.
    Fuzz {
        #[arg(long, value_parser = parse_class)]
        class: HypothesisClass,
        #[arg(long, default_value = "2..8", value_parser = parse_dims)]
        dims: Dims,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        tol: TolArgs,
        /// Write each generated (A, K) into this directory.
        #[arg(long, value_name = "DIR")]
        dump: Option<PathBuf>,
    },
    /// The truncated shift counterexample in exact arithmetic.
    Counterexample {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Check every step of the domination argument on sampled instances.
    ///
    /// --atol/--rtol gate the algebraic steps; certificates use the default
    /// tolerance.
    Proofsteps {
        #[arg(long, default_value = "2..8", value_parser = parse_dims)]
        dims: Dims,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, value_name = "DIR")]
        dump: Option<PathBuf>,
    },
}

fn status_code(status: CertStatus) -> i32 {
    match status {
        CertStatus::CertifiedHolds => EXIT_OK,
        CertStatus::Violated => EXIT_FAILED,
        CertStatus::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, human: bool, value: &T, render: impl Fn(&T) -> String) -> Result<()> {
    if human {
        out.write_all(render(value).as_bytes())?;
    } else {
        serde_json::to_writer_pretty(&mut *out, value)?;
        writeln!(out)?;
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let human = cli.human;
    match &cli.command {
        Command::Check { a, k, epsilon, tol } => {
            let tol = tol.policy()?;
            let (a, k) = (read_matrix(a)?, read_matrix(k)?);
            let inst = ReidInstance::new(a, k, &tol)?;
            let epsilon = match epsilon {
                Some(e) if !(*e > 0.0 && e.is_finite()) => bail!("--epsilon must be positive"),
                Some(e) => *e,
                None => default_epsilon(inst.product())?,
            };
            let cert = certify_reid(&inst, epsilon, &tol)?;
            emit(out, human, &CertificateJson::from(&cert), human_certificate)?;
            Ok(status_code(cert.status))
        }
        Command::Fuzz {
            class,
            dims,
            trials,
            seed,
            epsilon,
            tol,
            dump,
        } => {
            let report = run_fuzz(&FuzzConfig {
                class: *class,
                dims: dims.0.clone(),
                trials: *trials,
                seed: *seed,
                epsilon: *epsilon,
                tol: tol.policy()?,
                dump: dump.clone(),
            })?;
            emit(out, human, &report, human_fuzz)?;
            Ok(if report.all_certified() {
                EXIT_OK
            } else if report.summary.get(CertStatus::Violated) > 0 {
                EXIT_FAILED
            } else {
                EXIT_INCONCLUSIVE
            })
        }
        Command::Counterexample { n, tol } => {
            let report = counterexample(*n, &tol.policy()?)?;
            emit(out, human, &report, human_counterexample)?;
            Ok(if report.agrees { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Proofsteps {
            dims,
            trials,
            seed,
            tol,
            dump,
        } => {
            let report = run_proofsteps(&ProofStepsConfig {
                dims: dims.0.clone(),
                trials: *trials,
                seed: *seed,
                step_tol: tol.policy()?,
                cert_tol: TolerancePolicy::default(),
                dump: dump.clone(),
            })?;
            emit(out, human, &report, human_proofsteps)?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Runs a parsed command; errors are reported on `err` with exit code 2.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            }
        }
    }
}
