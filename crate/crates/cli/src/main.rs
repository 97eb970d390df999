//! Command-line verifier for Clifford exponential identities and classical
//! dynamical Yang-Baxter r-matrices.
//!
//! Exit codes: 0 all verdicts pass, 1 verification failure, 2 usage or
//! configuration error, 3 domain-guard exhaustion (no admissible samples).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cdybe_core::error::Error;
use cdybe_core::harness::{
    load_algebra, run_identity, CaseOptions, CdybeFamily, IdentityId, ResidualReport,
    DEFAULT_SEED,
};
use cdybe_core::lie::catalog;
use cdybe_core::rmatrix::residual::DerivativeMode;

#[derive(Parser)]
#[command(
    name = "cdybe",
    about = "Numerically certify Clifford-algebra exponential identities and dynamical r-matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra configuration file.
    Validate {
        /// Path to a JSON algebra configuration.
        config: String,
    },
    /// Verify one named identity and report per-sample residuals.
    Identity {
        /// Identity tag: KEY, ALTER, C1, C2, C3, RELATED, RCONJ, THETA_SQ,
        /// DELTA_SQ, CDYBE_*, REMARK_JU, RHO_FACTOR, SYMBOL_I, SYMBOL_II.
        id: String,
        /// Catalog algebra name or JSON config path.
        #[arg(long)]
        algebra: Option<String>,
        /// Euclidean dimension for vector-space identities.
        #[arg(long)]
        dim: Option<usize>,
        /// Pin the 2D rotation angle instead of sampling.
        #[arg(long)]
        theta: Option<f64>,
        /// Pin a single sample point (comma-separated coefficients).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        mu: Option<Vec<f64>>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Derivative mode for residuals: fd | analytic.
        #[arg(long, default_value = "analytic")]
        mode: String,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the CDYBE residual suite for one r-matrix family.
    Cdybe {
        #[arg(long)]
        algebra: String,
        /// full | split | twisted | scaled | rational | sum
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// fd | analytic
        #[arg(long, default_value = "analytic")]
        mode: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Scaling parameter of the scaled family.
        #[arg(long, default_value_t = 2.0)]
        t: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List the built-in catalog algebras.
    Catalog,
}

fn parse_mode(mode: &str) -> Result<DerivativeMode, Error> {
    match mode {
        "analytic" => Ok(DerivativeMode::Analytic),
        "fd" => Ok(DerivativeMode::CentralDifference(1e-5)),
        other => Err(Error::structural(format!(
            "unknown derivative mode '{other}' (expected fd | analytic)"
        ))),
    }
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    if let Some(seed) = flag {
        return seed;
    }
    if let Ok(value) = std::env::var("CDYBE_SEED") {
        if let Ok(seed) = value.parse() {
            return seed;
        }
    }
    DEFAULT_SEED
}

fn emit(report: &ResidualReport, json: Option<&PathBuf>) -> Result<bool, Error> {
    println!("{}", report.summary());
    if let Some(path) = json {
        std::fs::write(path, report.to_json())
            .map_err(|e| Error::structural(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(report.passed())
}

fn exit_for(err: &Error) -> ExitCode {
    match err {
        Error::GuardExhaustion(_) => ExitCode::from(3),
        Error::Structural(_) | Error::Parse(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            exit_for(&err)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Validate { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Error::Parse(format!("cannot read '{config}': {e}")))?;
            match cdybe_core::harness::parse_algebra_config(&text) {
                Ok(entry) => {
                    let report = entry.algebra.validate();
                    println!(
                        "{}: dim {}, split {}, automorphism {}\n{report}",
                        entry.algebra.name(),
                        entry.algebra.dim(),
                        if entry.split.is_some() { "yes" } else { "no" },
                        if entry.automorphism.is_some() { "yes" } else { "no" },
                    );
                    Ok(report.passed)
                }
                Err(Error::Parse(msg)) => Err(Error::Parse(msg)),
                Err(err) => {
                    // validation diagnostics are a verification failure
                    println!("validation failed: {err}");
                    Ok(false)
                }
            }
        }
        Command::Identity {
            id,
            algebra,
            dim,
            theta,
            mu,
            tol,
            seed,
            samples,
            mode,
            json,
        } => {
            let id: IdentityId = id.parse()?;
            let opts = CaseOptions {
                algebra,
                dim,
                samples: samples.unwrap_or(20),
                seed: resolve_seed(seed),
                tolerance: tol,
                mode: parse_mode(&mode)?,
                theta,
                mu,
                scale_t: 2.0,
            };
            let report = run_identity(id, &opts)?;
            emit(&report, json.as_ref())
        }
        Command::Cdybe {
            algebra,
            family,
            samples,
            mode,
            seed,
            tol,
            t,
            json,
        } => {
            let family: CdybeFamily = family.parse()?;
            let opts = CaseOptions {
                algebra: Some(algebra),
                dim: None,
                samples,
                seed: resolve_seed(seed),
                tolerance: tol,
                mode: parse_mode(&mode)?,
                theta: None,
                mu: None,
                scale_t: t,
            };
            let report = run_identity(family.identity_id(), &opts)?;
            emit(&report, json.as_ref())
        }
        Command::Catalog => {
            for name in catalog::CATALOG_NAMES {
                let entry = load_algebra(name)?;
                println!(
                    "{:<12} dim {:<2} split {:<3} automorphism {}",
                    name,
                    entry.algebra.dim(),
                    if entry.split.is_some() { "yes" } else { "no" },
                    if entry.automorphism.is_some() { "yes" } else { "no" },
                );
            }
            Ok(true)
        }
    }
}
