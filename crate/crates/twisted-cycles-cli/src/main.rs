//! `twisted-cycles` — command-line interface to the twisted-homology library.
//!
//! Subcommands: `special-fns` (Weierstrass kernel at a point), `intersection`
//! (the exact 5×5 pairing over ℚ(c)), `connection` (transport matrices of
//! configuration-space paths), `verify-numeric` (the cross-validation report
//! as newline-delimited JSON).
//!
//! Exit codes: 0 success / all checks pass, 1 usage or configuration error,
//! 2 domain error (pole, degenerate input), 3 verification failure.

mod commands;
mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgAction, Parser, Subcommand};

use config::{Failure, RunConfig};

const COMPLEX_GRAMMAR: &str = "Complex literals follow the grammar `a`, `bi`, or `a+bi` / `a-bi`: each part is a \
decimal float with optional sign and scientific exponent, and a bare or signed `i` \
means 1i or -1i. Examples: 1, -2.5e-3, 0.3+0.2i, 1e2-0.5e-1i, i, -i.\n\n\
Settings resolve in three layers: built-in defaults (omega1=1, omega2=i, alpha=0.3, \
epsilon=0.02), then the --config file, then flags; the last writer wins key by key. \
Config files are flat `key = value` lines with the keys omega1, omega2, alpha, \
epsilon, tol.<check>, out; blank lines and `#` comments are ignored.";

#[derive(Parser)]
#[command(
    name = "twisted-cycles",
    version,
    about = "Twisted homology of a four-punctured elliptic curve: exact matrices and numeric cross-checks",
    after_long_help = COMPLEX_GRAMMAR
)]
struct Cli {
    /// Flat key=value configuration file (keys: omega1, omega2, alpha, epsilon, tol.<check>, out).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// First lattice period omega1 (complex literal).
    #[arg(long, global = true, value_name = "COMPLEX")]
    omega1: Option<String>,

    /// Second lattice period omega2 (complex literal).
    #[arg(long, global = true, value_name = "COMPLEX")]
    omega2: Option<String>,

    /// Exponent alpha of the integrand g^alpha (complex literal; values in (1/2)Z or (1/3)Z are rejected where c = e^{2 pi i alpha} matters).
    #[arg(long, global = true, value_name = "COMPLEX")]
    alpha: Option<String>,

    /// Radius of the regularizing circles as a fraction of |omega1|.
    #[arg(long, global = true, value_name = "REAL")]
    epsilon: Option<String>,

    /// Threshold override <check>=<value> for verify-numeric records (repeatable).
    #[arg(long = "tol", global = true, value_name = "CHECK=VALUE", action = ArgAction::Append)]
    tol: Vec<String>,

    /// Write the report to this file instead of standard output.
    #[arg(long = "out", global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate sigma, zeta, wp, wp' and the quasi-periods at a point.
    SpecialFns {
        /// Evaluation point (complex literal).
        z: String,
    },
    /// Print the exact intersection matrix and its (2,2)-cofactor.
    Intersection {
        /// Also evaluate the matrix at c = e^{2 pi i alpha} and print the antisymmetry residual.
        #[arg(long = "at-c")]
        at_c: bool,
    },
    /// Print the connection matrix of a path label `ij:m1,m2` or a word of factors `label[^exp]` (rightmost factor acts first).
    Connection {
        /// Path label or word factors.
        #[arg(required = true, value_name = "SPEC")]
        spec: Vec<String>,
        /// Check the result against the embedded exact constants (elementary label) or the determinant oracle (word).
        #[arg(long)]
        verify: bool,
    },
    /// Run the numeric cross-validation suite; one NDJSON record {check, value, threshold, pass} per check.
    VerifyNumeric,
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        cfg.apply_file(&text, &path.display().to_string())?;
    }
    if let Some(v) = &cli.omega1 {
        cfg.assign("omega1", v, "--omega1")?;
    }
    if let Some(v) = &cli.omega2 {
        cfg.assign("omega2", v, "--omega2")?;
    }
    if let Some(v) = &cli.alpha {
        cfg.assign("alpha", v, "--alpha")?;
    }
    if let Some(v) = &cli.epsilon {
        cfg.assign("epsilon", v, "--epsilon")?;
    }
    for entry in &cli.tol {
        let (name, value) = entry
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--tol expects CHECK=VALUE, got `{entry}`")))?;
        cfg.assign(&format!("tol.{}", name.trim()), value.trim(), "--tol")?;
    }
    if let Some(path) = &cli.out {
        cfg.output_path = Some(path.clone());
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::SpecialFns { z } => commands::cmd_special_fns(&cfg, z),
        Command::Intersection { at_c } => commands::cmd_intersection(&cfg, *at_c),
        Command::Connection { spec, verify } => commands::cmd_connection(&cfg, spec, *verify),
        Command::VerifyNumeric => commands::cmd_verify_numeric(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
