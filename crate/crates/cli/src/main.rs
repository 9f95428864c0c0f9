//! `dirac-verify`: run the dirac-core checks from the command line.
//!
//! Exit codes: 0 when every check is within tolerance, 1 when any check
//! fails (a JSON report is still produced), 2 for usage and input errors.

mod hydrogen;
mod manifold;
mod report;
mod waves;
mod weyl;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::Outcome;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DIRAC_VERIFY_OUT_DIR";

#[derive(Parser)]
#[command(name = "dirac-verify", version, about = "Numerical checks of the Dirac equation and its geometric reading")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plane-wave residuals, mass shell in wavelength form, FD order.
    PlanewaveVerify(waves::PlanewaveArgs),
    /// Translation relation and sliding-symmetry form of the equation.
    SlidingVerify(waves::SlidingArgs),
    /// Reflected plane waves still solve the equation.
    ReflectVerify(waves::ReflectArgs),
    /// Region swept by the ellipse family, as a `T,x_min,x_max` series.
    ManifoldSim(manifold::ManifoldArgs),
    /// Gauge invariance and covariance identities on a Weyl grid.
    WeylCheck(weyl::WeylArgs),
    /// Dirac-Coulomb bound states against the closed-form spectrum.
    HydrogenSpectrum(hydrogen::HydrogenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Seed of the SplitMix64 sample stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; relative paths are resolved against $DIRAC_VERIFY_OUT_DIR when set.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Output format; json by default except for manifold-sim and hydrogen-spectrum.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

pub enum Failure {
    Usage(String),
}

impl From<dirac_core::Error> for Failure {
    fn from(e: dirac_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, default_format, result) = match &cli.command {
        Command::PlanewaveVerify(a) => ("planewave-verify", &a.common, Format::Json, waves::planewave(a)),
        Command::SlidingVerify(a) => ("sliding-verify", &a.common, Format::Json, waves::sliding(a)),
        Command::ReflectVerify(a) => ("reflect-verify", &a.common, Format::Json, waves::reflect(a)),
        Command::ManifoldSim(a) => ("manifold-sim", &a.common, Format::Csv, manifold::run(a)),
        Command::WeylCheck(a) => ("weyl-check", &a.common, Format::Json, weyl::run(a)),
        Command::HydrogenSpectrum(a) => ("hydrogen-spectrum", &a.common, Format::Csv, hydrogen::run(a)),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let format = common.format.unwrap_or(default_format);
    match emit(name, common, format, &outcome) {
        Ok(()) if outcome.report.pass => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(name: &str, common: &Common, format: Format, outcome: &Outcome) -> Result<(), String> {
    let (body, ext) = match format {
        Format::Json => (outcome.report.to_json(), "json"),
        Format::Csv => (outcome.csv(), "csv"),
    };
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let path = match (&common.out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(format!("{name}.{ext}"))),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| format!("{}: {e}", parent.display()))?;
            }
            std::fs::write(&p, &body).map_err(|e| format!("{}: {e}", p.display()))?;
        }
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| e.to_string())?,
    }
    if format == Format::Csv && !outcome.report.pass {
        eprint!("{}", outcome.report.to_json());
    }
    Ok(())
}
