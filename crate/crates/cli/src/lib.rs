//! `ebcv` command-line tool: verification report, curvature export, geodesic
//! integration, Killing-field export and checks, BCV classification.
//!
//! Exit codes: 0 success, 1 an internal check failed, 2 domain error,
//! 3 the geodesic flow left the chart, 4 malformed polynomial input.

pub mod curvature;
pub mod geodesic;
pub mod killing;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ebcv::manifold::{bcv_classify, Case2Predicate};
use ebcv::verify::{run_verify, VerifyConfig};
use ebcv::ModelParams;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ebcv::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use ebcv::Error as E;
        match self {
            CliError::Core(E::DomainExit { .. }) => 3,
            CliError::Core(E::MalformedPolynomial(_)) => 4,
            CliError::Core(E::DomainViolation { .. } | E::ModeMismatch { .. } | E::SingularFrame) => 2,
            CliError::Usage(_) | CliError::Core(E::InvalidArgument(_) | E::InvalidIndex(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TrajectoryFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case2 {
    Printed,
    Squared,
}

impl From<Case2> for Case2Predicate {
    fn from(c: Case2) -> Self {
        match c {
            Case2::Printed => Case2Predicate::Printed,
            Case2::Squared => Case2Predicate::Squared,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ebcv", version, about = "Geometry of the extended BCV spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every consistency check and table comparison.
    Verify {
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        m: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        l: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Multiplies every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a normal geodesic with RK4.
    Geodesic(geodesic::GeodesicArgs),
    /// Export or check Killing fields.
    Killing(killing::KillingArgs),
    /// Classify (m, l) among the seven BCV cases.
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        l: f64,
        /// Predicate for the round-sphere case: `m = l/4` (printed) or `4m = l^2`.
        #[arg(long, value_enum, default_value_t = Case2::Printed)]
        case2: Case2,
    },
    /// Frame, connection and curvature data at one point.
    Curvature(curvature::CurvatureArgs),
}

/// Write `text` to `out` when given, otherwise to `stdout`.
pub(crate) fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub(crate) fn params(m: f64, l: f64) -> CliResult<ModelParams> {
    if !(m.is_finite() && l.is_finite()) {
        return Err(CliError::Usage(format!("non-finite parameters m = {m}, l = {l}")));
    }
    Ok(ModelParams::new(m, l))
}

/// JSON report with the elapsed time zeroed, for byte comparisons.
pub fn verify_json(cfg: &VerifyConfig, keep_elapsed: bool) -> CliResult<String> {
    let mut report = run_verify(cfg)?;
    if !keep_elapsed {
        report.summary.elapsed_seconds = 0.0;
    }
    Ok(serde_json::to_string_pretty(&report)? + "\n")
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<u8> {
    match &cli.command {
        Command::Verify { m, l, samples, seed, format, tol_scale, out } => {
            if *samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            let cfg = VerifyConfig { params: params(*m, *l)?, samples: *samples, seed: *seed, tol_scale: *tol_scale };
            let report = run_verify(&cfg)?;
            let text = match format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
            };
            emit(&text, out.as_ref(), stdout)?;
            Ok(if report.has_failures() { 1 } else { 0 })
        }
        Command::Geodesic(args) => geodesic::run(args, stdout).map(|_| 0),
        Command::Killing(args) => killing::run(args, stdout).map(|_| 0),
        Command::Classify { m, l, case2 } => {
            let c = bcv_classify(*m, *l, (*case2).into());
            writeln!(stdout, "{} (case {})", c.class.name(), c.class.case_roman())?;
            Ok(0)
        }
        Command::Curvature(args) => curvature::run(args, stdout).map(|_| 0),
    }
}
