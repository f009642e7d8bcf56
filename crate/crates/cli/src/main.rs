//! `psimt`: batch front end for the verification suites and the
//! decomposition pipeline.
//!
//! Exit status is 0 when every assertion of the suite holds, 1 when one
//! fails (the report lists the failures), and 2 for configuration errors.

mod boundary;
mod inputs;
mod report;
mod suites;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psimt::structural::parse_theta;
use psimt::transforms::DEFAULT_EPS_FACTOR;
use serde::Serialize;
use serde_json::json;

use inputs::{BuiltinField, MeshArgs, ProbeSpec};
use report::{Format, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] psimt::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Parser, Debug)]
#[command(name = "psimt", version, about = "Verification suites and boundary decomposition for ψ^θ-hyperholomorphic fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct Global {
    /// Angle θ in radians, or one of pi/2, pi, 3pi/2.
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    pub theta: String,
    /// Seed for random samples and probes.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Override the command's default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Report file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Associativity, conjugation, norm and inverse on random quaternions.
    VerifyAlgebra {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Structural-set identities and the factorised Laplacian.
    VerifyStructural(StructuralArgs),
    /// Hyperholomorphy of the kernel and convergence of central differences.
    VerifyOperators(OperatorArgs),
    /// Residuals of the four first-order equations at probe points.
    MtResidual(MtResidualArgs),
    /// Borel–Pompeiu residuals across refinement levels.
    BpCheck(BpArgs),
    /// Jump and sum identities of the boundary limits at surface nodes.
    JumpCheck(JumpArgs),
    /// Membership indicators for pure-vector boundary data.
    MpsiTest(MpsiArgs),
    /// Split boundary data into traces of interior and exterior solutions.
    Decompose(DecomposeArgs),
    /// The named special cases and their component maps.
    SpecialCases,
}

#[derive(Args, Debug, Serialize)]
pub struct StructuralArgs {
    /// Number of random angles.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Random polynomials per angle for the Laplacian check.
    #[arg(long, default_value_t = 20)]
    pub polynomials: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct OperatorArgs {
    /// Number of random probes around the pole.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Central-difference step.
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct MtResidualArgs {
    /// Builtin field name, or `grid:<csv>` with rows x1,x2,x3 and eight reals.
    #[arg(long, default_value = "kernel")]
    pub field: String,
    /// CSV file of probe points.
    #[arg(long)]
    pub probes: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct BpArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[arg(long, value_enum, default_value_t = BuiltinField::X1)]
    pub field: BuiltinField,
    /// `builtin`, `fib:<n>` or a CSV file of points.
    #[arg(long, default_value = "builtin")]
    pub probes: ProbeSpec,
    /// Coarsest level of the refinement study for builtin meshes.
    #[arg(long)]
    pub min_level: Option<u32>,
}

#[derive(Args, Debug, Serialize)]
pub struct JumpArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[arg(long, value_enum, default_value_t = BuiltinField::X2ZeroX1)]
    pub field: BuiltinField,
    /// CSV rows `node_index` and the real and imaginary parts of f1, f2, f3.
    #[arg(long)]
    pub boundary_data: Option<PathBuf>,
    /// Principal-value exclusion radius in units of the local triangle size.
    #[arg(long, default_value_t = DEFAULT_EPS_FACTOR)]
    pub eps_factor: f64,
    /// Evaluate every n-th node.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    Member,
    NonMember,
}

#[derive(Args, Debug, Serialize)]
pub struct MpsiArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[arg(long, value_enum, default_value_t = BuiltinField::Kernel)]
    pub field: BuiltinField,
    #[arg(long)]
    pub boundary_data: Option<PathBuf>,
    #[arg(long, default_value = "builtin")]
    pub probes: ProbeSpec,
    #[arg(long, default_value_t = DEFAULT_EPS_FACTOR)]
    pub eps_factor: f64,
    /// Use every n-th node for the on-surface indicators.
    #[arg(long, default_value_t = 5)]
    pub stride: usize,
    /// Also assert the verdict.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
}

#[derive(Args, Debug, Serialize)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[arg(long, value_enum, default_value_t = BuiltinField::KernelPlusC)]
    pub field: BuiltinField,
    #[arg(long)]
    pub boundary_data: Option<PathBuf>,
    #[arg(long, default_value = "builtin")]
    pub probes: ProbeSpec,
    /// Width of the extension layer; defaults to 0.4 times the inradius.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Cutoff profile: cubic, quintic or cosine.
    #[arg(long, default_value = "cubic")]
    pub cutoff: String,
    /// Check the trace at every n-th node.
    #[arg(long, default_value_t = 4)]
    pub stride: usize,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyAlgebra { .. } => "verify-algebra",
            Command::VerifyStructural(_) => "verify-structural",
            Command::VerifyOperators(_) => "verify-operators",
            Command::MtResidual(_) => "mt-residual",
            Command::BpCheck(_) => "bp-check",
            Command::JumpCheck(_) => "jump-check",
            Command::MpsiTest(_) => "mpsi-test",
            Command::Decompose(_) => "decompose",
            Command::SpecialCases => "special-cases",
        }
    }

    fn args(&self) -> serde_json::Result<serde_json::Value> {
        match self {
            Command::VerifyAlgebra { samples } => Ok(json!({ "samples": samples })),
            Command::VerifyStructural(a) => serde_json::to_value(a),
            Command::VerifyOperators(a) => serde_json::to_value(a),
            Command::MtResidual(a) => serde_json::to_value(a),
            Command::BpCheck(a) => serde_json::to_value(a),
            Command::JumpCheck(a) => serde_json::to_value(a),
            Command::MpsiTest(a) => serde_json::to_value(a),
            Command::Decompose(a) => serde_json::to_value(a),
            Command::SpecialCases => Ok(json!({})),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PSIMT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("PSIMT_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    configure_threads()?;
    let g = &cli.global;
    let theta = parse_theta(&g.theta)?;
    if let Some(t) = g.tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::Config(format!("--tol must be positive, got {t}")));
        }
    }
    let config = json!({
        "theta": theta,
        "theta_input": g.theta,
        "seed": g.seed,
        "tol": g.tol,
        "format": g.format,
        "args": cli.command.args()?,
    });
    let report = Report::new(cli.command.name(), config);
    match &cli.command {
        Command::VerifyAlgebra { samples } => suites::verify_algebra_suite(g, *samples, report),
        Command::VerifyStructural(a) => suites::verify_structural_suite(g, theta, a, report),
        Command::VerifyOperators(a) => suites::verify_operators_suite(g, theta, a, report),
        Command::MtResidual(a) => suites::mt_residual_cmd(g, theta, a, report),
        Command::BpCheck(a) => boundary::bp_check(g, theta, a, report),
        Command::JumpCheck(a) => boundary::jump(g, theta, a, report),
        Command::MpsiTest(a) => boundary::mpsi(g, theta, a, report),
        Command::Decompose(a) => boundary::decompose(g, theta, a, report),
        Command::SpecialCases => suites::special_cases(g, report),
    }
}

fn emit(report: &Report, g: &Global) -> Result<(), CliError> {
    match &g.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            report.write(g.format, &mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            report.write(g.format, &mut out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|report| {
        emit(&report, &cli.global)?;
        Ok(report)
    });
    match result {
        Ok(report) if report.passed => ExitCode::SUCCESS,
        Ok(report) => {
            for f in &report.failures {
                eprintln!("psimt: {}: {f}", report.command);
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("psimt: {e}");
            ExitCode::from(2)
        }
    }
}
