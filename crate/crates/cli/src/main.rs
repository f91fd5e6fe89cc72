//! dichaos: construct distributionally irregular function witnesses at
//! finite truncation and certify their growth, orbit, and density
//! behaviour.
//!
//! Exit codes: 0 = pass/success, 1 = certificate failure, 2 = usage or
//! contract error, 3 = inconclusive certificate.

mod construct_cmd;
mod manifest;
mod table_cmd;
mod verify_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "dichaos", version, about = "irregular-function witnesses and certificates")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Build a witness (function file + parameter echo + manifest)
    Construct(ConstructArgs),
    /// Run one certificate and write it as JSON
    Verify(VerifyArgs),
    /// Emit a deterministic CSV table
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Entire,
    Harmonic,
}

#[derive(Args)]
pub struct ConstructArgs {
    /// Which witness to build
    #[arg(long, value_enum)]
    kind: Kind,
    /// Parameter file (JSON); defaults are used when omitted
    #[arg(long)]
    params: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClaimArg {
    /// M_p against phi(r) e^r / r^a across a radius grid
    GrowthEnvelope,
    /// majorant-based sup-norm growth for a constructed harmonic witness
    GrowthMajorant,
    /// orbit readouts reach omega~ along B, with checkpoint densities
    DiUnbounded,
    /// orbit sup bounds fall below eps_K along A
    NearZero,
    /// summability hypothesis and empirical Cesaro bound
    CesaroAverage,
    /// critical-envelope orbit-average boundedness
    LowerBoundAverage,
    /// Barnes-type series ratio stabilization
    BarnesSeries,
    /// running averages on a finite shift model
    AbsCesaro,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    claim: ClaimArg,
    /// Function file (series or polynomial JSON), where applicable
    #[arg(long)]
    input: Option<PathBuf>,
    /// Construction parameter echo (params.json from `construct`)
    #[arg(long)]
    params: Option<PathBuf>,
    /// Output directory for the certificate
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    r_min: f64,
    #[arg(long, default_value_t = 10.0)]
    r_max: f64,
    #[arg(long, default_value_t = 19)]
    r_steps: usize,
    /// Single evaluation radius (near-zero, lower-bound-average)
    #[arg(long)]
    r: Option<f64>,
    /// Orbit/average horizon
    #[arg(long)]
    horizon: Option<usize>,
    /// Envelope exponent a in phi(r) e^r / r^a
    #[arg(long)]
    env_a: Option<f64>,
    /// Envelope scale: "const:<c>", "log", or "pow:<eps>"
    #[arg(long)]
    env_phi: Option<String>,
    /// Norm index p (a number, or "inf")
    #[arg(long)]
    env_p: Option<String>,
    /// Quadrature points for finite-p circle norms
    #[arg(long)]
    quad: Option<usize>,
    /// alpha parameter (cesaro-average, barnes-series)
    #[arg(long)]
    alpha: Option<f64>,
    /// beta parameter (cesaro-average, barnes-series)
    #[arg(long)]
    beta: Option<f64>,
    /// hypothesis constant C (cesaro-average) or envelope constant
    /// (lower-bound-average)
    #[arg(long)]
    c: Option<f64>,
    /// norm index p for lower-bound-average
    #[arg(long)]
    p: Option<f64>,
    /// grid split for barnes-series stabilization
    #[arg(long)]
    split: Option<f64>,
    /// relative tolerance where a certificate takes one
    #[arg(long)]
    tolerance: Option<f64>,
    /// model dimension for abs-cesaro
    #[arg(long)]
    dim: Option<usize>,
    /// running-average bound for abs-cesaro
    #[arg(long)]
    bound: Option<f64>,
    /// seed for sampled quantities
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Growth,
    Orbit,
    Density,
    Dims,
    Constants,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    quantity: Quantity,
    /// Write the table here (stdout when omitted)
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Function file for growth/orbit tables
    #[arg(long)]
    input: Option<PathBuf>,
    /// Params echo or index-set file for density tables
    #[arg(long)]
    params: Option<PathBuf>,
    /// Which block family a density table reads (a or b)
    #[arg(long)]
    set: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    r_min: f64,
    #[arg(long, default_value_t = 10.0)]
    r_max: f64,
    #[arg(long, default_value_t = 10)]
    r_steps: usize,
    #[arg(long)]
    env_a: Option<f64>,
    #[arg(long)]
    env_phi: Option<String>,
    #[arg(long)]
    env_p: Option<String>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    r: Option<f64>,
    /// dims table: largest ambient dimension
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    /// dims table: smallest ambient dimension / constants table start
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    /// dims table: largest degree
    #[arg(long, default_value_t = 12)]
    m_max: usize,
    /// also write a gnuplot script next to the CSV
    #[arg(long, default_value_t = false)]
    gnuplot: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Commands::Construct(args) => construct_cmd::run(&args),
        Commands::Verify(args) => verify_cmd::run(&args),
        Commands::Table(args) => table_cmd::run(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

/// Shared radius-grid construction.
pub fn radius_grid(r_min: f64, r_max: f64, steps: usize) -> dichaos_core::Result<Vec<f64>> {
    if !(r_min > 0.0) || r_max < r_min || steps == 0 {
        return Err(dichaos_core::Error::Parameter(format!(
            "bad radius grid: min {r_min}, max {r_max}, steps {steps}"
        )));
    }
    if steps == 1 {
        return Ok(vec![r_min]);
    }
    let h = (r_max - r_min) / (steps - 1) as f64;
    Ok((0..steps).map(|k| r_min + h * k as f64).collect())
}

pub fn parse_norm_index(text: &str) -> dichaos_core::Result<f64> {
    if text.eq_ignore_ascii_case("inf") || text.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    text.parse::<f64>()
        .map_err(|_| dichaos_core::Error::Parameter(format!("bad norm index '{text}'")))
}

pub fn parse_scale(text: &str) -> dichaos_core::Result<dichaos_core::ScaleFn> {
    use dichaos_core::ScaleFn;
    if text == "log" {
        return Ok(ScaleFn::LogEPlusR);
    }
    if let Some(c) = text.strip_prefix("const:") {
        let c = c
            .parse::<f64>()
            .map_err(|_| dichaos_core::Error::Parameter(format!("bad scale '{text}'")))?;
        return Ok(ScaleFn::Constant { c });
    }
    if let Some(e) = text.strip_prefix("pow:") {
        let eps = e
            .parse::<f64>()
            .map_err(|_| dichaos_core::Error::Parameter(format!("bad scale '{text}'")))?;
        return Ok(ScaleFn::Power { eps });
    }
    Err(dichaos_core::Error::Parameter(format!(
        "unknown scale '{text}' (use const:<c>, log, pow:<eps>)"
    )))
}
