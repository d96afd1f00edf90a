//! `poncelet-kit`: batch computation and verification of the curves attached
//! to Blaschke-like maps.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use poncelet_core::{Exec, C64};

use commands::Job;
use config::{parse_complex, parse_complex_list, Boundary, BoundarySpec, Product};
use error::CliError;
use output::Format;

const THREADS_ENV: &str = "PONCELET_KIT_THREADS";

#[derive(Parser)]
#[command(name = "poncelet-kit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Envelope of the boundary-polygon sides, with the closed-form conic for degree 3.
    InteriorCurve(JobArgs),
    /// Locus of tangent-line intersections and its lowest-degree algebraic fit.
    ExteriorCurve {
        #[command(flatten)]
        job: JobArgs,
        /// Samples farther than this from the origin are left out of the fit.
        #[arg(long, default_value_t = 20.0)]
        fit_radius: f64,
    },
    /// Predicted locus of vertex centroids against sampled centroids.
    CentroidLocus(JobArgs),
    /// Tangency, Poncelet closure, Cayley and centroid checks in one report.
    Verify {
        #[command(flatten)]
        job: JobArgs,
        /// Scale the interior conic about its center before checking.
        #[arg(long, default_value_t = 1.0)]
        inner_scale: f64,
        /// Run a standalone check instead of the bundle.
        #[arg(long, value_enum)]
        check: Option<StandaloneCheck>,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Both roots of the focal-sum quadratic and which one closes triangles.
    Cayley(JobArgs),
    /// Envelope under the elliptic-integral map and its conic-fit verdict.
    JacobiExperiment(JobArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StandaloneCheck {
    Chapple,
}

#[derive(Args)]
struct JobArgs {
    /// disk, ellipse:t, parabola:t or jacobi:p.
    #[arg(long)]
    boundary: Option<BoundarySpec>,
    /// Comma-separated complex zeros written a±bi. Without --theta these
    /// are the nonzero zeros of a canonical product.
    #[arg(long, allow_hyphen_values = true)]
    zeros: Option<String>,
    /// Rotation of a general product; its zeros are then all of --zeros.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 360)]
    samples: usize,
    /// Overrides every check tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["json", "csv"])]
    format: Vec<Format>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

const DEFAULT_JACOBI: BoundarySpec = BoundarySpec::Jacobi(0.800438);
const DEFAULT_JACOBI_ZEROS: &str = "0.3,-0.3";

fn exec_from_env() -> Result<Exec, CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(Exec::Parallel);
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(if threads == 1 { Exec::Sequential } else { Exec::Parallel })
}

fn job(args: &JobArgs, default_boundary: BoundarySpec, default_zeros: Option<&str>, exec: Exec) -> Result<Job, CliError> {
    if args.samples < 8 {
        return Err(CliError::Validation(format!("--samples must be at least 8, got {}", args.samples)));
    }
    if let Some(tol) = args.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Validation(format!("--tol must be positive, got {tol}")));
        }
    }
    let spec = args.boundary.unwrap_or(default_boundary);
    let boundary = Boundary::resolve(spec)?;
    let product = match args.zeros.as_deref().or(default_zeros) {
        Some(z) => Some(Product::build(parse_complex_list(z).map_err(CliError::Validation)?, args.theta)?),
        None => None,
    };
    Ok(Job { spec, boundary, product, samples: args.samples, tol: args.tol, seed: args.seed, exec })
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let exec = exec_from_env()?;
    let (args, (artifacts, pass)) = match &cli.command {
        Command::InteriorCurve(a) => (a, commands::interior_curve(&job(a, BoundarySpec::Disk, None, exec)?)?),
        Command::ExteriorCurve { job: a, fit_radius } => {
            if fit_radius.is_nan() || *fit_radius <= 0.0 {
                return Err(CliError::Validation(format!("--fit-radius must be positive, got {fit_radius}")));
            }
            (a, commands::exterior_curve(&job(a, BoundarySpec::Disk, None, exec)?, *fit_radius)?)
        }
        Command::CentroidLocus(a) => (a, commands::centroid_locus(&job(a, BoundarySpec::Disk, None, exec)?)?),
        Command::Verify { job: a, inner_scale, check, center, radius } => {
            let j = job(a, BoundarySpec::Disk, None, exec)?;
            let outcome = match check {
                Some(StandaloneCheck::Chapple) => {
                    let center: C64 = match center {
                        Some(c) => parse_complex(c).map_err(CliError::Validation)?,
                        None => return Err(CliError::Validation("--check chapple needs --center".into())),
                    };
                    let radius = radius.ok_or_else(|| CliError::Validation("--check chapple needs --radius".into()))?;
                    commands::verify_chapple(&j, center, radius)?
                }
                None => commands::verify(&j, *inner_scale)?,
            };
            (a, outcome)
        }
        Command::Cayley(a) => (a, commands::cayley(&job(a, BoundarySpec::Disk, None, exec)?)?),
        Command::JacobiExperiment(a) => {
            (a, commands::jacobi_experiment(&job(a, DEFAULT_JACOBI, Some(DEFAULT_JACOBI_ZEROS), exec)?)?)
        }
    };
    output::write(&args.out_dir, &args.format, &artifacts)?;
    let mut summary = artifacts.report;
    if let Some(map) = summary.as_object_mut() {
        map.remove("geometry");
    }
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Validation(e.render().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
