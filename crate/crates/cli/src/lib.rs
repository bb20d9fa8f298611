//! Command-line front end: `density`, `solve` and `verify`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input
//! (flags, parameters, config), 3 numerical failure.

use clap::{Parser, Subcommand, ValueEnum};
use fracdiff::config::{RunConfig, SolveMethod};
use fracdiff::greens::{
    default_grid, fundamental_solution, fundamental_solution_closed, green_hfunction, green_spectral, DensityProfile,
};
use fracdiff::grid::SpatialGrid;
use fracdiff::riesz_feller::{RieszFellerParams, TemporalParams};
use fracdiff::solver::{self, Manifest};
use fracdiff::verify::{self, Suite, VerifyOptions};
use fracdiff::Error;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fracdiff", version, about = "Space-time fractional diffusion: densities, solutions, verification")]
pub struct Cli {
    /// Output file (CSV for density/solve, report for verify).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed of the randomized verification corpora.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance factor for verify; mass tolerance for density and solve.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityMethod {
    Auto,
    Spectral,
    Closed,
    Hfun,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental solution on a grid, written as CSV.
    Density {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        time: f64,
        #[arg(long, default_value_t = 4096)]
        grid_points: usize,
        /// Half-width of the grid; defaults to 40 length scales.
        #[arg(long, allow_hyphen_values = true)]
        x_max: Option<f64>,
        #[arg(long, value_enum, default_value_t = DensityMethod::Auto)]
        method: DensityMethod,
    },
    /// Solve the problem described by a TOML config.
    Solve { config: PathBuf },
    /// Run a verification suite: ml, hfun, symbol, greens, solver or all.
    Verify { suite: String },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_validation() { EXIT_INVALID } else { EXIT_NUMERICAL };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_NUMERICAL,
        message: format!("{}: {e}", path.display()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| io_failure(path, e))
}

/// Runs a parsed command line, writing human-readable output to `out`.
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Density {
            alpha,
            theta,
            beta,
            eta,
            time,
            grid_points,
            x_max,
            method,
        } => {
            let rf = RieszFellerParams::new(*alpha, *theta)?;
            let tp = TemporalParams::new(*beta, *eta)?;
            let grid = match x_max {
                Some(x) => SpatialGrid::symmetric(*x, *grid_points)?,
                None => {
                    let g = default_grid(rf, tp, *time)?;
                    SpatialGrid::symmetric(g.x_max(), *grid_points)?
                }
            };
            let profile = density(rf, tp, *time, grid, *method)?;
            let path = cli.output.clone().unwrap_or_else(|| PathBuf::from("density.csv"));
            write_file(&path, &profile.to_csv_string())?;
            let _ = writeln!(out, "method={} sampling={}", profile.method(), profile.sampling());
            let _ = writeln!(out, "mass={:.16e}", profile.mass());
            if let Some(tol) = cli.tolerance {
                if (profile.mass() - 1.0).abs() > tol {
                    let _ = writeln!(out, "warning: mass differs from 1 by more than {tol:e} (grid truncation)");
                }
            }
            let _ = writeln!(out, "wrote {}", path.display());
            Ok(EXIT_OK)
        }
        Command::Solve { config } => solve(cli, config, out),
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let opts = VerifyOptions {
                seed: cli.seed,
                tolerance_scale: cli.tolerance.unwrap_or(1.0),
            };
            let checks = verify::run(suite, &opts);
            let mut report = String::new();
            report.push_str(&format!("{:<8} {:<72} {:>12} {:>12}  result\n", "suite", "check", "observed", "tolerance"));
            for c in &checks {
                report.push_str(&format!(
                    "{:<8} {:<72} {:>12.3e} {:>12.3e}  {}\n",
                    c.suite.to_string(),
                    c.name,
                    c.observed,
                    c.tolerance,
                    if c.passed { "PASS" } else { "FAIL" }
                ));
                if let Some(e) = &c.error {
                    report.push_str(&format!("         error: {e}\n"));
                }
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            report.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
            let _ = out.write_all(report.as_bytes());
            if let Some(path) = &cli.output {
                write_file(path, &report)?;
            }
            Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

fn density(
    rf: RieszFellerParams,
    tp: TemporalParams,
    t: f64,
    grid: SpatialGrid,
    method: DensityMethod,
) -> Result<DensityProfile, Error> {
    match method {
        DensityMethod::Auto => fundamental_solution(rf, tp, t, grid),
        DensityMethod::Spectral => green_spectral(rf, tp, 1.0, t, grid),
        DensityMethod::Closed => fundamental_solution_closed(rf, tp, t, grid),
        DensityMethod::Hfun => green_hfunction(rf, tp, 1.0, t, grid),
    }
}

fn solve(cli: &Cli, config_path: &Path, out: &mut impl Write) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(config_path).map_err(|e| Failure {
        code: EXIT_INVALID,
        message: format!("{}: {e}", config_path.display()),
    })?;
    let config = RunConfig::from_toml(&text)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let problem = config.problem(base)?;
    let options = config.options();
    let field = match config.solver.method {
        SolveMethod::Transform => solver::solve_with(&problem, &options)?,
        SolveMethod::Convolution => solver::solve_convolution_with(&problem, &options)?,
    };
    let csv = cli
        .output
        .clone()
        .or_else(|| config.output.csv.clone())
        .unwrap_or_else(|| PathBuf::from("solution.csv"));
    let manifest_path = config
        .output
        .manifest
        .clone()
        .unwrap_or_else(|| csv.with_extension("manifest.json"));
    write_file(&csv, &field.to_csv_string())?;

    let mut data = BTreeMap::new();
    data.insert("f".to_string(), config.f.describe());
    if let Some(g) = &config.g {
        data.insert("g".to_string(), g.describe());
    }
    if let Some(phi) = &config.phi {
        data.insert("phi".to_string(), phi.describe());
    }
    data.insert(
        "method".to_string(),
        match config.solver.method {
            SolveMethod::Transform => "transform",
            SolveMethod::Convolution => "convolution",
        }
        .to_string(),
    );
    data.insert("source_nodes".to_string(), options.source_nodes.to_string());
    let mut tolerances = config.tolerances.clone();
    if let Some(t) = cli.tolerance {
        tolerances.insert("mass".to_string(), t);
    }
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| format!("{}", d.as_secs()))
        .ok();
    let manifest = Manifest {
        program: "fracdiff".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: "solve".into(),
        params: field.params(),
        grid: *field.grid(),
        times: field.times().to_vec(),
        data,
        tolerances,
        masses: field.masses().to_vec(),
        outputs: vec![csv.display().to_string()],
        timestamp,
    };
    write_file(&manifest_path, &manifest.to_json())?;
    for (t, m) in field.times().iter().zip(field.masses()) {
        let _ = writeln!(out, "t={t:.6e} mass={m:.16e}");
    }
    let _ = writeln!(out, "wrote {} and {}", csv.display(), manifest_path.display());
    Ok(EXIT_OK)
}
