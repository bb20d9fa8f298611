//! Run configuration for the `solve` command, in TOML:
//!
//! ```toml
//! times = [0.5, 1.0]
//!
//! [params]
//! alpha = 1.5
//! theta = 0.3
//! beta = 0.8
//! eta = 1.0
//!
//! [grid]            # optional; defaults to x_max = 40, 4096 points
//! x_max = 40.0
//! num_points = 4096
//!
//! [f]               # delta | gaussian | box | zero | file
//! kind = "gaussian"
//! center = 0.0
//! sigma = 1.0
//!
//! [g]               # required exactly when beta > 1
//! kind = "zero"
//!
//! [phi]             # optional source, constant in time
//! kind = "box"
//! a = -1.0
//! b = 1.0
//! height = 0.5
//!
//! [solver]          # optional
//! method = "transform"   # or "convolution"
//! source_nodes = 256
//!
//! [output]          # optional
//! csv = "solution.csv"
//! manifest = "solution.manifest.json"
//!
//! [tolerances]      # optional, recorded in the manifest
//! mass = 1e-6
//! ```
//!
//! Unknown keys are errors. `file` data name a CSV of `x,value` rows on the
//! configured grid; relative paths resolve against the config file.

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::riesz_feller::{RieszFellerParams, TemporalParams};
use crate::solver::{self, DiffusionProblem, SolverOptions, Source};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub times: Vec<f64>,
    pub params: ParamsSection,
    #[serde(default)]
    pub grid: GridSection,
    pub f: DataSpec,
    pub g: Option<DataSpec>,
    pub phi: Option<DataSpec>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub alpha: f64,
    #[serde(default)]
    pub theta: f64,
    pub beta: f64,
    #[serde(default = "one")]
    pub eta: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x_max: f64,
    /// Defaults to `-x_max`.
    pub x_min: Option<f64>,
    pub num_points: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            x_max: 40.0,
            x_min: None,
            num_points: 4096,
        }
    }
}

/// A named analytic profile or a sample file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    Zero,
    Delta,
    Gaussian {
        #[serde(default)]
        center: f64,
        #[serde(default = "one")]
        sigma: f64,
        /// Total mass.
        #[serde(default = "one")]
        mass: f64,
    },
    Box {
        a: f64,
        b: f64,
        #[serde(default = "one")]
        height: f64,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    #[default]
    Transform,
    Convolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default)]
    pub method: SolveMethod,
    #[serde(default = "default_nodes")]
    pub source_nodes: usize,
}

fn default_nodes() -> usize {
    SolverOptions::default().source_nodes
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            method: SolveMethod::Transform,
            source_nodes: default_nodes(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub csv: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn grid(&self) -> Result<SpatialGrid> {
        let g = &self.grid;
        SpatialGrid::new(g.x_min.unwrap_or(-g.x_max), g.x_max, g.num_points)
    }

    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            source_nodes: self.solver.source_nodes,
        }
    }

    /// Builds and validates the problem; `base` resolves relative data paths.
    pub fn problem(&self, base: &Path) -> Result<DiffusionProblem> {
        let p = &self.params;
        let rf = RieszFellerParams::new(p.alpha, p.theta)?;
        let tp = TemporalParams::new(p.beta, p.eta)?;
        let grid = self.grid()?;
        let f = self.f.samples(&grid, base)?;
        let g = self.g.as_ref().map(|d| d.samples(&grid, base)).transpose()?;
        let phi = self
            .phi
            .as_ref()
            .map(|d| d.samples(&grid, base).map(Source::Stationary))
            .transpose()?;
        DiffusionProblem::new(rf, tp, grid, f, g, phi, self.times.clone())
    }
}

impl DataSpec {
    pub fn samples(&self, grid: &SpatialGrid, base: &Path) -> Result<Vec<f64>> {
        match self {
            DataSpec::Zero => Ok(vec![0.0; grid.num_points()]),
            DataSpec::Delta => Ok(solver::delta(grid)),
            DataSpec::Gaussian { center, sigma, mass } => {
                if !(*sigma > 0.0) {
                    return Err(Error::invalid(format!("gaussian sigma > 0 required, got {sigma}")));
                }
                Ok(solver::gaussian(grid, *center, *sigma).into_iter().map(|v| v * mass).collect())
            }
            DataSpec::Box { a, b, height } => {
                if !(a < b) {
                    return Err(Error::invalid(format!("box needs a < b, got [{a}, {b}]")));
                }
                Ok(solver::box_profile(grid, *a, *b, *height))
            }
            DataSpec::File { path } => {
                let path = base.join(path);
                let file = std::fs::File::open(&path)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                read_samples(std::io::BufReader::new(file), grid)
            }
        }
    }

    /// Short description for manifests.
    pub fn describe(&self) -> String {
        match self {
            DataSpec::Zero => "zero".into(),
            DataSpec::Delta => "delta".into(),
            DataSpec::Gaussian { center, sigma, mass } => {
                format!("gaussian(center={center}, sigma={sigma}, mass={mass})")
            }
            DataSpec::Box { a, b, height } => format!("box(a={a}, b={b}, height={height})"),
            DataSpec::File { path } => format!("file({})", path.display()),
        }
    }
}

/// Reads `x,value` rows (an optional `x,value` header and `#` comments are
/// skipped) and checks that the abscissae are the grid nodes.
pub fn read_samples(r: impl BufRead, grid: &SpatialGrid) -> Result<Vec<f64>> {
    let tol = 1e-9 * grid.spacing();
    let mut values = Vec::with_capacity(grid.num_points());
    for (n, line) in r.lines().enumerate() {
        let n = n + 1;
        let line = line.map_err(|e| Error::Parse(format!("line {n}: {e}")))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "x,value" {
            continue;
        }
        let (x, v) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {n}: expected two columns")))?;
        let num = |s: &str| -> Result<f64> {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {n}: bad number '{}'", s.trim())))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse(format!("line {n}: non-finite value")))
            }
        };
        let (x, v) = (num(x)?, num(v)?);
        let j = values.len();
        if j >= grid.num_points() || (x - grid.x(j)).abs() > tol {
            return Err(Error::Parse(format!("line {n}: x = {x} is not grid node {j}")));
        }
        values.push(v);
    }
    if values.len() != grid.num_points() {
        return Err(Error::Parse(format!(
            "{} samples for a grid of {} points",
            values.len(),
            grid.num_points()
        )));
    }
    Ok(values)
}
