//! Solutions of the fractional reaction-diffusion problem
//!
//! ```text
//! ₀D_t^β N = η D_x^{α,θ} N + Φ(x, t),   N(x, 0) = f(x),   N_t(x, 0) = g(x),
//! ```
//!
//! by Fourier multipliers:
//!
//! ```text
//! N*(k, t) = f* E_{β,1}(-ηt^βΨ) + g* t E_{β,2}(-ηt^βΨ)
//!          + ∫_0^t Φ*(k, t-ξ) ξ^{β-1} E_{β,β}(-ηΨξ^β) dξ.
//! ```

mod data;
mod io;
mod residual;
mod transform;

pub use data::{box_profile, delta, gaussian};
pub use io::Manifest;
pub use residual::residual_check;
pub use transform::{
    solve, solve_convolution, solve_convolution_with, solve_half_order, solve_with, SolverOptions,
};

use crate::error::{Error, Result};
use crate::greens::{DensityProfile, GreenParams, Method, Sampling};
use crate::grid::SpatialGrid;
use crate::riesz_feller::{RieszFellerParams, TemporalParams};
use std::fmt;
use std::sync::Arc;


/// Initial data must fall below this (relative to its peak) at the grid edges.
pub const EDGE_DECAY: f64 = 1e-12;

/// Source term `Φ(x, t)` sampled on the grid.
#[derive(Clone)]
pub enum Source {
    /// `Φ(x, t) = φ(x)` for all `t`.
    Stationary(Vec<f64>),
    /// Grid samples of `Φ(·, t)` for any `t ≥ 0`.
    Varying(Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>),
}

impl Source {
    pub fn varying(f: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Source::Varying(Arc::new(f))
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        match self {
            Source::Stationary(v) => v.clone(),
            Source::Varying(f) => f(t),
        }
    }
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Stationary(v) => f.debug_tuple("Stationary").field(&v.len()).finish(),
            Source::Varying(_) => f.write_str("Varying(..)"),
        }
    }
}

/// A complete problem statement.
#[derive(Debug, Clone)]
pub struct DiffusionProblem {
    rf: RieszFellerParams,
    tp: TemporalParams,
    grid: SpatialGrid,
    f: Vec<f64>,
    g: Option<Vec<f64>>,
    phi: Option<Source>,
    times: Vec<f64>,
}

fn check_samples(name: &str, v: &[f64], grid: &SpatialGrid) -> Result<()> {
    if v.len() != grid.num_points() {
        return Err(Error::invalid(format!(
            "{name} has {} samples for a grid of {} points",
            v.len(),
            grid.num_points()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{name} has non-finite samples")));
    }
    Ok(())
}

fn check_edges(name: &str, v: &[f64]) -> Result<()> {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let edge = v[0].abs().max(v[v.len() - 1].abs());
    if edge > EDGE_DECAY * peak {
        return Err(Error::invalid(format!(
            "{name} must decay to 1e-12 of its peak at the grid edges (edge {edge:.3e}, peak {peak:.3e})"
        )));
    }
    Ok(())
}

impl DiffusionProblem {
    /// Validates the data: `g` present exactly when `β > 1`, samples on the
    /// grid, `f` and `g` decayed at the edges, output times positive and
    /// strictly increasing.
    pub fn new(
        rf: RieszFellerParams,
        tp: TemporalParams,
        grid: SpatialGrid,
        f: Vec<f64>,
        g: Option<Vec<f64>>,
        phi: Option<Source>,
        times: Vec<f64>,
    ) -> Result<Self> {
        match (&g, tp.beta() > 1.0) {
            (None, true) => return Err(Error::IllPosed("g required for beta > 1".into())),
            (Some(_), false) => {
                return Err(Error::IllPosed(
                    "g must be absent for beta <= 1 (only one initial condition)".into(),
                ))
            }
            _ => {}
        }
        check_samples("f", &f, &grid)?;
        check_edges("f", &f)?;
        if let Some(g) = &g {
            check_samples("g", g, &grid)?;
            check_edges("g", g)?;
        }
        if let Some(Source::Stationary(v)) = &phi {
            check_samples("phi", v, &grid)?;
        }
        if times.is_empty() {
            return Err(Error::invalid("at least one output time required"));
        }
        if times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::invalid("output times must be positive"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("output times must be strictly increasing"));
        }
        Ok(Self {
            rf,
            tp,
            grid,
            f,
            g,
            phi,
            times,
        })
    }

    pub fn rf(&self) -> RieszFellerParams {
        self.rf
    }
    pub fn tp(&self) -> TemporalParams {
        self.tp
    }
    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }
    pub fn f(&self) -> &[f64] {
        &self.f
    }
    pub fn g(&self) -> Option<&[f64]> {
        self.g.as_deref()
    }
    pub fn phi(&self) -> Option<&Source> {
        self.phi.as_ref()
    }
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Same problem at other output times.
    pub fn with_times(&self, times: Vec<f64>) -> Result<Self> {
        Self::new(self.rf, self.tp, self.grid, self.f.clone(), self.g.clone(), self.phi.clone(), times)
    }
}

/// `N(x, t)` on the grid at each output time.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    grid: SpatialGrid,
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
    masses: Vec<f64>,
    params: GreenParams,
}

impl SolutionField {
    pub fn new(grid: SpatialGrid, times: Vec<f64>, values: Vec<Vec<f64>>, params: GreenParams) -> Result<Self> {
        if values.len() != times.len() {
            return Err(Error::invalid(format!("{} rows for {} times", values.len(), times.len())));
        }
        for row in &values {
            check_samples("solution row", row, &grid).map_err(|e| match e {
                Error::InvalidParams(m) => Error::NonConvergent(m),
                e => e,
            })?;
        }
        let masses = values.iter().map(|v| grid.integrate(v)).collect();
        Ok(Self {
            grid,
            times,
            values,
            masses,
            params,
        })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }
    pub fn times(&self) -> &[f64] {
        &self.times
    }
    /// Row `i` holds `N(·, times[i])`.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }
    pub fn params(&self) -> GreenParams {
        self.params
    }

    /// Row `i` as a point-sampled profile.
    pub fn profile(&self, i: usize) -> Result<DensityProfile> {
        DensityProfile::new(
            self.grid,
            self.values[i].clone(),
            self.times[i],
            self.params,
            Method::Spectral,
            Sampling::Point,
        )
    }
}

/// Trapezoid moment `∫ x^order N dx` of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moment {
    pub value: f64,
    /// Set for `order = 2` with `α < 2`: the true second moment is infinite
    /// and `value` only reflects the grid window.
    pub tail_truncated: bool,
}

/// `order ∈ {0, 1, 2}`. The first node stands for both ends of the periodic
/// window, so its weight is the mean of `x^order` at `x_min` and `x_max`.
pub fn moments(profile: &DensityProfile, order: u32) -> Result<Moment> {
    if order > 2 {
        return Err(Error::invalid(format!("moment order must be 0, 1 or 2, got {order}")));
    }
    let grid = profile.grid();
    let p = order as i32;
    let weighted: Vec<f64> = grid
        .points()
        .into_iter()
        .zip(profile.values())
        .enumerate()
        .map(|(j, (x, v))| {
            let w = if j == 0 {
                0.5 * (grid.x_min().powi(p) + grid.x_max().powi(p))
            } else {
                x.powi(p)
            };
            w * v
        })
        .collect();
    Ok(Moment {
        value: grid.integrate(&weighted),
        tail_truncated: order == 2 && profile.params().alpha < 2.0,
    })
}
