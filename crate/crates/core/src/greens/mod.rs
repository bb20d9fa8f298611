//! Green's functions of the space-time fractional diffusion equation
//!
//! ```text
//! N*(k, t) = E_{β,γ}(-η t^β Ψ(k)),   N(x, t) = (1/2π) ∫ N*(k, t) e^{-ikx} dk,
//! ```
//!
//! by spectral inversion, together with the closed forms of the special
//! cases (Gaussian, neutral, stable, time-fractional).

mod closed;
mod profile;
pub(crate) mod spectral;

pub use closed::{
    gaussian_density, green_hfunction, green_hfunction_spec, levy_density, neutral_density,
    time_fractional_density,
};
pub use profile::{DensityProfile, GreenParams, Method, Sampling};
pub use spectral::{green_pointwise, green_spectral};

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::riesz_feller::{RieszFellerParams, TemporalParams};

#[cfg(test)]
mod tests;

/// `(ηt^β)^{1/α}`, the length scale of the fundamental solution.
pub fn length_scale(rf: RieszFellerParams, tp: TemporalParams, t: f64) -> f64 {
    (tp.eta() * t.powf(tp.beta())).powf(1.0 / rf.alpha())
}

/// Symmetric grid of half-width `40·(ηt^β)^{1/α}` with 4096 points.
pub fn default_grid(rf: RieszFellerParams, tp: TemporalParams, t: f64) -> Result<SpatialGrid> {
    SpatialGrid::symmetric(40.0 * length_scale(rf, tp, t), 4096)
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("t > 0 required, got {t}")))
    }
}

pub(crate) fn check_gamma(beta: f64, gamma: f64) -> Result<()> {
    let close = |v: f64| (gamma - v).abs() <= 1e-12;
    if close(1.0) || close(2.0) || close(beta) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "gamma must be 1, 2 or beta (= {beta}), got {gamma}"
        )))
    }
}

/// Which closed form, if any, covers `(α, θ, β)`.
fn closed_form_case(rf: RieszFellerParams, tp: TemporalParams) -> Option<ClosedCase> {
    let (a, b) = (rf.alpha(), tp.beta());
    if a == 2.0 && b == 1.0 {
        Some(ClosedCase::Gaussian)
    } else if a == b && a < 2.0 {
        Some(ClosedCase::Neutral)
    } else if b == 1.0 && a != 1.0 {
        Some(ClosedCase::Levy)
    } else if a == 2.0 {
        Some(ClosedCase::TimeFractional)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ClosedCase {
    Gaussian,
    Neutral,
    Levy,
    TimeFractional,
}

/// Fundamental solution (`γ = 1`) on a grid. Uses a closed form when one
/// covers the parameters and evaluates on the whole grid, the spectral
/// inversion otherwise.
pub fn fundamental_solution(
    rf: RieszFellerParams,
    tp: TemporalParams,
    t: f64,
    grid: SpatialGrid,
) -> Result<DensityProfile> {
    check_time(t)?;
    if let Some(case) = closed_form_case(rf, tp) {
        match closed::profile(case, rf, tp, t, grid) {
            Ok(p) => return Ok(p),
            Err(Error::NonConvergent(_)) | Err(Error::PoleCollision { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    green_spectral(rf, tp, 1.0, t, grid)
}

/// Closed-form profile only; fails when no closed form covers the parameters.
pub fn fundamental_solution_closed(
    rf: RieszFellerParams,
    tp: TemporalParams,
    t: f64,
    grid: SpatialGrid,
) -> Result<DensityProfile> {
    check_time(t)?;
    let case = closed_form_case(rf, tp).ok_or_else(|| {
        Error::invalid(format!(
            "no closed form for alpha={}, theta={}, beta={}",
            rf.alpha(),
            rf.theta(),
            tp.beta()
        ))
    })?;
    closed::profile(case, rf, tp, t, grid)
}
