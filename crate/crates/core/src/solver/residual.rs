use super::{DiffusionProblem, SolutionField};
use crate::error::{Error, Result};
use crate::grid::Spectral;
use crate::riesz_feller::{apply_riesz_feller_spectral, caputo_derivative_quadrature, TimeSamples};

/// Fewest output times accepted for temporal differencing.
pub const MIN_TIMES: usize = 8;

/// `max |₀D_t^β N - η D_x^{α,θ} N - Φ|` over the interior of the grid and the
/// interior output times.
///
/// The Caputo derivative comes from finite differences and product
/// integration of the time series `f(x), N(x, t_1), …`, so the output times
/// must be `t_j = j·dt`. The space derivative is applied through its symbol.
/// Interior means the middle three quarters of the grid, and output times
/// after the first eighth (at least from the third) up to the second to last.
/// Fractional solutions start like `f + c·t^β`, and the quadrature error on
/// that term at the n-th time does not shrink with `dt`, so the earliest
/// times are left out.
pub fn residual_check(field: &SolutionField, problem: &DiffusionProblem) -> Result<f64> {
    let times = field.times();
    if times.len() < MIN_TIMES {
        return Err(Error::InsufficientSamples(format!(
            "{} output times, at least {MIN_TIMES} needed",
            times.len()
        )));
    }
    if field.grid() != problem.grid() {
        return Err(Error::invalid("field and problem grids differ"));
    }
    let dt = times[0];
    if let Some(t) = times
        .iter()
        .enumerate()
        .find(|(j, t)| (*t - (j + 1) as f64 * dt).abs() > 1e-9 * *t)
    {
        return Err(Error::invalid(format!(
            "output times must be j*dt with dt = {dt}; found {}",
            t.1
        )));
    }
    let grid = *field.grid();
    let spectral = Spectral::new(grid);
    let eta = problem.tp().eta();
    let beta = problem.tp().beta();
    let n = grid.num_points();
    let nodes = n / 8..n - n / 8;
    let mut worst = 0.0f64;
    let mut series = vec![0.0; times.len() + 1];
    let space: Vec<Vec<f64>> = field
        .values()
        .iter()
        .map(|row| apply_riesz_feller_spectral(&spectral, row, problem.rf()))
        .collect::<Result<_>>()?;
    for j in (times.len() / 8).max(2)..times.len() - 1 {
        let t = times[j];
        let phi = problem.phi().map(|p| p.at(t));
        for i in nodes.clone() {
            series[0] = problem.f()[i];
            for (s, row) in series[1..].iter_mut().zip(field.values()) {
                *s = row[i];
            }
            let samples = TimeSamples { dt, values: &series };
            let caputo = caputo_derivative_quadrature(&samples, beta, t)?;
            let source = phi.as_ref().map_or(0.0, |p| p[i]);
            worst = worst.max((caputo - eta * space[j][i] - source).abs());
        }
    }
    Ok(worst)
}
