use super::{DiffusionProblem, SolutionField, Source};
use crate::error::{Error, Result};
use crate::greens::spectral::Multiplier;
use crate::greens::GreenParams;
use crate::grid::{SpatialGrid, Spectral};
use crate::mittag_leffler::{MittagLeffler, MlParams};
use crate::riesz_feller::{symbol, RieszFellerParams, TemporalParams};
use num_complex::Complex64 as C64;

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Uniform `ξ` nodes per output time in the source integral (time-varying
    /// sources only; stationary ones are integrated exactly).
    pub source_nodes: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { source_nodes: 256 }
    }
}

/// The Mittag-Leffler factors of the solution formula.
struct Kernels {
    rf: RieszFellerParams,
    tp: TemporalParams,
    e1: MittagLeffler,
    e2: MittagLeffler,
    a1: MittagLeffler,
    a2: MittagLeffler,
}

impl Kernels {
    fn new(rf: RieszFellerParams, tp: TemporalParams) -> Result<Self> {
        let b = tp.beta();
        let ml = |g: f64| MlParams::new(b, g).map(MittagLeffler::with_defaults);
        Ok(Self {
            rf,
            tp,
            e1: ml(1.0)?,
            e2: ml(2.0)?,
            a1: ml(b + 1.0)?,
            a2: ml(b + 2.0)?,
        })
    }

    fn arg(&self, k: f64, t: f64) -> C64 {
        -self.tp.eta() * t.powf(self.tp.beta()) * symbol(self.rf, k)
    }

    /// `E_{β,1}(-ηt^βΨ)`.
    fn initial(&self, k: f64, t: f64) -> Result<C64> {
        self.e1.eval(self.arg(k, t))
    }

    /// `t E_{β,2}(-ηt^βΨ)`.
    fn velocity(&self, k: f64, t: f64) -> Result<C64> {
        Ok(t * self.e2.eval(self.arg(k, t))?)
    }

    /// `A₁(ξ) = ∫_0^ξ s^{β-1}E_{β,β}(-ηΨs^β) ds = ξ^β E_{β,β+1}(-ηΨξ^β)` and
    /// `A₂(ξ) = ∫_0^ξ A₁ = ξ^{β+1} E_{β,β+2}(-ηΨξ^β)`.
    fn integrated(&self, k: f64, xi: f64) -> Result<(C64, C64)> {
        if xi == 0.0 {
            return Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
        }
        let z = self.arg(k, xi);
        let p = xi.powf(self.tp.beta());
        Ok((p * self.a1.eval(z)?, p * xi * self.a2.eval(z)?))
    }

    /// Product-integration weights `W_j(k)` of
    /// `∫_0^t Φ*(t-ξ) ξ^{β-1}E_{β,β}(-ηΨξ^β) dξ ≈ Σ_j W_j Φ*(t-ξ_j)`,
    /// exact for `Φ*` linear between the nodes `ξ_j = j t/m`.
    fn source_weights(&self, k: f64, t: f64, m: usize) -> Result<Vec<C64>> {
        let d = t / m as f64;
        let xi = |j: usize| j as f64 * d;
        let mut w = vec![C64::new(0.0, 0.0); m + 1];
        let (mut a1_prev, mut a2_prev) = self.integrated(k, 0.0)?;
        for j in 0..m {
            let (a1, a2) = self.integrated(k, xi(j + 1))?;
            let i0 = a1 - a1_prev;
            // ∫ ξ K dξ = [ξA₁ - A₂]
            let i1 = (xi(j + 1) * a1 - a2) - (xi(j) * a1_prev - a2_prev);
            w[j] += (xi(j + 1) * i0 - i1) / d;
            w[j + 1] += (i1 - xi(j) * i0) / d;
            a1_prev = a1;
            a2_prev = a2;
        }
        Ok(w)
    }
}

/// `m(k)` on every FFT bin from bins `0..=n/2`, using `m(-k) = conj m(k)`.
/// The Nyquist bin keeps the real part.
fn bins(grid: &SpatialGrid, m: impl Fn(f64) -> Result<C64>) -> Result<Vec<C64>> {
    let n = grid.num_points();
    let mut half = Vec::with_capacity(n / 2 + 1);
    for i in 0..=n / 2 {
        let v = m(grid.wavenumber(i))?;
        half.push(if i == n / 2 { C64::new(v.re, 0.0) } else { v });
    }
    let mut out = half.clone();
    out.extend(half[1..n / 2].iter().rev().map(|c| c.conj()));
    Ok(out)
}

/// Same as [`bins`] for a multiplier that returns many values per bin.
fn bins_many(grid: &SpatialGrid, m: impl Fn(f64) -> Result<Vec<C64>>) -> Result<Vec<Vec<C64>>> {
    let n = grid.num_points();
    let mut half = Vec::with_capacity(n / 2 + 1);
    for i in 0..=n / 2 {
        let mut v = m(grid.wavenumber(i))?;
        if i == n / 2 {
            v.iter_mut().for_each(|c| c.im = 0.0);
        }
        half.push(v);
    }
    let mut out = half.clone();
    out.extend(half[1..n / 2].iter().rev().map(|v| v.iter().map(|c| c.conj()).collect()));
    Ok(out)
}

/// Fails when `data` is not negligible at the Nyquist frequency and the
/// multiplier there has not decayed (see `green_spectral`).
fn check_resolution(problem: &DiffusionProblem, t: f64, data: &[C64]) -> Result<()> {
    let n = data.len();
    let peak = data.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if data[n / 2].norm() <= 1e-12 * peak {
        return Ok(());
    }
    let grid = problem.grid();
    let m = Multiplier::new(problem.rf(), problem.tp(), 1.0, t)?;
    let k = grid.nyquist();
    let tail = m.at(k)?.norm().max(m.at(-k)?.norm());
    if tail >= 0.5 {
        return Err(Error::GridTooCoarse(format!(
            "multiplier still {tail:.2e} at the Nyquist frequency {k:.3e} at t = {t}"
        )));
    }
    let osc = m.exponential_part(k).max(m.exponential_part(-k));
    if problem.tp().beta() > 1.0 && osc > 1e-12f64.ln() {
        return Err(Error::GridTooCoarse(format!(
            "oscillating part of the multiplier is e^{osc:.1} at the Nyquist frequency at t = {t}"
        )));
    }
    Ok(())
}

fn green_params(problem: &DiffusionProblem) -> GreenParams {
    GreenParams {
        alpha: problem.rf().alpha(),
        theta: problem.rf().theta(),
        beta: problem.tp().beta(),
        eta: problem.tp().eta(),
        gamma: 1.0,
    }
}

fn check_options(options: &SolverOptions) -> Result<()> {
    if options.source_nodes < 1 {
        return Err(Error::invalid("source_nodes >= 1 required"));
    }
    Ok(())
}

/// Bin coefficients of `Φ(·, t - ξ_j)` for the product-integration nodes.
fn source_coeffs(spectral: &Spectral, f: &dyn Fn(f64) -> Vec<f64>, t: f64, m: usize) -> Result<Vec<Vec<C64>>> {
    let n = spectral.grid().num_points();
    (0..=m)
        .map(|j| {
            let v = f(t - j as f64 * t / m as f64);
            if v.len() != n {
                return Err(Error::invalid(format!("source returned {} samples for {n} points", v.len())));
            }
            Ok(spectral.forward(&v))
        })
        .collect()
}

/// Transform-domain solution at each output time.
pub fn solve(problem: &DiffusionProblem) -> Result<SolutionField> {
    solve_with(problem, &SolverOptions::default())
}

pub fn solve_with(problem: &DiffusionProblem, options: &SolverOptions) -> Result<SolutionField> {
    check_options(options)?;
    let grid = *problem.grid();
    let spectral = Spectral::new(grid);
    let kern = Kernels::new(problem.rf(), problem.tp())?;
    let f_hat = spectral.forward(problem.f());
    let g_hat = problem.g().map(|g| spectral.forward(g));
    let phi_hat = match problem.phi() {
        Some(Source::Stationary(v)) => Some(spectral.forward(v)),
        _ => None,
    };
    let mut rows = Vec::with_capacity(problem.times().len());
    for &t in problem.times() {
        check_resolution(problem, t, &f_hat)?;
        let mut coeffs: Vec<C64> = bins(&grid, |k| kern.initial(k, t))?
            .into_iter()
            .zip(&f_hat)
            .map(|(m, f)| m * f)
            .collect();
        if let Some(g_hat) = &g_hat {
            check_resolution(problem, t, g_hat)?;
            let m = bins(&grid, |k| kern.velocity(k, t))?;
            coeffs.iter_mut().zip(m.iter().zip(g_hat)).for_each(|(c, (m, g))| *c += m * g);
        }
        match problem.phi() {
            None => {}
            Some(Source::Stationary(_)) => {
                let phi_hat = phi_hat.as_ref().expect("stationary source transformed");
                check_resolution(problem, t, phi_hat)?;
                let m = bins(&grid, |k| Ok(kern.integrated(k, t)?.0))?;
                coeffs.iter_mut().zip(m.iter().zip(phi_hat)).for_each(|(c, (m, p))| *c += m * p);
            }
            Some(Source::Varying(f)) => {
                let m = options.source_nodes;
                let phis = source_coeffs(&spectral, f.as_ref(), t, m)?;
                check_resolution(problem, t, &phis[0])?;
                let w = bins_many(&grid, |k| kern.source_weights(k, t, m))?;
                for (i, c) in coeffs.iter_mut().enumerate() {
                    *c += (0..=m).map(|j| w[i][j] * phis[j][i]).sum::<C64>();
                }
            }
        }
        rows.push(spectral.inverse(coeffs)?);
    }
    SolutionField::new(grid, problem.times().to_vec(), rows, green_params(problem))
}

/// Periodic convolution `Σ_j kernel[(i-j) mod n] data[j]`, skipping zero data.
fn convolve(kernel: &[f64], data: &[f64]) -> Vec<f64> {
    let n = data.len();
    let mut out = vec![0.0; n];
    for (j, &d) in data.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o += kernel[(i + n - j) % n] * d;
        }
    }
    out
}

/// Solution as convolutions in `x`: `f` against the Green's function
/// `G₁(·, t)`, and the source against `(t-ξ)^{β-1}G₂(·, t-ξ)` in `x` and `ξ`.
/// Requires `g` absent or identically zero.
pub fn solve_convolution(problem: &DiffusionProblem) -> Result<SolutionField> {
    solve_convolution_with(problem, &SolverOptions::default())
}

pub fn solve_convolution_with(problem: &DiffusionProblem, options: &SolverOptions) -> Result<SolutionField> {
    check_options(options)?;
    if problem.g().is_some_and(|g| g.iter().any(|v| *v != 0.0)) {
        return Err(Error::IllPosed("the convolution form requires g = 0".into()));
    }
    let grid = *problem.grid();
    let spectral = Spectral::new(grid);
    let kern = Kernels::new(problem.rf(), problem.tp())?;
    let f_hat = spectral.forward(problem.f());
    let mut rows = Vec::with_capacity(problem.times().len());
    for &t in problem.times() {
        check_resolution(problem, t, &f_hat)?;
        // grid kernels at displacements j·spacing (times spacing)
        let g1 = spectral.inverse(bins(&grid, |k| kern.initial(k, t))?)?;
        let mut row = convolve(&g1, problem.f());
        match problem.phi() {
            None => {}
            Some(Source::Stationary(phi)) => {
                check_resolution(problem, t, &spectral.forward(phi))?;
                let g2 = spectral.inverse(bins(&grid, |k| Ok(kern.integrated(k, t)?.0))?)?;
                row.iter_mut().zip(convolve(&g2, phi)).for_each(|(r, v)| *r += v);
            }
            Some(Source::Varying(f)) => {
                let m = options.source_nodes;
                let w = bins_many(&grid, |k| kern.source_weights(k, t, m))?;
                for j in 0..=m {
                    let phi = f(t - j as f64 * t / m as f64);
                    if j == 0 {
                        check_resolution(problem, t, &spectral.forward(&phi))?;
                    }
                    let kernel = spectral.inverse(w.iter().map(|wi| wi[j]).collect())?;
                    let a = spectral.forward(&kernel);
                    let b = spectral.forward(&phi);
                    let conv = spectral.inverse(a.iter().zip(&b).map(|(x, y)| x * y).collect())?;
                    row.iter_mut().zip(conv).for_each(|(r, v)| *r += v);
                }
            }
        }
        rows.push(row);
    }
    SolutionField::new(grid, problem.times().to_vec(), rows, green_params(problem))
}

/// Largest `|v(x) - v(-x)|` on a symmetric grid.
fn asymmetry(v: &[f64]) -> f64 {
    let n = v.len();
    (1..n / 2).map(|j| (v[n / 2 + j] - v[n / 2 - j]).abs()).fold(0.0, f64::max)
}

/// The `β = 1/2` problem. With `θ = 0`, a symmetric grid and symmetric data
/// the output is checked to be symmetric.
pub fn solve_half_order(problem: &DiffusionProblem) -> Result<SolutionField> {
    if problem.tp().beta() != 0.5 {
        return Err(Error::invalid(format!(
            "beta = 1/2 required, got {}",
            problem.tp().beta()
        )));
    }
    let field = solve(problem)?;
    let data_symmetric = |v: &[f64]| {
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        asymmetry(v) <= 1e-14 * peak
    };
    let source_symmetric = match problem.phi() {
        None => true,
        Some(Source::Stationary(v)) => data_symmetric(v),
        Some(Source::Varying(_)) => false,
    };
    if problem.rf().theta() == 0.0
        && problem.grid().is_symmetric()
        && data_symmetric(problem.f())
        && source_symmetric
    {
        for (t, row) in field.times().iter().zip(field.values()) {
            let peak = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let a = asymmetry(row);
            if a > 1e-10 * peak.max(1.0) {
                return Err(Error::NonConvergent(format!(
                    "theta = 0 solution is asymmetric by {a:.2e} at t = {t}"
                )));
            }
        }
    }
    Ok(field)
}
