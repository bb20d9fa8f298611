//! Periodic spatial grids and the FFT plumbing shared by the spectral paths.
//!
//! Transform convention: `f*(k) = ∫ f(x) e^{+ikx} dx`, with inverse
//! `f(x) = (1/2π) ∫ f*(k) e^{-ikx} dk`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Uniform periodic grid `x_j = x_min + j·spacing`, `j = 0..num_points`,
/// with `spacing = (x_max - x_min) / num_points` (the right end is the
/// periodic image of the left end).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    num_points: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, num_points: usize) -> Result<Self> {
        if !(x_min < 0.0 && 0.0 < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::invalid(format!(
                "x_min < 0 < x_max required, got [{x_min}, {x_max}]"
            )));
        }
        if num_points < 16 || !num_points.is_power_of_two() {
            return Err(Error::invalid(format!(
                "num_points must be a power of two >= 16, got {num_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            num_points,
        })
    }

    pub fn symmetric(x_max: f64, num_points: usize) -> Result<Self> {
        Self::new(-x_max, x_max, num_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / self.num_points as f64
    }

    pub fn is_symmetric(&self) -> bool {
        self.x_min == -self.x_max
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.num_points).map(|j| self.x(j)).collect()
    }

    /// Index of the node nearest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let j = ((x - self.x_min) / self.spacing()).round();
        j.clamp(0.0, (self.num_points - 1) as f64) as usize
    }

    /// Signed wavenumber of FFT bin `m`; the Nyquist bin is reported as positive.
    pub fn wavenumber(&self, m: usize) -> f64 {
        let n = self.num_points as i64;
        let m = m as i64;
        let signed = if m <= n / 2 { m } else { m - n };
        2.0 * PI * signed as f64 / (self.x_max - self.x_min)
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    /// Periodic trapezoid rule `spacing·Σ v_j`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.spacing() * values.iter().sum::<f64>()
    }
}

/// Forward and inverse discrete transforms on a fixed grid.
pub struct Spectral {
    grid: SpatialGrid,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl Spectral {
    pub fn new(grid: SpatialGrid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.num_points();
        Self {
            grid,
            fwd: planner.plan_fft_inverse(n),
            inv: planner.plan_fft_forward(n),
        }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    /// Bin coefficients `F_m = Σ_j f_j e^{+2πi mj/N}` (the phase `e^{ik x_min}`
    /// is left out; it cancels in [`inverse`](Self::inverse)).
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Continuous-transform samples `f*(k_m) ≈ spacing·e^{ik_m x_min} F_m`.
    pub fn transform(&self, values: &[f64]) -> Vec<Complex64> {
        let h = self.grid.spacing();
        self.forward(values)
            .into_iter()
            .enumerate()
            .map(|(m, c)| c * Complex64::from_polar(h, self.grid.wavenumber(m) * self.grid.x_min()))
            .collect()
    }

    /// Inverse of [`forward`](Self::forward). Fails if the result is not real
    /// to within `1e-10` of its largest entry.
    pub fn inverse(&self, coeffs: Vec<Complex64>) -> Result<Vec<f64>> {
        let mut buf = coeffs;
        self.inv.process(&mut buf);
        let n = self.grid.num_points() as f64;
        let scale = buf.iter().map(|c| c.re.abs()).fold(0.0, f64::max).max(1e-300);
        let imag = buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if imag > 1e-10 * scale.max(n) {
            return Err(Error::NonConvergent(format!(
                "inverse transform has imaginary residue {:.2e}",
                imag / n
            )));
        }
        Ok(buf.into_iter().map(|c| c.re / n).collect())
    }

    /// Applies the Fourier multiplier `m(k)` to grid values. The Nyquist bin
    /// uses the even part of `m` so the result stays real.
    pub fn apply(&self, values: &[f64], m: impl Fn(f64) -> Complex64) -> Result<Vec<f64>> {
        let mut coeffs = self.forward(values);
        let n = self.grid.num_points();
        for (i, c) in coeffs.iter_mut().enumerate() {
            let k = self.grid.wavenumber(i);
            let mult = if i == n / 2 { 0.5 * (m(k) + m(-k)) } else { m(k) };
            *c *= mult;
        }
        self.inverse(coeffs)
    }

    /// Grid samples of the inverse transform of a multiplier, i.e. the kernel
    /// `(1/2π)∫ m(k) e^{-ikx} dk` evaluated with the discrete sum over the bins.
    pub fn kernel(&self, m: &[Complex64]) -> Result<Vec<f64>> {
        let grid = &self.grid;
        let coeffs: Vec<Complex64> = m
            .iter()
            .enumerate()
            .map(|(i, &c)| c * Complex64::from_polar(1.0, -grid.wavenumber(i) * grid.x_min()))
            .collect();
        let h = grid.spacing();
        Ok(self.inverse(coeffs)?.into_iter().map(|v| v / h).collect())
    }
}
