//! Two-parameter Mittag-Leffler function `E_{α,β}(z) = Σ zⁿ / Γ(αn + β)`.
//!
//! Four evaluation regimes are exposed so that the seams between them can be
//! audited:
//!
//! * [`Regime::Series`]: the Taylor series, for `|z| ≤ r_switch` and only
//!   when the estimated cancellation error stays under the tolerance;
//! * [`Regime::Asymptotic`]: pole residues plus the algebraic expansion
//!   `-Σ z⁻ⁿ / Γ(β - αn)`, when `|z|^{1/α}` is large;
//! * [`Regime::Elementary`]: `E_{1,1}(z) = e^z` and `E_{1,2}(z) = (e^z - 1)/z`;
//! * [`Regime::Contour`]: inversion of the Laplace transform
//!   `s^{α-β} / (s^α - z)` on a parabolic contour `s(u) = μ(1 + iu)²`
//!   with the trapezoidal rule, plus residues of the poles left outside it.
//!
//! [`MittagLeffler::eval`] picks a regime automatically and falls back to the
//! contour whenever a cheaper regime cannot certify its tolerance.

mod laplace;

pub use laplace::{invert_laplace_talbot, verify_laplace_pair, TalbotConfig};

use crate::error::{Error, Result};
use crate::special::rgamma;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Parameters `(α, β)` of `E_{α,β}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    alpha: f64,
    beta: f64,
}

impl MlParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::invalid(format!("alpha > 0 required, got {alpha}")));
        }
        if !beta.is_finite() {
            return Err(Error::invalid(format!("beta must be finite, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Numerical controls for the Mittag-Leffler kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlConfig {
    /// Absolute tolerance.
    pub tol: f64,
    /// Term budget of the series regime.
    pub max_terms: usize,
    /// Radius below which the series is tried first.
    pub r_switch: f64,
}

impl Default for MlConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_terms: 10_000,
            r_switch: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Elementary,
    Series,
    Asymptotic,
    Contour,
}

/// Contour node budget; beyond this the contour regime reports non-convergence.
const MAX_CONTOUR_NODES: usize = 4000;

/// Evaluator for a fixed `(α, β)`; caches the series and asymptotic coefficients.
#[derive(Debug, Clone)]
pub struct MittagLeffler {
    params: MlParams,
    config: MlConfig,
    /// `1/Γ(αn + β)`
    series_coeffs: Vec<f64>,
    /// `1/Γ(β - αn)` for `n ≥ 1`
    asym_coeffs: Vec<f64>,
}

impl MittagLeffler {
    pub fn new(params: MlParams, config: MlConfig) -> Self {
        let MlParams { alpha, beta } = params;
        // enough terms for |z| = r_switch
        let mut series_coeffs = Vec::new();
        let r = config.r_switch.max(1.0);
        for n in 0..config.max_terms {
            let c = rgamma(alpha * n as f64 + beta);
            series_coeffs.push(c);
            let mag = c.abs() * r.powi(n as i32);
            if n > 8 && alpha * n as f64 + beta > 2.0 && mag < config.tol * 1e-4 {
                break;
            }
            if !mag.is_finite() && n > 0 {
                break;
            }
        }
        let asym_coeffs = (1..=120)
            .map(|n| rgamma(beta - alpha * n as f64))
            .collect();
        Self {
            params,
            config,
            series_coeffs,
            asym_coeffs,
        }
    }

    pub fn with_defaults(params: MlParams) -> Self {
        Self::new(params, MlConfig::default())
    }

    pub fn params(&self) -> MlParams {
        self.params
    }

    pub fn config(&self) -> MlConfig {
        self.config
    }

    /// `E_{α,β}(z)` with automatic regime selection.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_traced(z).map(|(v, _)| v)
    }

    /// Like [`eval`](Self::eval) but also reports which regime produced the value.
    pub fn eval_traced(&self, z: Complex64) -> Result<(Complex64, Regime)> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("argument must be finite"));
        }
        if z.norm() == 0.0 {
            return Ok((Complex64::new(rgamma(self.params.beta), 0.0), Regime::Series));
        }
        if self.params.alpha == 1.0 {
            if self.params.beta == 1.0 {
                return Ok((z.exp(), Regime::Elementary));
            }
            if self.params.beta == 2.0 && z.norm() >= 1.0 {
                return Ok(((z.exp() - 1.0) / z, Regime::Elementary));
            }
        }
        if z.norm() <= self.config.r_switch {
            if let Ok(v) = self.series(z) {
                return Ok((v, Regime::Series));
            }
        }
        if self.asymptotic_applicable(z) {
            if let Ok(v) = self.asymptotic(z) {
                return Ok((v, Regime::Asymptotic));
            }
        }
        self.contour(z).map(|v| (v, Regime::Contour))
    }

    /// Real-argument convenience wrapper.
    pub fn eval_real(&self, x: f64) -> Result<f64> {
        self.eval(Complex64::new(x, 0.0)).map(|v| v.re)
    }

    /// Taylor series. Fails if the term budget is exhausted or if the
    /// rounding error implied by the largest term exceeds the tolerance.
    pub fn series(&self, z: Complex64) -> Result<Complex64> {
        let MlParams { alpha, beta } = self.params;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        let mut max_term: f64 = 0.0;
        let mut small_run = 0;
        for n in 0..self.config.max_terms {
            let c = match self.series_coeffs.get(n) {
                Some(&c) => c,
                None => rgamma(alpha * n as f64 + beta),
            };
            let term = zn * c;
            let mag = term.norm();
            if !mag.is_finite() {
                return Err(Error::NonConvergent("series term overflow".into()));
            }
            max_term = max_term.max(mag);
            sum += term;
            // a zero coefficient (pole of Γ) must not end the sum early
            if mag <= self.config.tol * 1e-3 && c != 0.0 && alpha * n as f64 + beta > 1.0 {
                small_run += 1;
                if small_run >= 3 {
                    let err = max_term * f64::EPSILON * 2.0;
                    if err > self.config.tol {
                        return Err(Error::NonConvergent(format!(
                            "series cancellation error {err:.2e} exceeds tolerance"
                        )));
                    }
                    return Ok(sum);
                }
            } else {
                small_run = 0;
            }
            zn *= z;
        }
        Err(Error::NonConvergent(format!(
            "series did not converge in {} terms",
            self.config.max_terms
        )))
    }

    /// Principal-sheet poles `s` of `s^{α-β}/(s^α - z)`, i.e. `s^α = z`.
    fn poles(&self, z: Complex64) -> Vec<Complex64> {
        let alpha = self.params.alpha;
        let (r, th) = (z.norm(), z.arg());
        let radius = r.powf(1.0 / alpha);
        let jmin = ((-alpha * PI - th) / (2.0 * PI)).floor() as i64;
        let jmax = ((alpha * PI - th) / (2.0 * PI)).ceil() as i64;
        (jmin..=jmax)
            .filter_map(|j| {
                let ang = (th + 2.0 * PI * j as f64) / alpha;
                if ang.abs() < PI {
                    Some(Complex64::from_polar(radius, ang))
                } else {
                    None
                }
            })
            .collect()
    }

    fn residue(&self, s: Complex64) -> Complex64 {
        let MlParams { alpha, beta } = self.params;
        s.powf(1.0 - beta) * s.exp() / alpha
    }

    fn asymptotic_applicable(&self, z: Complex64) -> bool {
        let alpha = self.params.alpha;
        let big = z.norm().powf(1.0 / alpha);
        if big < -self.config.tol.ln() + 12.0 {
            return false;
        }
        // poles close to the branch cut spoil the algebraic expansion
        if alpha < 1.0 + 1e-12 {
            let gap = (z.arg().abs() - alpha * PI).abs();
            if gap < 0.05 {
                return false;
            }
        }
        true
    }

    /// Residues of the principal poles plus the optimally truncated algebraic
    /// expansion of the branch-cut integral.
    pub fn asymptotic(&self, z: Complex64) -> Result<Complex64> {
        let mut sum: Complex64 = self.poles(z).into_iter().map(|s| self.residue(s)).sum();
        let zinv = z.inv();
        let mut zp = zinv;
        let mut prev = f64::INFINITY;
        let mut ok = false;
        for &c in &self.asym_coeffs {
            let term = zp * c;
            let mag = term.norm();
            if c != 0.0 {
                if mag > prev {
                    break;
                }
                prev = mag;
            }
            sum -= term;
            if c != 0.0 && mag < self.config.tol * 0.1 {
                ok = true;
                break;
            }
            zp *= zinv;
        }
        if !ok || !(sum.re.is_finite() && sum.im.is_finite()) {
            return Err(Error::NonConvergent(
                "asymptotic expansion cannot reach tolerance".into(),
            ));
        }
        Ok(sum)
    }

    /// Laplace-inversion contour regime.
    pub fn contour(&self, z: Complex64) -> Result<Complex64> {
        let MlParams { alpha, beta } = self.params;
        let tol = self.config.tol;
        let poles = self.poles(z);
        let phi = |s: Complex64| 0.5 * (s.re + s.norm());

        let mut marks: Vec<f64> = poles.iter().map(|&s| phi(s)).collect();
        marks.push(0.0);
        marks.sort_by(f64::total_cmp);
        marks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

        let log_tol = -tol.ln();
        // rounding on the contour grows like e^μ
        let mu_max = (tol / f64::EPSILON).ln().max(1.0);

        let mut best: Option<(usize, f64, f64)> = None;
        for (i, &lo) in marks.iter().enumerate() {
            let hi = marks.get(i + 1).copied();
            if lo >= mu_max {
                break;
            }
            let top = hi.map_or(mu_max, |h| h.min(mu_max));
            for step in 1..40 {
                let frac = step as f64 / 40.0;
                let mu = if lo == 0.0 && hi.is_none() {
                    top * frac
                } else {
                    lo + (top - lo) * frac
                };
                if mu <= lo || mu <= 0.0 {
                    continue;
                }
                if let Some((n, h)) = contour_nodes(mu, lo, hi, log_tol) {
                    if best.map_or(true, |b| n < b.0) {
                        best = Some((n, mu, h));
                    }
                }
            }
        }
        let (n, mu, h) = best.ok_or_else(|| {
            Error::NonConvergent("no admissible parabolic contour".into())
        })?;
        if n > MAX_CONTOUR_NODES {
            return Err(Error::NonConvergent(format!(
                "contour needs {n} nodes (budget {MAX_CONTOUR_NODES})"
            )));
        }

        let i = Complex64::new(0.0, 1.0);
        let f = |u: f64| -> Complex64 {
            let w = Complex64::new(1.0, u);
            let s = w * w * mu;
            let ds = i * w * (2.0 * mu);
            s.exp() * s.powf(alpha - beta) / (s.powf(alpha) - z) * ds
        };
        let mut acc = f(0.0);
        for k in 1..=n {
            let u = k as f64 * h;
            acc += f(u) + f(-u);
        }
        let integral = acc * h / (2.0 * PI * i);
        let residues: Complex64 = poles
            .iter()
            .filter(|&&s| phi(s) > mu)
            .map(|&s| self.residue(s))
            .sum();
        let v = integral + residues;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonConvergent("non-finite contour value".into()));
        }
        Ok(v)
    }
}

/// Step size and half node count for the parabolic contour with parameter
/// `mu` between singularity levels `lo < mu < hi`.
fn contour_nodes(mu: f64, lo: f64, hi: Option<f64>, log_tol: f64) -> Option<(usize, f64)> {
    const SAFETY: f64 = 0.85;
    let two_pi = 2.0 * PI;
    // distances of the singularities from the real u-axis
    let d_up = 1.0 - (lo / mu).sqrt();
    let c_up = SAFETY * d_up;
    let h_up = two_pi * c_up / (log_tol + mu * (1.0 - c_up).powi(2) + 1.0);
    let c_dn = match hi {
        Some(hi) => SAFETY * ((hi / mu).sqrt() - 1.0),
        None => (1.0 + log_tol / mu).sqrt(),
    };
    let h_dn = two_pi * c_dn / (log_tol + mu * (1.0 + c_dn).powi(2) + 1.0);
    let h = h_up.min(h_dn);
    if !(h > 0.0) {
        return None;
    }
    let u_max = (1.0 + (log_tol + 3.0) / mu).sqrt();
    let n = (u_max / h).ceil() as usize;
    Some((n, h))
}

/// `E_{α,β}(z)` with the default configuration.
pub fn ml_eval(params: MlParams, z: Complex64) -> Result<Complex64> {
    MittagLeffler::with_defaults(params).eval(z)
}

/// Relaxation form `E_{α,β}(-a t^α)` used by the solver multipliers.
pub fn ml_relaxation(params: MlParams, a: f64, t: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::invalid(format!("a >= 0 required, got {a}")));
    }
    if !(t > 0.0) {
        return Err(Error::invalid(format!("t > 0 required, got {t}")));
    }
    MittagLeffler::with_defaults(params).eval_real(-a * t.powf(params.alpha))
}
