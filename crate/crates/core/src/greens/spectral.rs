use super::profile::{DensityProfile, GreenParams, Method, Sampling};
use super::{check_gamma, check_time};
use crate::accel::alternating_weights;
use crate::error::{Error, Result};
use crate::grid::{SpatialGrid, Spectral};
use crate::mittag_leffler::{MittagLeffler, MlParams};
use crate::quadrature::{exp_sinh_abs, oscillatory_tail, tanh_sinh};
use crate::riesz_feller::{symbol, RieszFellerParams, TemporalParams};
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Multiplier below this at the Nyquist frequency counts as decayed.
const DECAYED: f64 = 1e-12;
/// Terms of the alternating alias sums.
const ALIAS_TERMS: usize = 20;

/// `k ↦ E_{β,γ}(-ηt^β Ψ(k))`.
pub(crate) struct Multiplier {
    rf: RieszFellerParams,
    beta: f64,
    c: f64,
    ml: MittagLeffler,
}

impl Multiplier {
    pub(crate) fn new(rf: RieszFellerParams, tp: TemporalParams, gamma: f64, t: f64) -> Result<Self> {
        Ok(Self {
            rf,
            beta: tp.beta(),
            c: tp.eta() * t.powf(tp.beta()),
            ml: MittagLeffler::with_defaults(MlParams::new(tp.beta(), gamma)?),
        })
    }

    pub(crate) fn at(&self, k: f64) -> Result<C64> {
        self.ml.eval(-self.c * symbol(self.rf, k))
    }

    /// At complex `k` in the lower right quadrant, continuing `Ψ(k) = k^α e^{iθπ/2}`.
    fn at_complex(&self, k: C64) -> Result<C64> {
        let psi = k.powf(self.rf.alpha()) * C64::from_polar(1.0, self.rf.theta() * FRAC_PI_2);
        self.ml.eval(-self.c * psi)
    }

    /// Largest real part among the exponential terms `e^s`, `s^β = -w`, of the
    /// large-argument expansion at `k`; `-∞` when there are none.
    pub(crate) fn exponential_part(&self, k: f64) -> f64 {
        let w = self.c * symbol(self.rf, k);
        let z = -w;
        let (r, arg) = (z.norm().powf(1.0 / self.beta), z.arg());
        (-1..=1)
            .map(|n| (arg + 2.0 * PI * n as f64) / self.beta)
            .filter(|phi| phi.abs() <= PI)
            .map(|phi| r * phi.cos())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn params(rf: RieszFellerParams, tp: TemporalParams, gamma: f64) -> GreenParams {
    GreenParams {
        alpha: rf.alpha(),
        theta: rf.theta(),
        beta: tp.beta(),
        eta: tp.eta(),
        gamma,
    }
}

/// Inverse Fourier transform of `E_{β,γ}(-ηt^β Ψ(k))` on the grid, as the
/// periodized density (mass `E_{β,γ}(0)` exactly).
///
/// When the multiplier has decayed below `1e-12` at the Nyquist frequency the
/// grid values are point samples from the discrete inverse transform.
/// Otherwise they are cell averages: each bin collects all its aliases
/// `k + lK`, `K = 2π/h`, weighted by `sinc(kh/2)`, and the resulting
/// alternating sums over `l` are summed by the CVZ algorithm. Fails with
/// `GridTooCoarse` if the multiplier does not decay at all, or if a
/// non-negligible oscillating part (`β > 1`) survives at the Nyquist frequency.
pub fn green_spectral(
    rf: RieszFellerParams,
    tp: TemporalParams,
    gamma: f64,
    t: f64,
    grid: SpatialGrid,
) -> Result<DensityProfile> {
    check_gamma(tp.beta(), gamma)?;
    check_time(t)?;
    let m = Multiplier::new(rf, tp, gamma, t)?;
    let n = grid.num_points();
    let h = grid.spacing();
    let k_nyq = grid.nyquist();
    let m0 = m.at(0.0)?.norm();
    let tail = m.at(k_nyq)?.norm().max(m.at(-k_nyq)?.norm());

    let osc = m.exponential_part(k_nyq).max(m.exponential_part(-k_nyq));
    if tp.beta() > 1.0 && osc > DECAYED.ln() {
        return Err(Error::GridTooCoarse(format!(
            "oscillating part of the multiplier is e^{osc:.1} at the Nyquist frequency"
        )));
    }
    // bins 0..=n/2; the rest follow by conjugate symmetry
    let mut half = Vec::with_capacity(n / 2 + 1);
    let sampling = if tail <= DECAYED * m0 {
        for i in 0..=n / 2 {
            let k = grid.wavenumber(i);
            half.push(if i == n / 2 {
                C64::new((0.5 * (m.at(k)? + m.at(-k)?)).re, 0.0)
            } else {
                m.at(k)?
            });
        }
        Sampling::Point
    } else {
        if tail >= 0.5 * m0 {
            return Err(Error::GridTooCoarse(format!(
                "multiplier still {tail:.2e} at the Nyquist frequency {k_nyq:.3e}"
            )));
        }
        let w = alternating_weights(ALIAS_TERMS);
        let big_k = 2.0 * PI / h;
        let alias = |k0: f64, dir: f64| -> Result<C64> {
            let mut s = C64::new(0.0, 0.0);
            for (l, wl) in w.iter().enumerate() {
                let k = k0 + dir * l as f64 * big_k;
                s += *wl * m.at(k)? / k;
            }
            Ok(s)
        };
        half.push(m.at(0.0)?);
        for i in 1..=n / 2 {
            let k = grid.wavenumber(i);
            // Σ_l m(k+lK) sinc((k+lK)h/2), split into l ≥ 0 and l < 0
            let sum = alias(k, 1.0)? - alias(k - big_k, -1.0)?;
            let c = sum * ((0.5 * k * h).sin() * 2.0 / h);
            half.push(if i == n / 2 { C64::new(c.re, 0.0) } else { c });
        }
        Sampling::CellAverage
    };
    let mut coeffs = half.clone();
    coeffs.extend(half[1..n / 2].iter().rev().map(|c| c.conj()));
    let values = Spectral::new(grid).kernel(&coeffs)?;
    DensityProfile::new(grid, values, t, params(rf, tp, gamma), Method::Spectral, sampling)
}

/// Pointwise inverse Fourier integral `(1/π) Re ∫_0^∞ E_{β,γ}(-ηt^βΨ(k)) e^{-ikx} dk`.
///
/// For `x > 0` the ray is turned into the lower half plane as far as the
/// growth sector of the Mittag-Leffler function allows, so both factors
/// decay; `x < 0` uses the reflection `θ → -θ`. At `x = 0` the integral is
/// taken on the real axis and must converge absolutely (`β = 1` or `α > 1`).
pub fn green_pointwise(
    rf: RieszFellerParams,
    tp: TemporalParams,
    gamma: f64,
    t: f64,
    x: f64,
) -> Result<f64> {
    check_gamma(tp.beta(), gamma)?;
    check_time(t)?;
    if !x.is_finite() {
        return Err(Error::invalid("x must be finite"));
    }
    let rf = if x < 0.0 {
        RieszFellerParams::new(rf.alpha(), -rf.theta())?
    } else {
        rf
    };
    let x = x.abs();
    let m = Multiplier::new(rf, tp, gamma, t)?;
    let (alpha, beta) = (rf.alpha(), tp.beta());
    let scale_k = m.c.powf(-1.0 / alpha);
    if x == 0.0 {
        if !(beta == 1.0 || alpha > 1.0) {
            return Err(Error::invalid(
                "x = 0 needs beta = 1 or alpha > 1 (the density is singular there)",
            ));
        }
        let failure = std::cell::Cell::new(None);
        let f = |k: f64| match m.at(k) {
            Ok(v) => v.re,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        };
        let v = exp_sinh_abs(f, scale_k, 1e-10, 1e-13 / scale_k)?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        return Ok(v / PI);
    }
    // |arg w| must stay below π(1 - β/2) along the ray k = r e^{-iφ}
    let sector = PI * (1.0 - 0.5 * beta);
    let phi = ((rf.theta() * FRAC_PI_2 + 0.8 * sector) / alpha).min(FRAC_PI_2);
    if phi < 0.05 {
        return real_axis(&m, x, scale_k);
    }
    let dir = C64::from_polar(1.0, -phi);
    let failure = std::cell::Cell::new(None);
    let f = |r: f64| -> f64 {
        let k = dir * r;
        match m.at_complex(k) {
            Ok(v) => (v * (C64::new(0.0, -x) * k).exp() * dir).re,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let scale = 1.0 / (x * phi.sin() + 1.0 / scale_k);
    let v = exp_sinh_abs(f, scale, 1e-10, 1e-14 / scale_k)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(v / PI)
}

/// The inverse integral on the real axis, for when no rotation is admissible
/// (the multiplier does not decay off the axis).
fn real_axis(m: &Multiplier, x: f64, scale_k: f64) -> Result<f64> {
    let failure = std::cell::Cell::new(None);
    let f = |k: f64| -> f64 {
        match m.at(k) {
            Ok(v) => (v * C64::from_polar(1.0, -k * x)).re,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let period = PI / x;
    let pieces = (period / (0.25 * scale_k)).ceil().max(1.0) as usize;
    let head = tanh_sinh(|k, _, _| f(k), 0.0, period, 1e-12)?;
    let tail = oscillatory_tail(f, period, period, pieces, 1e-10)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok((head + tail) / PI)
}
