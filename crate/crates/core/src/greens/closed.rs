use super::profile::{DensityProfile, GreenParams, Method, Sampling};
use super::{check_gamma, check_time, ClosedCase};
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::hfunction::{h_eval, HFunctionSpec};
use crate::riesz_feller::{RieszFellerParams, TemporalParams};
use crate::special::rgamma;
use std::f64::consts::{FRAC_PI_2, PI};

/// `(4πηt)^{-1/2} exp(-x²/(4ηt))`.
pub fn gaussian_density(eta: f64, t: f64, x: f64) -> Result<f64> {
    if !(eta > 0.0 && t > 0.0) {
        return Err(Error::invalid(format!("eta > 0 and t > 0 required, got {eta}, {t}")));
    }
    let s = eta * t;
    Ok((-x * x / (4.0 * s)).exp() / (4.0 * PI * s).sqrt())
}

/// Fundamental solution of the neutral case `α = β` at `ηt^β = 1`:
///
/// ```text
/// (1/π) x^{α-1} sin(π(α-θ)/2) / (1 + 2x^α cos(π(α-θ)/2) + x^{2α}),   x > 0.
/// ```
pub fn neutral_density(rf: RieszFellerParams, x: f64) -> Result<f64> {
    let a = rf.alpha();
    if !(a < 2.0) {
        return Err(Error::invalid(format!("0 < alpha < 2 required, got {a}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("x > 0 required, got {x}")));
    }
    let phase = FRAC_PI_2 * (a - rf.theta());
    let xa = x.powf(a);
    Ok(x.powf(a - 1.0) * phase.sin() / (PI * (1.0 + 2.0 * xa * phase.cos() + xa * xa)))
}

/// Stable density `L^θ_α(x; ηt)` (the `β = 1` fundamental solution), from the
/// `H^{1,1}_{2,2}` residue series: ascending in `|x|/(ηt)^{1/α}` for `α > 1`,
/// in `(ηt)^{1/α}/|x|` for `α < 1`. `α = 1` is supported only for `θ = 0`
/// (Cauchy).
pub fn levy_density(rf: RieszFellerParams, eta: f64, t: f64, x: f64) -> Result<f64> {
    check_time(t)?;
    TemporalParams::new(1.0, eta)?;
    if x == 0.0 || !x.is_finite() {
        return Err(Error::invalid(format!("x != 0 required, got {x}")));
    }
    let a = rf.alpha();
    let c = eta * t;
    if a == 1.0 {
        if rf.theta() != 0.0 {
            return Err(Error::invalid(
                "alpha = 1 with theta != 0 has no series form; use the spectral path",
            ));
        }
        return Ok(c / (PI * (c * c + x * x)));
    }
    if a == 2.0 {
        return gaussian_density(eta, t, x);
    }
    let rf = oriented(rf, x)?;
    let rho = rf.rho();
    if rho <= 0.0 {
        return Ok(0.0);
    }
    let spec = HFunctionSpec::new(
        1,
        1,
        vec![(1.0, 1.0 / a), (1.0, rho)],
        vec![(1.0, 1.0), (1.0, rho)],
    )?;
    let scale = c.powf(1.0 / a);
    Ok(h_eval(&spec, x.abs() / scale)? / (a * x.abs()))
}

/// Fundamental solution of the time-fractional equation (`α = 2`):
/// `(1/(2|x|)) H^{1,0}_{1,1}[|x|/(ηt^β)^{1/2} | (1, β/2); (1, 1)]`.
pub fn time_fractional_density(beta: f64, eta: f64, t: f64, x: f64) -> Result<f64> {
    TemporalParams::new(beta, eta)?;
    check_time(t)?;
    if !x.is_finite() {
        return Err(Error::invalid("x must be finite"));
    }
    let scale = (eta * t.powf(beta)).sqrt();
    if x == 0.0 {
        return Ok(rgamma(1.0 - 0.5 * beta) / (2.0 * scale));
    }
    let spec = HFunctionSpec::new(1, 0, vec![(1.0, 0.5 * beta)], vec![(1.0, 1.0)])?;
    Ok(h_eval(&spec, x.abs() / scale)? / (2.0 * x.abs()))
}

/// `H^{2,1}_{3,3}` whose Mellin-Barnes form inverts `E_{β,γ}(-Ψ(k))`:
/// upper `(1, 1/α), (γ, β/α), (1, ρ)`, lower `(1, 1/α), (1, 1), (1, ρ)`,
/// with `ρ = (α-θ)/(2α)`. The density is `(1/(α|x|)) H(|x|/(ηt^β)^{1/α})`
/// for `x > 0`; `x < 0` uses `θ → -θ`.
pub fn green_hfunction_spec(rf: RieszFellerParams, tp: TemporalParams, gamma: f64) -> Result<HFunctionSpec> {
    check_gamma(tp.beta(), gamma)?;
    let a = rf.alpha();
    let rho = rf.rho();
    if rho <= 0.0 {
        return Err(Error::invalid("rho = 0: the density vanishes on this side"));
    }
    HFunctionSpec::new(
        2,
        1,
        vec![(1.0, 1.0 / a), (gamma, tp.beta() / a), (1.0, rho)],
        vec![(1.0, 1.0 / a), (1.0, 1.0), (1.0, rho)],
    )
}

fn oriented(rf: RieszFellerParams, x: f64) -> Result<RieszFellerParams> {
    if x < 0.0 {
        RieszFellerParams::new(rf.alpha(), -rf.theta())
    } else {
        Ok(rf)
    }
}

fn green_hfunction_at(rf: RieszFellerParams, tp: TemporalParams, gamma: f64, t: f64, x: f64) -> Result<f64> {
    let rf = oriented(rf, x)?;
    if rf.rho() <= 0.0 {
        return Ok(0.0);
    }
    let spec = green_hfunction_spec(rf, tp, gamma)?;
    let scale = super::length_scale(rf, tp, t);
    Ok(h_eval(&spec, x.abs() / scale)? / (rf.alpha() * x.abs()))
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

/// Samples a pointwise density on the grid. Where `at_origin` has no value
/// the origin gets the mean of the two one-sided values at `±h/2`.
fn sample(
    grid: SpatialGrid,
    f: impl Fn(f64) -> Result<f64>,
    at_origin: Option<f64>,
) -> Result<Vec<f64>> {
    let h = grid.spacing();
    grid.points()
        .into_iter()
        .map(|x| {
            if x != 0.0 {
                f(x)
            } else if let Some(v) = at_origin {
                Ok(v)
            } else {
                Ok(0.5 * (f(0.5 * h)? + f(-0.5 * h)?))
            }
        })
        .collect()
}

/// `(1/(α|x|)) H^{2,1}_{3,3}[...]` on every grid node.
pub fn green_hfunction(
    rf: RieszFellerParams,
    tp: TemporalParams,
    gamma: f64,
    t: f64,
    grid: SpatialGrid,
) -> Result<DensityProfile> {
    check_gamma(tp.beta(), gamma)?;
    check_time(t)?;
    let values = sample(grid, |x| green_hfunction_at(rf, tp, gamma, t, x), None)?;
    DensityProfile::new(grid, values, t, params(rf, tp, gamma), Method::Hfunction, Sampling::Point)
}

pub(super) fn profile(
    case: ClosedCase,
    rf: RieszFellerParams,
    tp: TemporalParams,
    t: f64,
    grid: SpatialGrid,
) -> Result<DensityProfile> {
    let (a, eta) = (rf.alpha(), tp.eta());
    let values = match case {
        ClosedCase::Gaussian => sample(grid, |x| gaussian_density(eta, t, x), Some(gaussian_density(eta, t, 0.0)?))?,
        ClosedCase::Neutral => {
            let scale = super::length_scale(rf, tp, t);
            let f = |x: f64| -> Result<f64> {
                Ok(neutral_density(oriented(rf, x)?, x.abs() / scale)? / scale)
            };
            let origin = if a > 1.0 {
                Some(0.0)
            } else if a == 1.0 {
                Some((FRAC_PI_2 * (1.0 - rf.theta())).sin() / (PI * scale))
            } else {
                None
            };
            sample(grid, f, origin)?
        }
        ClosedCase::Levy => sample(grid, |x| levy_density(rf, eta, t, x), None)?,
        ClosedCase::TimeFractional => {
            let b = tp.beta();
            sample(
                grid,
                |x| time_fractional_density(b, eta, t, x),
                Some(time_fractional_density(b, eta, t, 0.0)?),
            )?
        }
    };
    DensityProfile::new(grid, values, t, params(rf, tp, 1.0), Method::ClosedForm, Sampling::Point)
}
