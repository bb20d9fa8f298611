//! Cosine transform of an H-function:
//!
//! ```text
//! ∫_0^∞ t^{ρ-1} cos(kt) H^{m,n}_{p,q}[a t^μ | (a_p, A_p); (b_q, B_q)] dt
//!   = (π/k^ρ) H^{n+1,m}_{q+1,p+2}[k^μ/a | (1-b_q, B_q), ((1+ρ)/2, μ/2);
//!                                          (ρ, μ), (1-a_p, A_p), ((1+ρ)/2, μ/2)]
//! ```

use super::{h_eval, h_eval_with, HConfig, HFunctionSpec};
use crate::accel::wynn_epsilon;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, gauss_legendre_on, tanh_sinh};
use std::cell::RefCell;
use std::f64::consts::PI;

/// The right-hand side spec of the transform.
pub(crate) fn transformed(spec: &HFunctionSpec, rho: f64, mu: f64) -> Result<HFunctionSpec> {
    let half = ((1.0 + rho) / 2.0, mu / 2.0);
    let mut upper: Vec<(f64, f64)> = spec.lower.iter().map(|&(b, bb)| (1.0 - b, bb)).collect();
    upper.push(half);
    let mut lower = vec![(rho, mu)];
    lower.extend(spec.upper.iter().map(|&(a, aa)| (1.0 - a, aa)));
    lower.push(half);
    HFunctionSpec::new(spec.n + 1, spec.m, upper, lower)
}

fn check_conditions(spec: &HFunctionSpec, rho: f64, mu: f64, a: f64, k: f64) -> Result<()> {
    if !(k > 0.0 && a > 0.0 && mu > 0.0) {
        return Err(Error::invalid("k > 0, a > 0 and mu > 0 required"));
    }
    if !(spec.omega() > 0.0) {
        return Err(Error::invalid(format!("Omega > 0 required, got {}", spec.omega())));
    }
    let lo = spec.lower[..spec.m]
        .iter()
        .map(|&(b, bb)| b / bb)
        .fold(f64::INFINITY, f64::min);
    if spec.m > 0 && !(rho + mu * lo > 0.0) {
        return Err(Error::invalid("rho + mu*min(b_j/B_j) > 0 required"));
    }
    let hi = spec.upper[..spec.n]
        .iter()
        .map(|&(a, aa)| (a - 1.0) / aa)
        .fold(f64::NEG_INFINITY, f64::max);
    if spec.n > 0 && !(rho + mu * hi < 0.0) {
        return Err(Error::invalid("rho + mu*max((a_j-1)/A_j) < 0 required"));
    }
    Ok(())
}

/// `∫_0^∞ t^{ρ-1} cos(kt) H[a t^μ] dt` by half-period panels, accelerated
/// with the ε-algorithm. Integration stops early once the H-series can no
/// longer be evaluated, provided the integrand is already negligible there.
fn lhs(spec: &HFunctionSpec, rho: f64, mu: f64, a: f64, k: f64) -> Result<f64> {
    // the ascending series loses digits for large arguments; past that point
    // the integrand is small and the tail is dropped
    let cfg = HConfig {
        accuracy: 1e-8,
        ..HConfig::default()
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let h = |t: f64| -> f64 {
        let y = (a * t.powf(mu)).max(f64::MIN_POSITIVE);
        match h_eval_with(spec, y, &cfg) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let f = |t: f64| t.powf(rho - 1.0) * (k * t).cos() * h(t);
    let period = PI / k;

    // endpoint singularity of t^{ρ-1} on a short first piece, then panels
    let t0 = period.min(1.0);
    let first = tanh_sinh(|t, _, _| f(t), 0.0, t0, 1e-12)?;
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let mut sum = first;
    let mut partial = vec![sum];
    let mut last_size = f64::INFINITY;
    let mut quiet = 0;
    let rule = gauss_legendre(20);
    let pieces = period.ceil().max(1.0) as usize;
    for j in 0..4000 {
        let lo = t0 + j as f64 * period;
        let w = period / pieces as f64;
        let panel: f64 = (0..pieces)
            .map(|i| gauss_legendre_on(&rule, lo + i as f64 * w, lo + (i + 1) as f64 * w, f))
            .sum();
        if failure.borrow_mut().take().is_some() {
            // the series fails inside this panel: integrate up to the first
            // failing point and drop the rest if the integrand is small there
            let step = period / 256.0;
            let mut end = lo;
            let mut size = f(lo).abs();
            if failure.borrow().is_some() {
                // already failing at the panel start
                size = f64::INFINITY;
            }
            while end < lo + period {
                let v = f(end + step);
                if failure.borrow().is_some() {
                    break;
                }
                end += step;
                size = v.abs();
            }
            let e = failure.borrow_mut().take();
            if size < 1e-6 {
                let pieces = ((end - lo) / w).ceil().max(1.0) as usize;
                let ww = (end - lo) / pieces as f64;
                let tail: f64 = (0..pieces)
                    .map(|i| gauss_legendre_on(&rule, lo + i as f64 * ww, lo + (i + 1) as f64 * ww, f))
                    .sum();
                return Ok(sum + tail);
            }
            if last_size < 1e-6 {
                return Ok(sum);
            }
            return Err(e.unwrap_or_else(|| Error::QuadratureFailure("cosine-transform tail".into())));
        }
        sum += panel;
        partial.push(sum);
        last_size = panel.abs();
        if panel.abs() <= 1e-12 * sum.abs().max(1e-3) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if partial.len() >= 16 && partial.len() % 4 == 0 {
            let tail = &partial[partial.len().saturating_sub(30)..];
            if let Some((v, err)) = wynn_epsilon(tail) {
                if err < 1e-9 * v.abs().max(1e-6) {
                    return Ok(v);
                }
            }
        }
    }
    Err(Error::QuadratureFailure(
        "cosine-transform integral did not converge".into(),
    ))
}

/// `|LHS - RHS|` of the cosine-transform identity, the left side by direct
/// oscillatory quadrature against [`h_eval`].
pub fn verify_cosine_transform(spec: &HFunctionSpec, rho: f64, mu: f64, a: f64, k: f64) -> Result<f64> {
    check_conditions(spec, rho, mu, a, k)?;
    let left = lhs(spec, rho, mu, a, k)?;
    let right = PI / k.powf(rho) * h_eval(&transformed(spec, rho, mu)?, k.powf(mu) / a)?;
    Ok((left - right).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_spec() -> HFunctionSpec {
        HFunctionSpec::new(1, 0, vec![], vec![(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn exponential_transform() {
        for &(k, exact) in &[(1.0, 0.5), (2.0, 0.2), (0.5, 0.8)] {
            let l = lhs(&exp_spec(), 1.0, 1.0, 1.0, k).unwrap();
            assert!((l - exact).abs() < 1e-6, "k={k}: {l}");
            let r = verify_cosine_transform(&exp_spec(), 1.0, 1.0, 1.0, k).unwrap();
            assert!(r < 1e-6, "k={k}: residual {r}");
        }
    }

    #[test]
    fn gaussian_transform() {
        // ∫ cos(kt) e^{-a t²} dt = ½√(π/a) e^{-k²/4a}
        for &(a, k) in &[(1.0, 1.0), (0.5, 2.0), (2.0, 0.7)] {
            let exact = 0.5 * (PI / a).sqrt() * (-k * k / (4.0 * a)).exp();
            let rhs = PI / k * h_eval(&transformed(&exp_spec(), 1.0, 2.0).unwrap(), k * k / a).unwrap();
            assert!((rhs - exact).abs() < 1e-10, "{rhs} vs {exact}");
            let r = verify_cosine_transform(&exp_spec(), 1.0, 2.0, a, k).unwrap();
            assert!(r < 1e-4, "a={a} k={k}: {r}");
        }
    }

    #[test]
    fn rejects_violated_conditions() {
        assert!(verify_cosine_transform(&exp_spec(), -0.5, 1.0, 1.0, 1.0).is_err());
        assert!(verify_cosine_transform(&exp_spec(), 1.0, 1.0, 1.0, -1.0).is_err());
    }
}
