//! One-dimensional quadrature rules used by the oracles.
//!
//! * Gauss-Legendre nodes (Newton iteration on `P_n`),
//! * adaptive Gauss-Kronrod 7/15,
//! * double-exponential rules: tanh-sinh on a finite interval (endpoint
//!   singularities) and exp-sinh on `[0, ∞)`.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n == 1 {
        x[0] = 0.0;
        w[0] = 2.0;
    }
    (x, w)
}

/// Integrates with a fixed Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(nodes: &(Vec<f64>, Vec<f64>), a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    nodes
        .0
        .iter()
        .zip(&nodes.1)
        .map(|(&x, &w)| w * f(c + h * x))
        .sum::<f64>()
        * h
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod 7/15 with global bisection of the worst panel.
pub fn adaptive_gk(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut panels = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureFailure("non-finite integrand".into()));
        }
        if err <= abs_tol {
            return Ok(total);
        }
        if panels.len() >= max_panels {
            return Err(Error::QuadratureFailure(format!(
                "error estimate {err:.3e} above tolerance {abs_tol:.1e} after {max_panels} panels"
            )));
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (pa, pb, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        let (v1, e1) = gk15(&f, pa, mid);
        let (v2, e2) = gk15(&f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// Tanh-sinh quadrature on `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)` so that endpoint singularities
/// can be evaluated from the exact distances instead of a cancelled `x - a`.
pub fn tanh_sinh(f: impl Fn(f64, f64, f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let half = 0.5 * (b - a);
    // wide enough that ∫_0^d x^{ν-1} is negligible for ν down to about 0.05
    let t_max = 6.0;
    let eval = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        // distance from the nearer endpoint, 1 - tanh|u| = 2/(e^{2|u|}+1)
        let d = half * 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        if d <= 0.0 || w == 0.0 {
            return 0.0;
        }
        let (x, da, db) = if u < 0.0 {
            (a + d, d, 2.0 * half - d)
        } else {
            (b - d, 2.0 * half - d, d)
        };
        half * w * f(x, da, db)
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..9 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let cur = sum * h;
        if !cur.is_finite() {
            return Err(Error::QuadratureFailure("non-finite tanh-sinh sum".into()));
        }
        if (cur - prev).abs() <= tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure(
        "tanh-sinh did not converge after 9 refinements".into(),
    ))
}

/// Exp-sinh quadrature on `[0, ∞)` with the mapping `x = scale·exp(π/2 sinh t)`.
///
/// Suited to integrands with an algebraic endpoint behaviour at 0 and
/// exponential decay at infinity on the length scale `scale`.
pub fn exp_sinh(f: impl Fn(f64) -> f64, scale: f64, tol: f64) -> Result<f64> {
    exp_sinh_abs(f, scale, tol, 1e-300)
}

/// [`exp_sinh`] that also stops once successive estimates differ by less
/// than `abs_tol`.
pub fn exp_sinh_abs(f: impl Fn(f64) -> f64, scale: f64, tol: f64, abs_tol: f64) -> Result<f64> {
    let eval = |t: f64| -> f64 {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let x = scale * e;
        if x == 0.0 || !x.is_finite() {
            return 0.0;
        }
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * x * FRAC_PI_2 * t.cosh()
        }
    };
    let (t_lo, t_hi): (f64, f64) = (-4.5, 3.5);
    let mut h: f64 = 0.25;
    let mut sum = 0.0;
    let mut k = (t_lo / h).ceil() as i64;
    while k as f64 * h <= t_hi {
        sum += eval(k as f64 * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..8 {
        h *= 0.5;
        let mut k = (t_lo / h).ceil() as i64;
        if k % 2 == 0 {
            k += 1;
        }
        while k as f64 * h <= t_hi {
            sum += eval(k as f64 * h);
            k += 2;
        }
        let cur = sum * h;
        if !cur.is_finite() {
            return Err(Error::QuadratureFailure("non-finite exp-sinh sum".into()));
        }
        if (cur - prev).abs() <= tol * cur.abs() || (cur - prev).abs() <= abs_tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure(
        "exp-sinh did not converge after 8 refinements".into(),
    ))
}

/// `∫_a^∞ f` for an oscillatory, slowly decaying `f`: panels of length
/// `period` (each split into `pieces` Gauss-Legendre pieces), with the
/// partial sums accelerated by the ε-algorithm. Converges in the Abel sense
/// for integrands that do not decay but oscillate.
pub fn oscillatory_tail(
    f: impl Fn(f64) -> f64,
    a: f64,
    period: f64,
    pieces: usize,
    tol: f64,
) -> Result<f64> {
    let rule = gauss_legendre(20);
    let w = period / pieces as f64;
    let mut sum = 0.0;
    let mut partial = Vec::new();
    let mut last: Option<f64> = None;
    for j in 0..2000 {
        let lo = a + j as f64 * period;
        let panel: f64 = (0..pieces)
            .map(|i| gauss_legendre_on(&rule, lo + i as f64 * w, lo + (i + 1) as f64 * w, &f))
            .sum();
        if !panel.is_finite() {
            return Err(Error::QuadratureFailure("non-finite panel".into()));
        }
        sum += panel;
        partial.push(sum);
        if partial.len() >= 12 && partial.len() % 4 == 0 {
            let tail = &partial[partial.len().saturating_sub(40)..];
            if let Some((v, _)) = crate::accel::wynn_epsilon(tail) {
                if let Some(prev) = last {
                    if (v - prev).abs() <= tol * v.abs().max(1.0) {
                        return Ok(v);
                    }
                }
                last = Some(v);
            }
        }
    }
    Err(Error::QuadratureFailure(
        "oscillatory integral did not settle".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(8);
        let v = gauss_legendre_on(&rule, 0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-9);
        let sum: f64 = rule.1.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn kronrod_smooth_integral() {
        let v = adaptive_gk(|x| x.sin(), 0.0, PI, 1e-13, 200).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let v = tanh_sinh(|_, da, _| da.powf(-0.5), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "{v}");
        // ∫_0^1 (1-x)^{-0.7} dx = 1/0.3
        let v = tanh_sinh(|_, _, db| db.powf(-0.7), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 1.0 / 0.3).abs() < 1e-10, "{v}");
    }

    #[test]
    fn exp_sinh_gamma_integral() {
        // ∫_0^∞ x^{-0.4} e^{-x} dx = Γ(0.6)
        let v = exp_sinh(|x| x.powf(-0.4) * (-x).exp(), 1.0, 1e-14).unwrap();
        assert!((v - crate::special::gamma(0.6)).abs() < 1e-12, "{v}");
    }
}
