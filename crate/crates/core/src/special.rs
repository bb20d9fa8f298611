//! Real gamma-family helpers shared by the series kernels.
//!
//! The heavy lifting is done by `libm` (a port of the musl routines); this
//! module adds the conventions the residue and power series rely on:
//! `1/Γ` vanishes at the poles, and `ln|Γ|` is paired with the sign of `Γ`.

/// Distance below which an argument is treated as sitting on a gamma pole.
pub const POLE_TOL: f64 = 1e-12;

/// `Γ(x)` for real `x`, including negative non-integers (reflection is done
/// inside `libm`). Returns ±∞ at the poles.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `(ln|Γ(x)|, sign Γ(x))`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    let (lg, sign) = libm::lgamma_r(x);
    (lg, if sign < 0 { -1.0 } else { 1.0 })
}

/// If `x` is within `tol` of a non-positive integer `-n`, returns `Some(n)`.
pub fn nonpositive_integer(x: f64, tol: f64) -> Option<u64> {
    if x > tol {
        return None;
    }
    let r = x.round();
    if (x - r).abs() <= tol && r <= 0.0 {
        Some((-r) as u64)
    } else {
        None
    }
}

/// `1/Γ(x)`, with the analytic-continuation convention `1/Γ(-n) = 0`.
pub fn rgamma(x: f64) -> f64 {
    if nonpositive_integer(x, POLE_TOL).is_some() {
        return 0.0;
    }
    if x > 170.0 {
        let (lg, s) = ln_gamma_signed(x);
        return s * (-lg).exp();
    }
    1.0 / gamma(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// `n!` as a float (exact up to 22!).
pub fn factorial(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
