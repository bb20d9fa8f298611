//! Fox H-function `H^{m,n}_{p,q}[x | (a_j, A_j); (b_j, B_j)]` for real `x > 0`.
//!
//! Mellin-Barnes kernel (Mathai-Saxena convention):
//!
//! ```text
//! χ(s) = Π_{j≤m} Γ(b_j - B_j s) Π_{j≤n} Γ(1 - a_j + A_j s)
//!        / ( Π_{j>m} Γ(1 - b_j + B_j s) Π_{j>n} Γ(a_j - A_j s) ),
//! H(x) = (1/2πi) ∫_L χ(s) x^s ds.
//! ```
//!
//! Evaluation sums residues at the poles of the first product (ascending
//! series). When that series diverges the equivalent form
//! `H^{n,m}_{q,p}[1/x | (1-b, B); (1-a, A)]` is summed instead.

mod cosine;
mod parse;

pub use cosine::verify_cosine_transform;

use crate::accel::wynn_epsilon;
use crate::error::{Error, Result};
use crate::special::{factorial, ln_gamma_signed, nonpositive_integer};

/// Parameters of an H-function. The orders `p`, `q` are the list lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct HFunctionSpec {
    m: usize,
    n: usize,
    upper: Vec<(f64, f64)>,
    lower: Vec<(f64, f64)>,
    omega: f64,
}

impl HFunctionSpec {
    pub fn new(m: usize, n: usize, upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        let (p, q) = (upper.len(), lower.len());
        if m > q || n > p {
            return Err(Error::invalid(format!(
                "0 <= m <= q and 0 <= n <= p required, got m={m}, n={n}, p={p}, q={q}"
            )));
        }
        for &(a, big_a) in upper.iter().chain(&lower) {
            if !a.is_finite() || !(big_a > 0.0) || !big_a.is_finite() {
                return Err(Error::invalid(format!(
                    "parameters must be finite with positive weights, got ({a}, {big_a})"
                )));
            }
        }
        let omega = lower[..m].iter().map(|b| b.1).sum::<f64>()
            - lower[m..].iter().map(|b| b.1).sum::<f64>()
            + upper[..n].iter().map(|a| a.1).sum::<f64>()
            - upper[n..].iter().map(|a| a.1).sum::<f64>();
        Ok(Self {
            m,
            n,
            upper,
            lower,
            omega,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.upper.len()
    }
    pub fn q(&self) -> usize {
        self.lower.len()
    }
    pub fn upper(&self) -> &[(f64, f64)] {
        &self.upper
    }
    pub fn lower(&self) -> &[(f64, f64)] {
        &self.lower
    }

    /// `Ω = Σ_{j≤m} B_j - Σ_{j>m} B_j + Σ_{j≤n} A_j - Σ_{j>n} A_j`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `μ = Σ B_j - Σ A_j`; the ascending series converges for all `x` when `μ > 0`.
    pub fn mu(&self) -> f64 {
        self.lower.iter().map(|b| b.1).sum::<f64>() - self.upper.iter().map(|a| a.1).sum::<f64>()
    }

    /// `Π A_j^{-A_j} Π B_j^{B_j}`, the radius of convergence when `μ = 0`.
    pub fn radius(&self) -> f64 {
        let ln: f64 = self.lower.iter().map(|&(_, b)| b * b.ln()).sum::<f64>()
            - self.upper.iter().map(|&(_, a)| a * a.ln()).sum::<f64>();
        ln.exp()
    }

    /// The spec of the same function in the variable `1/x`.
    pub fn inverted(&self) -> Self {
        let flip = |v: &[(f64, f64)]| v.iter().map(|&(c, w)| (1.0 - c, w)).collect::<Vec<_>>();
        Self::new(self.n, self.m, flip(&self.lower), flip(&self.upper))
            .expect("inversion preserves validity")
    }
}

/// Numerical controls of the residue series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HConfig {
    /// Terms below `tol·max|partial sum|` count towards the stopping run.
    pub tol: f64,
    /// Length of the stopping run.
    pub run: usize,
    pub max_terms: usize,
    /// Poles closer than this are treated as coincident.
    pub collision_tol: f64,
    /// Acceptable rounding error relative to the result (or absolute, whichever is larger).
    pub accuracy: f64,
}

impl Default for HConfig {
    fn default() -> Self {
        Self {
            tol: 1e-15,
            run: 20,
            max_terms: 5000,
            collision_tol: 1e-8,
            accuracy: 1e-10,
        }
    }
}

/// A gamma factor of χ written as `Γ(c + d·s)`, in the numerator or denominator.
#[derive(Debug, Clone, Copy)]
struct Factor {
    c: f64,
    d: f64,
    numerator: bool,
}

fn factors(spec: &HFunctionSpec) -> Vec<Factor> {
    let mut out = Vec::new();
    for (j, &(b, bb)) in spec.lower.iter().enumerate() {
        out.push(if j < spec.m {
            Factor { c: b, d: -bb, numerator: true }
        } else {
            Factor { c: 1.0 - b, d: bb, numerator: false }
        });
    }
    for (j, &(a, aa)) in spec.upper.iter().enumerate() {
        out.push(if j < spec.n {
            Factor { c: 1.0 - a, d: aa, numerator: true }
        } else {
            Factor { c: a, d: -aa, numerator: false }
        });
    }
    out
}

/// `-Res_{s=s*} χ(s) x^s` as (ln magnitude, sign), or `None` when the
/// singularity cancels.
fn residue(fs: &[Factor], s: f64, ln_x: f64, tol: f64) -> Result<Option<(f64, f64)>> {
    let mut order: i64 = 0;
    let mut ln_mag = s * ln_x;
    let mut sign = -1.0;
    for f in fs {
        let arg = f.c + f.d * s;
        match nonpositive_integer(arg, tol) {
            Some(nu) => {
                // Γ(-ν + dε) ≈ (-1)^ν / (ν! d ε)
                let local_ln = -factorial_ln(nu) - f.d.abs().ln();
                let local_sign = if nu % 2 == 0 { 1.0 } else { -1.0 } * f.d.signum();
                if f.numerator {
                    order += 1;
                    ln_mag += local_ln;
                    sign *= local_sign;
                } else {
                    order -= 1;
                    ln_mag -= local_ln;
                    sign *= local_sign;
                }
            }
            None => {
                let (lg, sg) = ln_gamma_signed(arg);
                if f.numerator {
                    ln_mag += lg;
                } else {
                    ln_mag -= lg;
                }
                sign *= sg;
            }
        }
    }
    match order {
        o if o <= 0 => Ok(None),
        1 => Ok(Some((ln_mag, sign))),
        o => Err(Error::PoleCollision {
            pole: s,
            order: o as usize,
        }),
    }
}

fn factorial_ln(n: u64) -> f64 {
    if n < 20 {
        factorial(n).ln()
    } else {
        ln_gamma_signed(n as f64 + 1.0).0
    }
}

/// Right poles `(b_j + ν)/B_j`, `j ≤ m`, in increasing order with coincident
/// candidates merged.
struct Poles {
    starts: Vec<(f64, f64)>,
    next: Vec<u64>,
    tol: f64,
}

impl Iterator for Poles {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        let pos = |k: usize, nu: u64| (self.starts[k].0 + nu as f64) / self.starts[k].1;
        let (best, _) = (0..self.starts.len())
            .map(|k| (k, pos(k, self.next[k])))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        let s = pos(best, self.next[best]);
        for k in 0..self.starts.len() {
            while (pos(k, self.next[k]) - s).abs() <= self.tol * s.abs().max(1.0) {
                self.next[k] += 1;
            }
        }
        Some(s)
    }
}

fn ascending_series(spec: &HFunctionSpec, x: f64, cfg: &HConfig, accelerate: bool) -> Result<f64> {
    if spec.m == 0 {
        return Ok(0.0);
    }
    let fs = factors(spec);
    let ln_x = x.ln();
    let poles = Poles {
        starts: spec.lower[..spec.m].to_vec(),
        next: vec![0; spec.m],
        tol: cfg.collision_tol,
    };
    let mut sum = 0.0;
    let mut max_sum: f64 = 0.0;
    let mut max_term: f64 = 0.0;
    let mut quiet = 0;
    let mut partial = Vec::new();
    for (count, s) in poles.enumerate() {
        if count >= cfg.max_terms {
            break;
        }
        let term = match residue(&fs, s, ln_x, cfg.collision_tol)? {
            Some((ln_mag, sign)) => sign * ln_mag.exp(),
            None => 0.0,
        };
        if !term.is_finite() {
            return Err(Error::NonConvergent(format!("residue overflow at s = {s}")));
        }
        sum += term;
        if accelerate && term != 0.0 {
            partial.push(sum);
        }
        max_sum = max_sum.max(sum.abs());
        max_term = max_term.max(term.abs());
        if term.abs() <= cfg.tol * max_sum {
            quiet += 1;
            if quiet >= cfg.run {
                return check_rounding(sum, max_term, cfg);
            }
        } else {
            quiet = 0;
        }
        if accelerate && term != 0.0 && partial.len() >= 24 && partial.len() % 8 == 0 {
            if let Some((v, err)) = wynn_epsilon(&partial[partial.len().saturating_sub(40)..]) {
                if err <= cfg.accuracy * v.abs().max(1e-300) {
                    return check_rounding(v, max_term, cfg);
                }
            }
        }
    }
    Err(Error::NonConvergent(format!(
        "residue series not converged after {} terms at x = {x}",
        cfg.max_terms
    )))
}

fn check_rounding(sum: f64, max_term: f64, cfg: &HConfig) -> Result<f64> {
    let err = max_term * f64::EPSILON * 16.0;
    if err > cfg.accuracy * sum.abs().max(1.0) && err > cfg.accuracy.powf(1.2) {
        return Err(Error::NonConvergent(format!(
            "residue series loses accuracy to cancellation (rounding {err:.2e}, value {sum:.3e})"
        )));
    }
    Ok(sum)
}

/// `H(x)` with explicit controls.
pub fn h_eval_with(spec: &HFunctionSpec, x: f64, cfg: &HConfig) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("x > 0 required, got {x}")));
    }
    let mu = spec.mu();
    if mu > 1e-12 {
        return ascending_series(spec, x, cfg, false);
    }
    if mu < -1e-12 {
        return ascending_series(&spec.inverted(), 1.0 / x, cfg, false);
    }
    // μ = 0: pick the side of the convergence radius
    let r = spec.radius();
    let near = (x / r).ln().abs() < 0.7;
    if x < r {
        ascending_series(spec, x, cfg, near)
    } else {
        ascending_series(&spec.inverted(), 1.0 / x, cfg, near)
    }
}

/// `H(x)` with the default controls.
pub fn h_eval(spec: &HFunctionSpec, x: f64) -> Result<f64> {
    h_eval_with(spec, x, &HConfig::default())
}

/// Result of the scaling identity: `prefactor · H_spec(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledH {
    pub spec: HFunctionSpec,
    pub prefactor: f64,
}

impl ScaledH {
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.prefactor * h_eval(&self.spec, x)?)
    }
}

/// `H[x^δ | (a, A); (b, B)] = (1/δ) H[x | (a, A/δ); (b, B/δ)]`.
pub fn h_scale(spec: &HFunctionSpec, delta: f64) -> Result<ScaledH> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::invalid(format!("delta > 0 required, got {delta}")));
    }
    let div = |v: &[(f64, f64)]| v.iter().map(|&(c, w)| (c, w / delta)).collect::<Vec<_>>();
    Ok(ScaledH {
        spec: HFunctionSpec::new(spec.m, spec.n, div(&spec.upper), div(&spec.lower))?,
        prefactor: 1.0 / delta,
    })
}
