//! Oracle suites behind `fracdiff verify`: each check reports the observed
//! residual next to its tolerance.

use crate::error::{Error, Result};
use crate::greens::{
    default_grid, gaussian_density, green_hfunction_spec, green_pointwise, green_spectral, levy_density,
    neutral_density, time_fractional_density,
};
use crate::grid::{SpatialGrid, Spectral};
use crate::hfunction::{h_eval, h_scale, verify_cosine_transform, HFunctionSpec};
use crate::mittag_leffler::{verify_laplace_pair, MittagLeffler, MlParams};
use crate::quadrature::adaptive_gk;
use crate::riesz_feller::{
    apply_riesz_feller_quadrature, apply_riesz_feller_spectral, caputo_derivative_quadrature, symbol,
    RieszFellerParams, TemporalParams, TimeSamples,
};
use crate::solver::{self, residual_check, DiffusionProblem, Source};
use crate::special::{erfc, gamma};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ml,
    Hfun,
    Symbol,
    Greens,
    Solver,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ml" => Suite::Ml,
            "hfun" => Suite::Hfun,
            "symbol" => Suite::Symbol,
            "greens" => Suite::Greens,
            "solver" => Suite::Solver,
            "all" => Suite::All,
            _ => {
                return Err(Error::Parse(format!(
                    "unknown suite '{s}' (expected ml, hfun, symbol, greens, solver or all)"
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Ml => "ml",
            Suite::Hfun => "hfun",
            Suite::Symbol => "symbol",
            Suite::Greens => "greens",
            Suite::Solver => "solver",
            Suite::All => "all",
        })
    }
}

/// Outcome of one check. `observed` is NaN when the computation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Multiplies every tolerance.
    pub tolerance_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            tolerance_scale: 1.0,
        }
    }
}

struct Runner {
    suite: Suite,
    scale: f64,
    checks: Vec<Check>,
}

impl Runner {
    fn check(&mut self, name: impl Into<String>, tolerance: f64, f: impl FnOnce() -> Result<f64>) {
        let tolerance = tolerance * self.scale;
        let (observed, error) = match f() {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            observed,
            tolerance,
            passed: observed <= tolerance,
            error,
        });
    }
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

fn rf(a: f64, th: f64) -> Result<RieszFellerParams> {
    RieszFellerParams::new(a, th)
}

fn tp(b: f64, eta: f64) -> Result<TemporalParams> {
    TemporalParams::new(b, eta)
}

pub fn run(suite: Suite, options: &VerifyOptions) -> Vec<Check> {
    let suites = match suite {
        Suite::All => vec![Suite::Ml, Suite::Hfun, Suite::Symbol, Suite::Greens, Suite::Solver],
        s => vec![s],
    };
    let mut out = Vec::new();
    for s in suites {
        let mut r = Runner {
            suite: s,
            scale: options.tolerance_scale,
            checks: Vec::new(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        match s {
            Suite::Ml => ml(&mut r),
            Suite::Hfun => hfun(&mut r, &mut rng),
            Suite::Symbol => symbol_suite(&mut r),
            Suite::Greens => greens(&mut r, &mut rng),
            Suite::Solver => solver_suite(&mut r, &mut rng),
            Suite::All => unreachable!(),
        }
        out.extend(r.checks);
    }
    out
}

fn ml_fn(a: f64, b: f64) -> Result<MittagLeffler> {
    Ok(MittagLeffler::with_defaults(MlParams::new(a, b)?))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn ml(r: &mut Runner) {
    let pts = |lo: f64, hi: f64| (0..50).map(move |i| lo + (hi - lo) * i as f64 / 49.0);
    r.check("E_{1,1}(x) = exp(x), x in [-10, 10]", 1e-10, || {
        let e = ml_fn(1.0, 1.0)?;
        max_of(pts(-10.0, 10.0).map(|x| Ok(rel(e.eval_real(x)?, x.exp()))))
    });
    r.check("E_{2,1}(-x^2) = cos(x), x in [0, 10]", 1e-10, || {
        let e = ml_fn(2.0, 1.0)?;
        max_of(pts(0.0, 10.0).map(|x| Ok(rel(e.eval_real(-x * x)?, x.cos()))))
    });
    r.check("E_{1/2,1}(-x) = exp(x^2) erfc(x), x in [0, 5]", 1e-10, || {
        let e = ml_fn(0.5, 1.0)?;
        max_of(pts(0.0, 5.0).map(|x| Ok(rel(e.eval_real(-x)?, (x * x).exp() * erfc(x)))))
    });
    r.check("E_{1,1}(z) = exp(z) on complex z", 1e-10, || {
        let e = ml_fn(1.0, 1.0)?;
        max_of((0..50).map(|i| {
            let z = Complex64::from_polar(0.2 * (i + 1) as f64, 0.37 * i as f64);
            Ok((e.eval(z)? - z.exp()).norm() / z.exp().norm().max(1.0))
        }))
    });
    for &alpha in &[0.5, 0.9, 1.0, 1.5, 2.0] {
        for beta in [1.0, 2.0, alpha] {
            if alpha - beta <= -1.0 {
                continue;
            }
            r.check(format!("Laplace pair alpha={alpha} beta={beta}"), 1e-8, || {
                let mut worst = 0.0f64;
                for &a in &[0.5, 1.0, 4.0] {
                    for &t in &[0.1, 1.0, 3.0] {
                        worst = worst.max(verify_laplace_pair(alpha, beta, a, t)?);
                    }
                }
                Ok(worst)
            });
        }
    }
}

/// Families with well-conditioned residue series, as `(spec, δ)`.
pub fn scaling_corpus(rng: &mut impl Rng, n: usize) -> Result<Vec<(HFunctionSpec, f64, f64)>> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = rng.gen_range(0.5..3.0);
        let bs = rng.gen_range(0.75..2.0);
        let spec = match i % 3 {
            0 => HFunctionSpec::new(1, 0, vec![], vec![(rng.gen_range(-0.5..1.5), bs * d)])?,
            1 => {
                let a = rng.gen_range(0.2..2.0);
                HFunctionSpec::new(1, 1, vec![(1.0 - a, bs * d)], vec![(0.0, bs * d)])?
            }
            _ => {
                let (a, b) = (rng.gen_range(0.0..1.5), rng.gen_range(0.5..1.5));
                let ratio = rng.gen_range(0.1..0.5);
                HFunctionSpec::new(1, 0, vec![(a, ratio * bs * d)], vec![(b, bs * d)])?
            }
        };
        out.push((spec, d, rng.gen_range(0.1..5.0)));
    }
    Ok(out)
}

/// `(spec, ρ, μ, a, k)` cases of the cosine-transform identity built on `e^{-t}`.
pub fn cosine_corpus() -> Result<Vec<(HFunctionSpec, f64, f64, f64, f64)>> {
    let exp = HFunctionSpec::new(1, 0, vec![], vec![(0.0, 1.0)])?;
    let mut out = Vec::new();
    for &k in &[0.5, 1.0, 2.0] {
        out.push((exp.clone(), 1.0, 1.0, 1.0, k));
    }
    for &(a, k) in &[(1.0, 1.0), (0.5, 2.0), (2.0, 0.7)] {
        out.push((exp.clone(), 1.0, 2.0, a, k));
    }
    Ok(out)
}

fn hfun(r: &mut Runner, rng: &mut ChaCha8Rng) {
    r.check("scaling identity on 60 random specs", 1e-8, || {
        max_of(scaling_corpus(rng, 60)?.into_iter().map(|(s, d, x)| {
            let left = h_eval(&s, x.powf(d))?;
            let right = h_scale(&s, d)?.eval(x)?;
            Ok((left - right).abs() / left.abs().max(1.0))
        }))
    });
    r.check("Green spec at alpha=2, beta=1 vs Gaussian, x in [0.1, 4]", 1e-8, || {
        let spec = green_hfunction_spec(rf(2.0, 0.0)?, tp(1.0, 1.0)?, 1.0)?;
        max_of((0..40).map(|i| {
            let x = 0.1 + 3.9 * i as f64 / 39.0;
            Ok((h_eval(&spec, x)? / (2.0 * x) - gaussian_density(1.0, 1.0, x)?).abs())
        }))
    });
    for &(a, th) in &[(0.75, 0.25), (1.5, 0.5), (1.0, 0.0)] {
        r.check(format!("Green spec at alpha=beta={a}, theta={th} vs neutral formula"), 1e-8, || {
            let spec = green_hfunction_spec(rf(a, th)?, tp(a, 1.0)?, 1.0)?;
            max_of((0..40).map(|i| {
                let x = 0.1 + 3.9 * i as f64 / 39.0;
                Ok((h_eval(&spec, x)? / (a * x) - neutral_density(rf(a, th)?, x)?).abs())
            }))
        });
    }
    r.check("cosine-transform identity on the elementary corpus", 1e-4, || {
        max_of(cosine_corpus()?.into_iter().map(|(s, rho, mu, a, k)| verify_cosine_transform(&s, rho, mu, a, k)))
    });
}

fn symbol_suite(r: &mut Runner) {
    r.check("theta = 0 symbol is |k|^alpha", 1e-14, || {
        max_of([0.3, 1.0, 1.7].iter().flat_map(|&a| {
            [-3.0, -0.5, 0.2, 4.0].map(move |k: f64| {
                let s = symbol(rf(a, 0.0)?, k);
                Ok((s - Complex64::new(k.abs().powf(a), 0.0)).norm() / k.abs().powf(a))
            })
        }))
    });
    r.check("symbol is conjugate-symmetric", 1e-15, || {
        let p = rf(1.3, 0.4)?;
        max_of([0.1, 1.0, 7.0].map(|k| Ok((symbol(p, -k) - symbol(p, k).conj()).norm() / symbol(p, k).norm())))
    });
    let g = SpatialGrid::symmetric(4096.0, 1 << 15);
    for &(a, th) in &[(0.5, 0.0), (1.0, 0.0), (1.5, 0.3), (0.8, 0.4)] {
        r.check(format!("integral vs spectral form, alpha={a}, theta={th}"), 1e-5, || {
            let grid = g.clone()?;
            let p = rf(a, th)?;
            let sp = Spectral::new(grid);
            let gauss = |x: f64| (-x * x).exp();
            max_of([-0.7, 0.0, 1.0].map(|x| {
                let vals: Vec<f64> = grid.points().iter().map(|&y| gauss(y + x)).collect();
                let spectral = apply_riesz_feller_spectral(&sp, &vals, p)?[grid.nearest(0.0)];
                Ok((apply_riesz_feller_quadrature(&gauss, p, x)? - spectral).abs())
            }))
        });
    }
    r.check("Caputo quadrature of monomials", 1e-5, || {
        let dt = 1e-3;
        max_of([(2.0, 0.3), (2.0, 0.8), (3.0, 1.4), (2.5, 1.7)].map(|(p, a)| {
            let v: Vec<f64> = (0..1001).map(|j| (j as f64 * dt).powf(p)).collect();
            let d = caputo_derivative_quadrature(&TimeSamples { dt, values: &v }, a, 1.0)?;
            let exact = gamma(p + 1.0) / gamma(p + 1.0 - a);
            Ok((d - exact).abs() / exact)
        }))
    });
}

/// `(1/π) ∫_0^∞ e^{-ck} cos(kx) dk` by panelwise adaptive quadrature.
pub fn cauchy_oracle(c: f64, x: f64) -> Result<f64> {
    let end = 40.0 / c;
    let width = if x == 0.0 { end } else { (PI / x.abs()).min(1.0 / c) };
    let mut sum = 0.0;
    let mut a = 0.0;
    while a < end {
        let b = (a + width).min(end);
        sum += adaptive_gk(|k| (-c * k).exp() * (k * x).cos(), a, b, 1e-14, 200)?;
        a = b;
    }
    Ok(sum / PI)
}

/// Random admissible `(α, θ, β)` with `β ≤ 1`.
pub fn random_triple(rng: &mut impl Rng) -> (f64, f64, f64) {
    let a: f64 = rng.gen_range(0.3..2.0);
    let th = rng.gen_range(-1.0..1.0) * a.min(2.0 - a);
    (a, th, rng.gen_range(0.3..1.0))
}

/// Mass error, minimum, θ = 0 asymmetry and similarity error of the
/// spectral fundamental solution.
pub fn law_properties(a: f64, th: f64, b: f64, t: f64) -> Result<[f64; 4]> {
    let (r, q) = (rf(a, th)?, tp(b, 1.0)?);
    let p = green_spectral(r, q, 1.0, 1.0, default_grid(r, q, 1.0)?)?;
    let mass = (p.mass() - 1.0).abs();
    let min = p.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let r0 = rf(a, 0.0)?;
    let sym = green_spectral(r0, q, 1.0, 1.0, default_grid(r0, q, 1.0)?)?;
    let v = sym.values();
    let n = v.len();
    let asym = (1..n / 2).map(|j| (v[n / 2 + j] - v[n / 2 - j]).abs()).fold(0.0, f64::max);
    let pt = green_spectral(r, q, 1.0, t, default_grid(r, q, t)?)?;
    let s = t.powf(b / a);
    let sim = pt
        .values()
        .iter()
        .zip(p.values())
        .map(|(u, v)| (u * s - v).abs() / v.abs().max(1.0))
        .fold(0.0, f64::max);
    Ok([mass, min, asym, sim])
}

fn greens(r: &mut Runner, rng: &mut ChaCha8Rng) {
    r.check("spectral vs Gaussian closed form", 1e-8, || {
        let (a, b) = (rf(2.0, 0.0)?, tp(1.0, 1.0)?);
        let p = green_spectral(a, b, 1.0, 1.0, default_grid(a, b, 1.0)?)?;
        max_of(p.grid().points().into_iter().zip(p.values()).map(|(x, v)| Ok((v - gaussian_density(1.0, 1.0, x)?).abs())))
    });
    r.check("pointwise vs Cauchy oscillatory-quadrature oracle, |x| <= 10", 1e-6, || {
        let (a, b) = (rf(1.0, 0.0)?, tp(1.0, 1.0)?);
        max_of((0..41).map(|i| {
            let x = -10.0 + 0.5 * i as f64;
            Ok((green_pointwise(a, b, 1.0, 1.0, x)? - cauchy_oracle(1.0, x)?).abs())
        }))
    });
    for &(a, th) in &[(0.75, 0.25), (1.5, 0.5), (1.0, 0.0)] {
        r.check(format!("pointwise vs neutral formula, alpha=beta={a}, theta={th}"), 1e-6, || {
            max_of((0..50).flat_map(|i| {
                let x = 0.1 + 4.9 * (i as f64 + 0.5) / 50.0;
                [x, -x].map(|x| {
                    let exact = neutral_density(rf(a, th * x.signum())?, x.abs())?;
                    Ok((green_pointwise(rf(a, th)?, tp(a, 1.0)?, 1.0, 1.0, x)? - exact).abs())
                })
            }))
        });
    }
    for &(a, th) in &[(0.5, 0.2), (1.5, 0.0), (1.3, -0.5)] {
        r.check(format!("pointwise vs stable density, alpha={a}, theta={th}"), 1e-6, || {
            max_of([-3.0, -0.7, 0.4, 1.0, 2.5].map(|x| {
                Ok((green_pointwise(rf(a, th)?, tp(1.0, 1.0)?, 1.0, 1.0, x)? - levy_density(rf(a, th)?, 1.0, 1.0, x)?).abs())
            }))
        });
    }
    r.check("pointwise vs time-fractional density, beta=0.5", 1e-6, || {
        max_of([0.2, 1.0, -2.0, 3.5].map(|x| {
            Ok((green_pointwise(rf(2.0, 0.0)?, tp(0.5, 1.0)?, 1.0, 1.0, x)? - time_fractional_density(0.5, 1.0, 1.0, x)?).abs())
        }))
    });
    let cases: Vec<_> = (0..10).map(|_| (random_triple(rng), rng.gen_range(0.2..5.0))).collect();
    let props = cases.iter().map(|&((a, th, b), t)| law_properties(a, th, b, t)).collect::<Vec<_>>();
    let pick = |i: usize| {
        max_of(props.iter().map(|p| p.clone().map(|v| if i == 1 { (-v[1]).max(0.0) } else { v[i] })))
    };
    r.check("mass of 10 random fundamental solutions", 1e-6, || pick(0));
    r.check("negativity of 10 random fundamental solutions", 1e-9, || pick(1));
    r.check("theta = 0 asymmetry of 10 random fundamental solutions", 1e-10, || pick(2));
    r.check("similarity scaling of 10 random fundamental solutions", 1e-6, || pick(3));
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// A random problem with Gaussian `f` and, half of the time, a source that
/// is a box (`box_source`) or a Gaussian bump.
pub fn random_problem(
    rng: &mut impl Rng,
    grid: SpatialGrid,
    times: Vec<f64>,
    box_source: bool,
) -> Result<DiffusionProblem> {
    let (a, th, b) = random_triple(rng);
    let a = a.max(0.5);
    let th = th.clamp(-a.min(2.0 - a), a.min(2.0 - a));
    let f = solver::gaussian(&grid, rng.gen_range(-2.0..2.0), rng.gen_range(0.5..1.5));
    let phi = if rng.gen_bool(0.5) {
        let (c, w, m) = (rng.gen_range(-2.0..2.0), rng.gen_range(0.5..1.5), rng.gen_range(0.1..1.0));
        Some(Source::Stationary(if box_source {
            solver::box_profile(&grid, c - w, c + w, m)
        } else {
            solver::gaussian(&grid, c, w).into_iter().map(|v| m * v).collect()
        }))
    } else {
        None
    };
    DiffusionProblem::new(rf(a, th)?, tp(b, 1.0)?, grid, f, None, phi, times)
}

fn solver_suite(r: &mut Runner, rng: &mut ChaCha8Rng) {
    let big = SpatialGrid::symmetric(40.0, 4096);
    r.check("delta data, alpha=2, beta=1: heat kernel", 1e-6, || {
        let g = big.clone()?;
        let p = DiffusionProblem::new(rf(2.0, 0.0)?, tp(1.0, 1.0)?, g, solver::delta(&g), None, None, vec![1.0])?;
        let field = solver::solve(&p)?;
        let exact = g.points().iter().map(|&x| gaussian_density(1.0, 1.0, x)).collect::<Result<Vec<_>>>()?;
        Ok(sup(&field.values()[0], &exact))
    });
    r.check("transform vs convolution form on 5 random problems", 1e-5, || {
        let g = SpatialGrid::symmetric(20.0, 1024)?;
        max_of((0..5).map(|_| {
            let p = random_problem(rng, g, vec![0.5, 1.0], true)?;
            let (u, v) = (solver::solve(&p)?, solver::solve_convolution(&p)?);
            Ok(u.values().iter().zip(v.values()).map(|(a, b)| sup(a, b)).fold(0.0, f64::max))
        }))
    });
    let small = SpatialGrid::symmetric(20.0, 512);
    let times: Vec<f64> = (1..=64).map(|j| j as f64 / 64.0).collect();
    r.check("equation residual, heat equation", 1e-4, || {
        let g = small.clone()?;
        let p = DiffusionProblem::new(rf(2.0, 0.0)?, tp(1.0, 1.0)?, g, solver::gaussian(&g, 0.0, 1.0), None, None, times.clone())?;
        residual_check(&solver::solve(&p)?, &p)
    });
    r.check("equation residual, 5 random fractional problems", 1e-2, || {
        let g = small.clone()?;
        max_of((0..5).map(|_| {
            let p = random_problem(rng, g, times.clone(), false)?;
            residual_check(&solver::solve(&p)?, &p)
        }))
    });
    r.check("mass balance with a constant point source", 1e-4, || {
        let g = big.clone()?;
        let times: Vec<f64> = (1..=20).map(|j| 0.1 * j as f64).collect();
        let zero = vec![0.0; g.num_points()];
        let p = DiffusionProblem::new(
            rf(2.0, 0.0)?,
            tp(1.0, 1.0)?,
            g,
            zero,
            None,
            Some(Source::Stationary(solver::delta(&g))),
            times.clone(),
        )?;
        let field = solver::solve(&p)?;
        Ok(times.iter().zip(field.masses()).map(|(t, m)| (m - t).abs()).fold(0.0, f64::max))
    });
}
