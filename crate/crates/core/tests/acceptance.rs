//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release --test acceptance`.

use fracdiff::greens::{gaussian_density, green_hfunction_spec, green_pointwise, neutral_density};
use fracdiff::grid::{SpatialGrid, Spectral};
use fracdiff::hfunction::{h_eval, h_scale, verify_cosine_transform};
use fracdiff::mittag_leffler::{verify_laplace_pair, MittagLeffler, MlParams};
use fracdiff::riesz_feller::{apply_riesz_feller_quadrature, apply_riesz_feller_spectral, RieszFellerParams, TemporalParams};
use fracdiff::solver::{self, residual_check, DiffusionProblem, Source};
use fracdiff::special::erfc;
use fracdiff::verify::{cauchy_oracle, cosine_corpus, law_properties, random_problem, random_triple, scaling_corpus};
use fracdiff::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::time::{Duration, Instant};

fn rf(a: f64, th: f64) -> RieszFellerParams {
    RieszFellerParams::new(a, th).unwrap()
}

fn tp(b: f64) -> TemporalParams {
    TemporalParams::new(b, 1.0).unwrap()
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

struct Outcome {
    /// (quantity, observed, tolerance)
    measures: Vec<(String, f64, f64)>,
    budget: Option<Duration>,
    elapsed: Duration,
    error: Option<String>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.error.is_none()
            && self.measures.iter().all(|(_, o, t)| o <= t)
            && self.budget.map_or(true, |b| self.elapsed <= b)
    }
}

fn criterion(
    id: usize,
    title: &str,
    budget: Option<Duration>,
    body: impl FnOnce() -> Result<Vec<(String, f64, f64)>>,
) -> bool {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let outcome = match result {
        Ok(measures) => Outcome { measures, budget, elapsed, error: None },
        Err(e) => Outcome { measures: vec![], budget, elapsed, error: Some(e.to_string()) },
    };
    let passed = outcome.passed();
    let mut detail: Vec<String> = outcome
        .measures
        .iter()
        .map(|(q, o, t)| format!("{q} {o:.2e} <= {t:.0e}"))
        .collect();
    match budget {
        Some(b) => detail.push(format!("{:.2} s <= {} s", elapsed.as_secs_f64(), b.as_secs())),
        None => detail.push(format!("{:.2} s", elapsed.as_secs_f64())),
    }
    if let Some(e) = &outcome.error {
        detail.push(format!("error: {e}"));
    }
    // written past the test harness capture so the table shows in every run
    let line = format!(
        "criterion {id:>2} {}: {title} [{}]\n",
        if passed { "PASS" } else { "FAIL" },
        detail.join("; ")
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    passed
}

fn gaussian_reduction() -> Result<Vec<(String, f64, f64)>> {
    let grid = SpatialGrid::symmetric(40.0, 4096)?;
    let p = DiffusionProblem::new(rf(2.0, 0.0), tp(1.0), grid, solver::delta(&grid), None, None, vec![1.0])?;
    let field = solver::solve(&p)?;
    let exact = grid.points().iter().map(|&x| gaussian_density(1.0, 1.0, x)).collect::<Result<Vec<_>>>()?;
    Ok(vec![("max deviation".into(), sup(&field.values()[0], &exact), 1e-6)])
}

fn cauchy_reduction() -> Result<Vec<(String, f64, f64)>> {
    let mut worst = 0.0f64;
    for i in 0..=200 {
        let x = -10.0 + 0.1 * i as f64;
        worst = worst.max((green_pointwise(rf(1.0, 0.0), tp(1.0), 1.0, 1.0, x)? - cauchy_oracle(1.0, x)?).abs());
    }
    Ok(vec![("max deviation".into(), worst, 1e-6)])
}

fn neutral() -> Result<Vec<(String, f64, f64)>> {
    let mut out = Vec::new();
    for &(a, th) in &[(0.75, 0.25), (1.5, 0.5), (1.0, 0.0)] {
        let mut worst = 0.0f64;
        // midpoints of 100 cells in [0.1, 5] on both sides
        for i in 0..100 {
            let x = 0.1 + 4.9 * (i as f64 + 0.5) / 100.0;
            for x in [x, -x] {
                let exact = neutral_density(rf(a, th * x.signum()), x.abs())?;
                worst = worst.max((green_pointwise(rf(a, th), tp(a), 1.0, 1.0, x)? - exact).abs());
            }
        }
        out.push((format!("({a}, {th})"), worst, 1e-6));
    }
    Ok(out)
}

fn mittag_leffler() -> Result<Vec<(String, f64, f64)>> {
    let ml = |a, b| MlParams::new(a, b).map(MittagLeffler::with_defaults);
    let pts = |lo: f64, hi: f64| (0..50).map(move |i| lo + (hi - lo) * i as f64 / 49.0);
    let mut out = Vec::new();
    let e = ml(1.0, 1.0)?;
    let mut w = 0.0f64;
    for x in pts(-10.0, 10.0) {
        w = w.max(rel(e.eval_real(x)?, x.exp()));
    }
    for i in 0..50 {
        let z = Complex64::from_polar(0.2 * (i + 1) as f64, 0.37 * i as f64);
        w = w.max((e.eval(z)? - z.exp()).norm() / z.exp().norm().max(1.0));
    }
    out.push(("E_{1,1} = exp".into(), w, 1e-10));
    let e = ml(2.0, 1.0)?;
    let mut w = 0.0f64;
    for x in pts(0.0, 10.0) {
        w = w.max(rel(e.eval_real(-x * x)?, x.cos()));
    }
    out.push(("E_{2,1}(-z^2) = cos".into(), w, 1e-10));
    let e = ml(0.5, 1.0)?;
    let mut w = 0.0f64;
    for x in pts(0.0, 5.0) {
        w = w.max(rel(e.eval_real(-x)?, (x * x).exp() * erfc(x)));
    }
    out.push(("E_{1/2,1}(-x) = exp(x^2) erfc(x)".into(), w, 1e-10));
    let mut w = 0.0f64;
    for &alpha in &[0.5, 0.9, 1.0, 1.5, 2.0] {
        for beta in [1.0, 2.0, alpha] {
            if alpha - beta <= -1.0 {
                continue;
            }
            for &a in &[0.5, 1.0, 4.0] {
                for &t in &[0.1, 1.0, 3.0] {
                    w = w.max(verify_laplace_pair(alpha, beta, a, t)?);
                }
            }
        }
    }
    out.push(("Laplace pairs".into(), w, 1e-8));
    Ok(out)
}

fn hfunction() -> Result<Vec<(String, f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut scaling = 0.0f64;
    for (s, d, x) in scaling_corpus(&mut rng, 100)? {
        let left = h_eval(&s, x.powf(d))?;
        scaling = scaling.max((left - h_scale(&s, d)?.eval(x)?).abs() / left.abs().max(1.0));
    }
    let spec = green_hfunction_spec(rf(2.0, 0.0), tp(1.0), 1.0)?;
    let mut gauss = 0.0f64;
    for i in 0..50 {
        let x = 0.1 + 4.9 * i as f64 / 49.0;
        gauss = gauss.max((h_eval(&spec, x)? / (2.0 * x) - gaussian_density(1.0, 1.0, x)?).abs());
    }
    let mut cosine = 0.0f64;
    for (s, rho, mu, a, k) in cosine_corpus()? {
        cosine = cosine.max(verify_cosine_transform(&s, rho, mu, a, k)?);
    }
    Ok(vec![
        ("scaling".into(), scaling, 1e-8),
        ("Gaussian spec".into(), gauss, 1e-8),
        ("cosine transform".into(), cosine, 1e-4),
    ])
}

fn probability_law() -> Result<Vec<(String, f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut w = [0.0f64; 4];
    for _ in 0..30 {
        let (a, th, b) = random_triple(&mut rng);
        let t = rng.gen_range(0.2..5.0);
        let p = law_properties(a, th, b, t)?;
        w[0] = w[0].max(p[0]);
        w[1] = w[1].max(-p[1]);
        w[2] = w[2].max(p[2]);
        w[3] = w[3].max(p[3]);
    }
    Ok(vec![
        ("mass error".into(), w[0], 1e-6),
        ("negativity".into(), w[1], 1e-9),
        ("theta=0 asymmetry".into(), w[2], 1e-10),
        ("similarity".into(), w[3], 1e-6),
    ])
}

fn consistency() -> Result<Vec<(String, f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let grid = SpatialGrid::symmetric(20.0, 1024)?;
    let mut w = 0.0f64;
    for _ in 0..10 {
        let p = random_problem(&mut rng, grid, vec![0.25, 0.5, 1.0], true)?;
        let (u, v) = (solver::solve(&p)?, solver::solve_convolution(&p)?);
        for (a, b) in u.values().iter().zip(v.values()) {
            w = w.max(sup(a, b));
        }
    }
    Ok(vec![("sup difference".into(), w, 1e-5)])
}

fn residual() -> Result<Vec<(String, f64, f64)>> {
    let grid = SpatialGrid::symmetric(40.0, 4096)?;
    let times: Vec<f64> = (1..=64).map(|j| j as f64 / 64.0).collect();
    let p = DiffusionProblem::new(rf(2.0, 0.0), tp(1.0), grid, solver::gaussian(&grid, 0.0, 1.0), None, None, times.clone())?;
    let classical = residual_check(&solver::solve(&p)?, &p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut w = 0.0f64;
    for _ in 0..5 {
        let p = random_problem(&mut rng, grid, times.clone(), false)?;
        w = w.max(residual_check(&solver::solve(&p)?, &p)?);
    }
    Ok(vec![("classical".into(), classical, 1e-4), ("5 fractional".into(), w, 1e-2)])
}

fn mass_balance() -> Result<Vec<(String, f64, f64)>> {
    let grid = SpatialGrid::symmetric(40.0, 4096)?;
    let times: Vec<f64> = (1..=40).map(|j| 0.05 * j as f64).collect();
    let p = DiffusionProblem::new(
        rf(2.0, 0.0),
        tp(1.0),
        grid,
        vec![0.0; grid.num_points()],
        None,
        Some(Source::Stationary(solver::delta(&grid))),
        times.clone(),
    )?;
    let field = solver::solve(&p)?;
    let w = times.iter().zip(field.masses()).map(|(t, m)| (m - t).abs()).fold(0.0, f64::max);
    Ok(vec![("|mass - t|".into(), w, 1e-4)])
}

fn riesz_feller_forms() -> Result<Vec<(String, f64, f64)>> {
    let grid = SpatialGrid::symmetric(4096.0, 1 << 15)?;
    let sp = Spectral::new(grid);
    let gauss = |x: f64| (-x * x).exp();
    let mut out = Vec::new();
    for &(a, th) in &[(0.5, 0.0), (1.0, 0.0), (1.5, 0.3), (0.8, 0.4)] {
        let mut w = 0.0f64;
        for x in [-1.5, -0.7, 0.0, 0.4, 1.0, 2.0] {
            // x sits on the origin node of the shifted samples
            let vals: Vec<f64> = grid.points().iter().map(|&y| gauss(y + x)).collect();
            let spectral = apply_riesz_feller_spectral(&sp, &vals, rf(a, th))?[grid.nearest(0.0)];
            w = w.max((apply_riesz_feller_quadrature(&gauss, rf(a, th), x)? - spectral).abs());
        }
        out.push((format!("({a}, {th})"), w, 1e-5));
    }
    Ok(out)
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "delta data reproduce the Gaussian", Some(secs(1)), gaussian_reduction),
        criterion(2, "Cauchy density vs oscillatory-quadrature oracle", Some(secs(5)), cauchy_reduction),
        criterion(3, "neutral diffusion vs elementary formula", None, neutral),
        criterion(4, "Mittag-Leffler identities and Laplace pairs", None, mittag_leffler),
        criterion(5, "H-function scaling, Gaussian spec, cosine transform", None, hfunction),
        criterion(6, "probability-law properties of 30 random laws", Some(secs(60)), probability_law),
        criterion(7, "transform vs convolution on 10 random problems", None, consistency),
        criterion(8, "equation residual", None, residual),
        criterion(9, "mass balance with a point source", None, mass_balance),
        criterion(10, "Riesz-Feller integral vs spectral form", None, riesz_feller_forms),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
