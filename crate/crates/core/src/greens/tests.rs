use super::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn rf(a: f64, th: f64) -> RieszFellerParams {
    RieszFellerParams::new(a, th).unwrap()
}
fn tp(b: f64, eta: f64) -> TemporalParams {
    TemporalParams::new(b, eta).unwrap()
}

fn max_dev(p: &DensityProfile, f: impl Fn(f64) -> f64, keep: impl Fn(f64) -> bool) -> f64 {
    p.grid()
        .points()
        .into_iter()
        .zip(p.values())
        .filter(|(x, _)| keep(*x))
        .map(|(x, v)| (v - f(x)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn spectral_gaussian() {
    let g = default_grid(rf(2.0, 0.0), tp(1.0, 1.0), 1.0).unwrap();
    let p = green_spectral(rf(2.0, 0.0), tp(1.0, 1.0), 1.0, 1.0, g).unwrap();
    assert_eq!(p.sampling(), Sampling::Point);
    let d = max_dev(&p, |x| gaussian_density(1.0, 1.0, x).unwrap(), |_| true);
    assert!(d < 1e-8, "{d}");
    assert!((p.mass() - 1.0).abs() < 1e-12);
}

#[test]
fn spectral_cauchy_is_the_periodized_density() {
    let g = SpatialGrid::symmetric(40.0, 4096).unwrap();
    let p = green_spectral(rf(1.0, 0.0), tp(1.0, 1.0), 1.0, 1.0, g).unwrap();
    // Σ_n 1/(π(1+(x+nL)²)) = sinh(2π/L) / (L (cosh(2π/L) - cos(2πx/L)))
    let l = 80.0;
    let periodic = |x: f64| {
        let a = 2.0 * PI / l;
        a.sinh() / (l * (a.cosh() - (a * x).cos()))
    };
    let d = max_dev(&p, periodic, |_| true);
    assert!(d < 1e-10, "{d}");
    let origin = p.values()[g.nearest(0.0)];
    assert!((origin - 1.0 / PI).abs() < 2e-4);
}

#[test]
fn pointwise_cauchy() {
    let v = green_pointwise(rf(1.0, 0.0), tp(1.0, 1.0), 1.0, 1.0, 0.0).unwrap();
    assert!((v - 1.0 / PI).abs() < 1e-10);
    for &x in &[0.3, -2.0, 7.5] {
        let v = green_pointwise(rf(1.0, 0.0), tp(1.0, 1.0), 1.0, 1.0, x).unwrap();
        assert!((v - 1.0 / (PI * (1.0 + x * x))).abs() < 1e-10);
    }
}

#[test]
fn pointwise_matches_neutral() {
    for &(a, th) in &[(0.75, 0.25), (1.5, 0.5), (1.0, 0.0), (0.5, -0.3)] {
        for i in 0..25 {
            let x = 0.1 + 4.9 * i as f64 / 24.0;
            for s in [1.0, -1.0] {
                let exact = neutral_density(rf(a, s * th), x).unwrap();
                let v = green_pointwise(rf(a, th), tp(a, 1.0), 1.0, 1.0, s * x).unwrap();
                assert!((v - exact).abs() < 1e-8, "({a},{th}) x={}: {v} vs {exact}", s * x);
            }
        }
    }
}

#[test]
fn neutral_examples() {
    let v = neutral_density(rf(1.0, 0.0), 1.0).unwrap();
    assert!((v - 0.1591549431).abs() < 1e-10);
    let v = neutral_density(rf(1.0, 0.0), 1e6).unwrap();
    assert!(v <= 1e-12 * 0.32 && v > 0.0);
    // sin(π/2) = 1, cos(π/2) = 0
    let v = neutral_density(rf(1.5, 0.5), 1.0).unwrap();
    assert!((v - 0.5 / PI).abs() < 1e-14, "{v}");
    assert!(neutral_density(rf(2.0, 0.0), 1.0).is_err());
    assert!(neutral_density(rf(1.0, 0.0), -1.0).is_err());
}

#[test]
fn levy_examples() {
    let v = levy_density(rf(1.5, 0.0), 1.0, 1.0, 1.0).unwrap();
    let s = green_pointwise(rf(1.5, 0.0), tp(1.0, 1.0), 1.0, 1.0, 1.0).unwrap();
    assert!((v - s).abs() < 1e-6, "{v} vs {s}");
    let v = levy_density(rf(0.5, -0.5), 1.0, 1.0, -0.5).unwrap();
    assert!(v.abs() < 1e-10);
    for &x in &[0.3, 1.0, 4.0] {
        let l = levy_density(rf(0.5, 0.0), 1.0, 1.0, x).unwrap();
        let r = levy_density(rf(0.5, 0.0), 1.0, 1.0, -x).unwrap();
        assert_eq!(l, r);
    }
    assert!(levy_density(rf(1.0, 0.5), 1.0, 1.0, 1.0).is_err());
}

#[test]
fn levy_matches_pointwise_inversion() {
    for &(a, th) in &[(0.5, 0.2), (0.8, -0.4), (1.3, 0.5), (1.7, -0.2)] {
        for &x in &[-3.0, -0.7, 0.4, 1.0, 2.5] {
            let l = levy_density(rf(a, th), 1.3, 0.8, x).unwrap();
            let s = green_pointwise(rf(a, th), tp(1.0, 1.3), 1.0, 0.8, x).unwrap();
            assert!((l - s).abs() < 1e-8, "({a},{th}) x={x}: {l} vs {s}");
        }
    }
}

#[test]
fn time_fractional_examples() {
    let v = time_fractional_density(1.0, 1.0, 1.0, 1.0).unwrap();
    assert!((v - 0.2196956447).abs() < 1e-10);
    let v = time_fractional_density(1.0, 1.0, 1.0, 0.0).unwrap();
    assert!((v - 0.2820947918).abs() < 1e-10);
    for &x in &[0.2, 1.0, -2.0] {
        let v = time_fractional_density(0.5, 1.0, 1.0, x).unwrap();
        let s = green_pointwise(rf(2.0, 0.0), tp(0.5, 1.0), 1.0, 1.0, x).unwrap();
        assert!((v - s).abs() < 1e-8, "x={x}: {v} vs {s}");
    }
}

#[test]
fn gaussian_examples() {
    assert!((gaussian_density(1.0, 1.0, 0.0).unwrap() - 0.2820947918).abs() < 1e-10);
    assert_eq!(gaussian_density(2.0, 0.5, 0.0).unwrap(), gaussian_density(1.0, 1.0, 0.0).unwrap());
    assert!((gaussian_density(1.0, 1.0, 2.0).unwrap() - 0.1037768744).abs() < 1e-10);
    assert!(gaussian_density(0.0, 1.0, 0.0).is_err());
}

#[test]
fn hfunction_path_matches_pointwise() {
    // α irrational keeps the two pole families of the lower row apart
    let (r, t) = (rf(std::f64::consts::SQRT_2, 0.3), tp(0.8, 1.0));
    let g = SpatialGrid::symmetric(4.0, 64).unwrap();
    let p = green_hfunction(r, t, 1.0, 1.0, g).unwrap();
    for (j, x) in g.points().into_iter().enumerate() {
        if x.abs() < 0.2 {
            continue;
        }
        let s = green_pointwise(r, t, 1.0, 1.0, x).unwrap();
        assert!((p.values()[j] - s).abs() < 1e-8, "x={x}: {} vs {s}", p.values()[j]);
    }
    // γ = β kernel
    let p = green_hfunction(r, t, 0.8, 1.0, g).unwrap();
    let j = g.nearest(1.0);
    let s = green_pointwise(r, t, 0.8, 1.0, g.x(j)).unwrap();
    assert!((p.values()[j] - s).abs() < 1e-8);
}

#[test]
fn dispatch() {
    let g = SpatialGrid::symmetric(40.0, 4096).unwrap();
    let p = fundamental_solution(rf(2.0, 0.0), tp(1.0, 1.0), 1.0, g).unwrap();
    assert_eq!(p.method(), Method::ClosedForm);
    let p = fundamental_solution(rf(0.75, 0.0), tp(0.75, 1.0), 1.0, g).unwrap();
    assert_eq!(p.method(), Method::ClosedForm);
    let g = default_grid(rf(1.3, 0.2), tp(0.7, 1.0), 1.0).unwrap();
    let p = fundamental_solution(rf(1.3, 0.2), tp(0.7, 1.0), 1.0, g).unwrap();
    assert_eq!(p.method(), Method::Spectral);
    assert!((p.mass() - 1.0).abs() < 1e-6);
}

#[test]
fn closed_and_spectral_agree_away_from_the_origin() {
    // the spectral profile is a periodized cell average; compare it with the
    // cell average of the closed form, on a grid wide enough for the images
    // of a light tail to be negligible
    let (r, t) = (rf(2.0, 0.0), tp(0.6, 1.0));
    let g = SpatialGrid::symmetric(9.0, 2048).unwrap();
    let spectral = green_spectral(r, t, 1.0, 1.0, g).unwrap();
    let closed = fundamental_solution_closed(r, t, 1.0, g).unwrap();
    let h = g.spacing();
    for (j, x) in g.points().into_iter().enumerate() {
        if x.abs() < 2.0 * h || x.abs() > 6.0 {
            continue;
        }
        let v = closed.values()[j];
        let curv = (closed.values()[(j + 1) % 2048] - 2.0 * v + closed.values()[(j + 2047) % 2048]) / 24.0;
        assert!((spectral.values()[j] - v - curv).abs() < 1e-6, "x={x}");
    }
}

#[test]
fn wave_case_is_too_coarse() {
    let g = SpatialGrid::symmetric(40.0, 4096).unwrap();
    let e = green_spectral(rf(2.0, 0.0), tp(2.0, 1.0), 1.0, 1.0, g).unwrap_err();
    assert!(matches!(e, Error::GridTooCoarse(_)));
}

#[test]
fn rejects_bad_inputs() {
    let g = SpatialGrid::symmetric(40.0, 256).unwrap();
    assert!(green_spectral(rf(1.5, 0.0), tp(0.8, 1.0), 1.5, 1.0, g).is_err());
    assert!(green_spectral(rf(1.5, 0.0), tp(0.8, 1.0), 1.0, 0.0, g).is_err());
    assert!(green_pointwise(rf(0.5, 0.0), tp(0.5, 1.0), 1.0, 1.0, 0.0).is_err());
    assert!(fundamental_solution_closed(rf(1.5, 0.0), tp(0.8, 1.0), 1.0, g).is_err());
}

#[test]
fn gamma_two_kernel_has_mass_one() {
    let (r, t) = (rf(1.6, 0.1), tp(1.4, 1.0));
    let g = default_grid(r, t, 1.0).unwrap();
    let p = green_spectral(r, t, 2.0, 1.0, g).unwrap();
    assert!((p.mass() - 1.0).abs() < 1e-12);
}

fn triple() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.3f64..2.0, -1.0f64..1.0, 0.3f64..1.0).prop_map(|(a, s, b)| (a, s * a.min(2.0 - a), b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn probability_density((a, th, b) in triple()) {
        let (r, t) = (rf(a, th), tp(b, 1.0));
        let g = default_grid(r, t, 1.0).unwrap();
        let p = green_spectral(r, t, 1.0, 1.0, g).unwrap();
        prop_assert!((p.mass() - 1.0).abs() < 1e-6);
        let min = p.values().iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(min >= -1e-9, "min {}", min);
    }

    #[test]
    fn symmetric_when_unskewed((a, _th, b) in triple()) {
        let (r, t) = (rf(a, 0.0), tp(b, 1.0));
        let g = default_grid(r, t, 1.0).unwrap();
        let p = green_spectral(r, t, 1.0, 1.0, g).unwrap();
        let v = p.values();
        let n = v.len();
        for j in 1..n / 2 {
            prop_assert!((v[n / 2 + j] - v[n / 2 - j]).abs() <= 1e-10 * v[n / 2].abs().max(1.0));
        }
    }

    #[test]
    fn similarity((a, th, b) in triple(), time in 0.2f64..5.0) {
        let (r, t) = (rf(a, th), tp(b, 1.0));
        let s = time.powf(b / a);
        let p1 = green_spectral(r, t, 1.0, 1.0, default_grid(r, t, 1.0).unwrap()).unwrap();
        let pt = green_spectral(r, t, 1.0, time, default_grid(r, t, time).unwrap()).unwrap();
        for (u, v) in pt.values().iter().zip(p1.values()) {
            prop_assert!((u * s - v).abs() <= 1e-6 * v.abs().max(1.0));
        }
    }
}
