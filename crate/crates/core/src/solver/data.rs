use crate::grid::SpatialGrid;
use std::f64::consts::PI;

/// Unit-mass spike: `1/spacing` at the node nearest the origin.
pub fn delta(grid: &SpatialGrid) -> Vec<f64> {
    let mut v = vec![0.0; grid.num_points()];
    v[grid.nearest(0.0)] = 1.0 / grid.spacing();
    v
}

/// Unit-mass normal density with the given center and standard deviation.
pub fn gaussian(grid: &SpatialGrid, center: f64, sigma: f64) -> Vec<f64> {
    let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
    grid.points()
        .into_iter()
        .map(|x| norm * (-0.5 * ((x - center) / sigma).powi(2)).exp())
        .collect()
}

/// `height` on `[a, b]`, zero elsewhere. Nodes exactly on an edge get half.
pub fn box_profile(grid: &SpatialGrid, a: f64, b: f64, height: f64) -> Vec<f64> {
    grid.points()
        .into_iter()
        .map(|x| {
            if x > a && x < b {
                height
            } else if x == a || x == b {
                0.5 * height
            } else {
                0.0
            }
        })
        .collect()
}
