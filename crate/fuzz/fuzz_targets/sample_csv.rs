#![no_main]

use fracdiff::config::read_samples;
use fracdiff::grid::SpatialGrid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let grid = SpatialGrid::symmetric(4.0, 16).unwrap();
    if let Ok(v) = read_samples(data, &grid) {
        assert_eq!(v.len(), 16);
        assert!(v.iter().all(|x| x.is_finite()));
    }
});
