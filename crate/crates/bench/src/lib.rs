//! Fixtures shared by the benchmarks.

use skycell::{ClusteringConfig, Environment, PcpConfig, Point2, RadioConfig, Region, Scenario};

/// A seeded urban scenario at the default intensity (about 300 users).
pub fn scenario(seed: u64) -> Scenario {
    Scenario::generate(
        Region::default(),
        PcpConfig { seed, ..PcpConfig::default() },
        Environment::urban(),
        RadioConfig::default(),
        ClusteringConfig::default(),
    )
    .expect("default scenario parameters are valid")
}

/// `n` points from a fixed linear congruential sequence in [0, 1000)².
pub fn scatter(n: usize, seed: u64) -> Vec<Point2> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 1000.0
    };
    (0..n).map(|_| Point2::new(next(), next())).collect()
}
