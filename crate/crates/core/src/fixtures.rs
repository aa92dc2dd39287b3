//! Deterministic inputs shared by tests, benches and the CLI demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::series::TimeSeries;

/// The ten-point worked series `(15,32,29,27,34,33,25,20,28,23)`.
pub fn worked_series() -> TimeSeries {
    TimeSeries::new(vec![
        15.0, 32.0, 29.0, 27.0, 34.0, 33.0, 25.0, 20.0, 28.0, 23.0,
    ])
    .expect("fixture is valid")
    .with_id("worked")
}

/// Gaussian-ish random walk with unit steps, seeded.
pub fn random_walk(n: usize, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = 100.0;
    let values = (0..n)
        .map(|_| {
            // sum of uniforms keeps this dependency-free and smooth enough
            let step: f64 = (0..4).map(|_| rng.gen_range(-1.0..1.0)).sum();
            x += step;
            x
        })
        .collect();
    TimeSeries::new(values)
        .expect("finite walk")
        .with_id(format!("walk-{seed}"))
}

/// Random integer-valued series where roughly `dup_rate` of the values are
/// copies of an earlier nearby value, so windows regularly contain ties.
pub fn series_with_ties(n: usize, dup_rate: f64, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<f64> = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 && rng.gen_bool(dup_rate) {
            let back = rng.gen_range(1..=i.min(4));
            values.push(values[i - back]);
        } else {
            values.push(rng.gen_range(0..1000) as f64);
        }
    }
    TimeSeries::new(values)
        .expect("finite series")
        .with_id(format!("ties-{seed}"))
}
