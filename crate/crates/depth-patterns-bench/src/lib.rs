//! Shared fixtures for the pipeline benchmarks.

use depth_patterns::movement::{simulate_walk, WalkParams};
use depth_patterns::patterns::Trajectory;
use depth_patterns::seed::rng_for;

/// A fixed uniform-angle walk of the benchmark length.
pub fn benchmark_walk(steps: usize) -> Trajectory {
    let params = WalkParams::new(0.02, 1, 0.0, 0.0, steps);
    simulate_walk(&params, &mut rng_for(0xBE7C4, &[steps as u64])).unwrap()
}
