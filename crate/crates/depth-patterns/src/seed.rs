//! Deterministic seed derivation for replicated computations.
//!
//! Replications, grid cells, and convergence repetitions each run on their
//! own generator seeded from the base seed and the work-unit coordinates.
//! Results are therefore independent of thread count and scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// One round of the SplitMix64 output function.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a stream of components into a child seed.
pub fn derive_seed(base: u64, components: &[u64]) -> u64 {
    let mut acc = splitmix64(base);
    for &c in components {
        acc = splitmix64(acc ^ splitmix64(c));
    }
    acc
}

/// Generator for one work unit. ChaCha keeps the stream identical across
/// platforms.
pub fn rng_for(base: u64, components: &[u64]) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(derive_seed(base, components))
}

/// Canonical encoding of an `f64` parameter for seed derivation.
pub fn f64_component(v: f64) -> u64 {
    v.to_bits()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derivation_is_deterministic_and_component_sensitive() {
        let a = derive_seed(7, &[1, 2]);
        assert_eq!(a, derive_seed(7, &[1, 2]));
        assert_ne!(a, derive_seed(7, &[2, 1]));
        assert_ne!(a, derive_seed(8, &[1, 2]));
    }

    #[test]
    fn rng_streams_reproduce() {
        let x: f64 = rng_for(99, &[3]).gen();
        let y: f64 = rng_for(99, &[3]).gen();
        assert_eq!(x, y);
    }
}
