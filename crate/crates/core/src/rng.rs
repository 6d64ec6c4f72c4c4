//! Deterministic seed derivation.
//!
//! All stochastic routines take a `u64` seed and derive per-work-item
//! streams with [`derive_seed`]. Work items are indexed, results are
//! reduced in index order, so output is independent of thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 step; stable mixing independent of std's hasher.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Combine a base seed with stream labels into one derived seed.
pub fn derive_seed(seed: u64, labels: &[u64]) -> u64 {
    let mut acc = splitmix64(seed);
    for &l in labels {
        acc = splitmix64(acc ^ l.wrapping_mul(0x2545f4914f6cdd1d));
    }
    acc
}

/// RNG for a labeled work item.
pub fn stream(seed: u64, labels: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, labels))
}
