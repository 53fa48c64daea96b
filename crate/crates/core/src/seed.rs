//! Seeded random streams.
//!
//! Everything random in the crate runs on ChaCha8 seeded from a `u64`, which
//! is portable across platforms and stable across runs. Independent streams
//! for sub-tasks are derived from a master seed by hashing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SolverRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a sub-seed from `master` and a path of indices.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}
