//! Reproducible random streams.
//!
//! Every sampler draws from `ChaCha8Rng`. A batch task with index `i` under a
//! base seed `s` uses the seed `task_seed(s, i)`, which mixes the index into the
//! seed with the SplitMix64 finalizer. Results therefore depend only on
//! `(seed, task index)` and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StateRng = ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for task `task` of a run seeded with `seed`.
pub fn task_seed(seed: u64, task: u64) -> u64 {
    mix64(seed ^ mix64(task.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

pub fn rng_from_seed(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for task `task` under base seed `seed`.
pub fn task_rng(seed: u64, task: u64) -> StateRng {
    rng_from_seed(task_seed(seed, task))
}
