//! Seed derivation for reproducible, order-independent random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer: a bijective 64-bit avalanche mixer.
pub const fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial_index` under `master_seed`:
/// `mix64(mix64(master_seed) ^ mix64(trial_index))`.
///
/// Each trial seed depends only on its own index, so adding trials never
/// changes the earlier ones.
pub const fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    mix64(mix64(master_seed) ^ mix64(trial_index))
}

/// Independent sub-streams of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Placement = 1,
    Jammer = 2,
    Shadowing = 3,
}

/// Seed of a named sub-stream: `mix64(seed ^ mix64(stream tag))`.
pub const fn stream_seed(seed: u64, stream: Stream) -> u64 {
    mix64(seed ^ mix64(stream as u64))
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, stream))
}
