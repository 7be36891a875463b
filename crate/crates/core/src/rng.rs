//! Deterministic randomness.
//!
//! Every random draw in the crate comes from ChaCha8 seeded with a `u64`.
//! Independent per-trial streams are derived from a master seed with
//! [`trial_seed`], so a trial's stream depends only on `(master, index)` and
//! not on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finaliser applied to `master + (index + 1) * γ`, with γ the
/// 64-bit golden-ratio increment.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
