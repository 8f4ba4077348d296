//! Seed derivation for independent RNG streams.
//!
//! Every stochastic stage (walk slots, per-layer runs, training epochs,
//! negative tables) gets its own stream derived from one base seed plus a
//! tag path. Streams derived from distinct paths are independent for all
//! practical purposes, and the derivation is stable across runs and thread
//! counts.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One round of splitmix64, the standard 64-bit mixer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `base` and a tag path.
///
/// Tags are folded in one at a time, so `derive(s, &[a, b])` differs from
/// `derive(s, &[b, a])` and from `derive(s, &[a])`.
pub fn derive(base: u64, tags: &[u64]) -> u64 {
    let mut state = mix(base);
    for (i, &tag) in tags.iter().enumerate() {
        state = mix(state ^ mix(tag.wrapping_add(i as u64 + 1)));
    }
    state
}

/// A ChaCha stream seeded from `derive(base, tags)`.
pub fn rng(base: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(base, tags))
}
