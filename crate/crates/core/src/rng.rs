//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 generator (a counter-based cipher, so output is
//! identical on every platform). Sub-streams are addressed by index:
//! `derive_seed(master, i)` applies the SplitMix64 finalizer to
//! `master + (i + 1)·0x9E3779B97F4A7C15`, which is how SplitMix64 itself walks
//! its state. The 256-bit ChaCha key is expanded from a 64-bit seed with four
//! further SplitMix64 outputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output function (Steele, Lea and Flood).
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child stream of `master`.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn stream(seed: u64) -> StreamRng {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(GOLDEN_GAMMA);
        chunk.copy_from_slice(&splitmix64(state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
