//! Deterministic RNG substreams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream keyed by
//! `(master seed, trial index, purpose tag)`. The key schedule is a
//! SplitMix64 chain over the three components, so any (seed, trial, purpose)
//! triple yields the same stream on every platform and run, and distinct
//! trials never share a stream.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Independent stream for `(seed, trial, purpose)`.
pub fn substream(seed: u64, trial: u64, purpose: &str) -> ChaCha8Rng {
    let mut state = seed ^ fnv1a(purpose.as_bytes()).rotate_left(17) ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Standard exponential with mean 1 via inverse CDF.
pub fn exp1<R: rand::Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen(); // [0, 1)
    -(-u).ln_1p() // -ln(1 - u)
}
