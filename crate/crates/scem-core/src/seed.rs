//! Seed derivation for reproducible, schedule-independent parallelism.
//!
//! Every concurrent job (sweep cell, dream repetition, training document)
//! derives its own RNG from the base seed plus its coordinates, so results
//! do not depend on worker scheduling. Hashing is done with fixed,
//! version-stable mixers; `std::hash` types are avoided because their
//! output is not guaranteed stable across Rust releases.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// SplitMix64 finalizer; full-avalanche mixing of one 64-bit word.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds an ordered tuple of words into one seed. Order matters:
/// `mix(&[a, b]) != mix(&[b, a])` in general.
pub fn mix(parts: &[u64]) -> u64 {
    let mut state = 0x243F_6A88_85A3_08D3; // keeps mix(&[]) != 0
    for &p in parts {
        state = splitmix64(state ^ splitmix64(p));
    }
    state
}

/// FNV-1a over UTF-8 bytes; stable across platforms and releases.
pub fn hash_str(s: &str) -> u64 {
    let mut h = 0xCBF2_9CE4_8422_2325u64;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// The crate-wide RNG, seeded from mixed coordinates.
pub fn rng_from(parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(parts))
}

/// Unbiased uniform draw from `0..bound` by rejection sampling.
pub fn uniform_index<R: RngCore + ?Sized>(rng: &mut R, bound: usize) -> usize {
    assert!(bound > 0, "uniform_index bound must be positive");
    let bound = bound as u64;
    // Accept draws below the largest multiple of `bound`; the expected
    // number of iterations is below 2 for every bound.
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return (x % bound) as usize;
        }
    }
}
