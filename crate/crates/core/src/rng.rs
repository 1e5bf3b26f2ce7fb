//! Counter-based random streams.
//!
//! Every stochastic quantity is addressed by `(seed, purpose, stream, index)`
//! and computed by seeking a ChaCha8 keystream, so a value never depends on
//! the order in which other values were drawn. Rows of a sample matrix,
//! terms of a seeded value sequence and Monte Carlo repetitions each own a
//! stream and can be generated in any order or in parallel.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Keeps streams used for different jobs apart under the same user seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u64)]
pub enum Purpose {
    SampleMatrix = 1,
    ValueSequence = 2,
    Sample = 3,
    Instance = 4,
}

/// Generator positioned at the start of `stream`.
pub fn stream(seed: u64, purpose: Purpose, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// The `index`-th 64-bit word of a stream, by random access.
pub fn word(seed: u64, purpose: Purpose, stream_id: u64, index: u64) -> u64 {
    let mut rng = stream(seed, purpose, stream_id);
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}
