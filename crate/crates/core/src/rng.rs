//! Keyed ChaCha streams: every random draw is identified by a key tuple, so
//! results do not depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tag values for the third key slot when a stream is not a p-adic digit stream.
pub(crate) const TAG_UNIFORM_POINT: u64 = u64::MAX;
pub(crate) const TAG_FINITE_TRIAL: u64 = u64::MAX - 1;
pub(crate) const TAG_SPECIALIZE: u64 = u64::MAX - 2;

/// Builds a generator whose output is a pure function of `(seed, a, b, c)`.
pub fn keyed_rng(seed: u64, a: u64, b: u64, c: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&a.to_le_bytes());
    key[16..24].copy_from_slice(&b.to_le_bytes());
    key[24..32].copy_from_slice(&c.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
