//! Seeded, splittable random number streams.
//!
//! Every run of the automaton owns an [`RngStream`] identified by a
//! `(seed, stream_id)` pair. Identical pairs reproduce identical draw
//! sequences bit for bit; distinct `stream_id`s (one per replication)
//! yield statistically independent streams, so replications can execute
//! concurrently and still aggregate deterministically.
//!
//! A stream can be split into child streams with [`RngStream::substream`].
//! Children with distinct lanes are decorrelated from each other and from
//! the parent, which lets a run draw its Monte Carlo samples, tie breaks,
//! and environment feedback from separate lanes.

use rand::{Error, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer, used to hash lane indices into key material.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic random stream keyed by `(seed, stream_id)` and, for
/// derived streams, a chain of lane indices.
///
/// Internally a ChaCha8 generator keyed by the full 256-bit expansion of
/// the identifying words, so distinct identifiers can never alias.
#[derive(Debug, Clone)]
pub struct RngStream {
    key: [u64; 4],
    rng: ChaCha8Rng,
}

impl RngStream {
    /// Stream `stream_id` of the generator family identified by `seed`.
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::from_key([seed, stream_id, 0, 0])
    }

    fn from_key(key: [u64; 4]) -> Self {
        let mut bytes = [0u8; 32];
        for (chunk, word) in bytes.chunks_exact_mut(8).zip(key) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        RngStream {
            key,
            rng: ChaCha8Rng::from_seed(bytes),
        }
    }

    /// Derive an independent child stream for the given lane.
    ///
    /// Derivation depends only on the parent's identity (not on how many
    /// values it has produced), so `substream` may be called at any time.
    pub fn substream(&self, lane: u64) -> RngStream {
        let mut key = self.key;
        key[2] = splitmix64(key[2] ^ splitmix64(lane));
        key[3] = splitmix64(key[3].wrapping_add(lane).wrapping_add(1));
        Self::from_key(key)
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        rand::Rng::gen(&mut self.rng)
    }

    /// Uniform index from `0..bound` (`bound` must be nonzero).
    pub fn index(&mut self, bound: usize) -> usize {
        rand::Rng::gen_range(&mut self.rng, 0..bound)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), Error> {
        self.rng.try_fill_bytes(dest)
    }
}
