//! Deterministic random substreams.
//!
//! Every random decision in the pipeline draws from its own ChaCha stream,
//! keyed by the master seed, a domain label, and the indices that identify
//! the decision (transition id, trace index, ...). Two consequences:
//! the same seed reproduces every output bit-for-bit, and evaluation order
//! cannot change results because no stream is shared across decisions.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// Derive an independent random stream from the master seed.
pub fn substream(seed: u64, domain: &str, indices: &[u64]) -> ChaCha12Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update((domain.len() as u64).to_le_bytes());
    hasher.update(domain.as_bytes());
    for index in indices {
        hasher.update(index.to_le_bytes());
    }
    ChaCha12Rng::from_seed(hasher.finalize().into())
}
