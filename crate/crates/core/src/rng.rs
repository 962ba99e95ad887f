//! Reproducible random streams.
//!
//! Every experiment takes a master seed; replicate `i` draws from stream `i`
//! of the ChaCha generator keyed by that seed, so results do not depend on
//! how replicates are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for replicate `index` under `master`.
pub fn stream(master: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Generator for a single-shot run.
pub fn from_seed(seed: u64) -> StreamRng {
    stream(seed, 0)
}
