//! Reproducible per-replicate random streams.
//!
//! Every replicate `i` of an experiment seeded with `seed` draws from ChaCha8
//! stream `i` keyed by `seed`. ChaCha is counter based, so the streams are
//! independent and the mapping `(seed, i) -> stream` does not depend on how
//! replicates are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Key offset for the auxiliary stream family (bridge-crossing uniforms).
const AUX_KEY: u64 = 0x9e37_79b9_7f4a_7c15;

pub type StreamRng = ChaCha8Rng;

/// Primary stream of replicate `index`: Gaussian increments.
pub fn replicate_stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Auxiliary stream of replicate `index`, disjoint from every primary stream.
pub fn auxiliary_stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ AUX_KEY);
    rng.set_stream(index);
    rng
}
