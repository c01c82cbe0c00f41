//! Reproducible random streams.
//!
//! Every consumer of randomness gets its own ChaCha8 stream: the generator is
//! keyed by the 64-bit master seed and the 64-bit stream id selects an
//! independent keystream. Results therefore do not depend on scheduling or on
//! how many other streams were drawn from.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Stream reserved for additive measurement noise in synthetic scenes.
pub const NOISE_STREAM: u64 = 0x6e6f697365;

pub fn stream(master_seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id);
    rng
}

/// Runs `trials` independent trials in parallel; trial `k` draws from stream
/// `k` of `master_seed`. Output order follows trial index.
pub fn run_trials<T, F>(master_seed: u64, trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|k| f(k, &mut stream(master_seed, k as u64)))
        .collect()
}
