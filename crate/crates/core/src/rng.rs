//! Seeded randomness.
//!
//! Every stochastic routine uses ChaCha8 (`rand_chacha` 0.9). A run is
//! identified by a 64-bit seed; unit of work `i` (a trial, or a fixed-size
//! batch of trials) draws from `ChaCha8Rng::seed_from_u64(seed)` with
//! `set_stream(i)`. Work units never share a stream, so the result does not
//! depend on how units are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for work unit `stream` of the run identified by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Run `f` on a rayon pool of `workers` threads (0 means rayon's default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
