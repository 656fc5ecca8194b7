//! Seeded random streams.
//!
//! Every stochastic routine takes a `seed` and derives one ChaCha stream per
//! independent unit of work (sample index, worker index). Results therefore
//! depend only on the seed and the work decomposition, never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type Rng = ChaCha8Rng;

/// The random stream numbered `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Maps `f` over `0..count` in parallel and returns the results in index
/// order, so downstream reductions see a fixed summation order.
pub fn par_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}
