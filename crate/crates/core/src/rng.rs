//! Seed discipline: one master seed, counter-based per-trial streams.
//!
//! Every stochastic operation takes `(master_seed, stream)` and is a pure
//! function of the pair, so trial `t` is reproducible independently of
//! execution order or parallelism.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Deterministic generator for a (master seed, stream) pair.
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Draw `n` i.i.d. standard-normal samples.
pub fn standard_normal_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Fisher-Yates shuffled copy of `0..n`.
pub fn shuffled_indices(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        idx.swap(i, j);
    }
    idx
}
