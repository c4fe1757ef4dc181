//! Chunked, counter-addressed Monte Carlo driver.
//!
//! Trials are cut into fixed-size chunks. Chunk `c` of a stream starts its
//! ChaCha8 generator at the word offset of its first trial, so the draws a
//! trial sees depend only on `(seed, stream, trial index)`. Per-chunk
//! moments are merged in chunk order, which makes results bit-identical
//! under any thread pool.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::SimResult;

/// Trials per chunk. Part of the reproducibility contract: changing it
/// changes every result.
pub const CHUNK_TRIALS: u64 = 1 << 14;

/// Derives a generator stream id from a scenario tag, a grid index and the
/// number of draws per trial.
pub fn stream_id(tag: u64, index: u64, k: u64) -> u64 {
    let mut h = splitmix(tag);
    h = splitmix(h ^ index);
    splitmix(h ^ k.rotate_left(32))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Unit-mean exponential from 64 random bits by inversion. The uniform is
/// taken at the centre of its 2^-52 cell, which is exactly representable and
/// strictly inside (0, 1), so the result is never 0 or ∞.
#[inline]
pub fn unit_exponential(bits: u64) -> f64 {
    let u = ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64);
    -(-u).ln_1p()
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    #[inline]
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Moments {
            n,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.n as f64 * w,
        }
    }

    fn result(self, seed: u64) -> SimResult {
        let std_error = if self.n > 1 {
            (self.m2.max(0.0) / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            0.0
        };
        SimResult {
            mean: self.mean,
            std_error,
            trials: self.n,
            seed,
        }
    }
}

/// Runs `trials` trials. Each trial receives `draws` i.i.d. unit-mean
/// exponentials and returns `N` observables; the result holds the mean and
/// standard error of each.
pub fn simulate<const N: usize, F>(trials: u64, seed: u64, stream: u64, draws: usize, f: F) -> [SimResult; N]
where
    F: Fn(&mut [f64]) -> [f64; N] + Sync,
{
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let partials: Vec<[Moments; N]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK_TRIALS;
            let end = (start + CHUNK_TRIALS).min(trials);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            // two 32-bit words per u64 draw
            rng.set_word_pos(start as u128 * draws as u128 * 2);
            let mut buf = vec![0.0; draws];
            let mut acc = [Moments::default(); N];
            for _ in start..end {
                for slot in buf.iter_mut() {
                    *slot = unit_exponential(rng.next_u64());
                }
                let obs = f(&mut buf);
                for (m, x) in acc.iter_mut().zip(obs) {
                    m.push(x);
                }
            }
            acc
        })
        .collect();

    let mut total = [Moments::default(); N];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t = t.merge(p);
        }
    }
    total.map(|m| m.result(seed))
}
