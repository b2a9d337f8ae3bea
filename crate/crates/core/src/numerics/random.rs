//! Reproducible Gaussian substreams.
//!
//! Substream `i` of master seed `s` is the ChaCha8 keystream keyed by `s`
//! with stream id `i`. Streams never overlap, and the sequence a path sees
//! depends only on `(s, i)`, never on how paths are distributed over threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomStream {
    pub master_seed: u64,
    pub substream_index: u64,
}

impl RandomStream {
    pub fn new(master_seed: u64, substream_index: u64) -> Self {
        Self {
            master_seed,
            substream_index,
        }
    }

    pub fn generator(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.substream_index);
        StreamRng { rng }
    }
}

/// Stateful generator for one substream.
#[derive(Debug, Clone)]
pub struct StreamRng {
    rng: ChaCha8Rng,
}

impl StreamRng {
    #[inline]
    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            if u > 0.0 {
                return u;
            }
        }
    }
}

/// First `n` standard-normal draws of `stream`.
pub fn gaussian_samples(stream: RandomStream, n: usize) -> Vec<f64> {
    let mut g = stream.generator();
    (0..n).map(|_| g.normal()).collect()
}
