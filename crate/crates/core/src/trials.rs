//! Per-trial random streams and first-success search over trial indices.
//!
//! Trial `t` draws from a ChaCha8 stream keyed by a base seed and with stream
//! id `t`, so the outcome of a trial does not depend on which worker runs it
//! or in what order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialSeeds {
    base: [u8; 32],
}

impl TrialSeeds {
    pub fn new(base: [u8; 32]) -> Self {
        Self { base }
    }

    /// Consumes 32 bytes from `rng`.
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self { base: rng.gen() }
    }

    pub fn rng(&self, trial: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::from_seed(self.base);
        r.set_stream(trial);
        r
    }
}

/// Runs `trial(0), trial(1), ...` up to `trials` and returns the lowest index
/// that produced `Ok(Some(_))` or `Err(_)`. With `workers > 1` the trials are
/// spread over a thread pool; the returned index is the same as in a
/// sequential run.
pub fn first_success<T, F>(trials: u64, workers: usize, trial: F) -> Result<Option<(u64, T)>>
where
    T: Send,
    F: Fn(u64) -> Result<Option<T>> + Sync,
{
    if workers <= 1 {
        for t in 0..trials {
            if let Some(v) = trial(t)? {
                return Ok(Some((t, v)));
            }
        }
        return Ok(None);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| trial(t).map(|o| o.map(|v| (t, v))))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .transpose()
            .map(Option::flatten)
    })
}
