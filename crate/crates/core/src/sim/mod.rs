//! Seeded Monte Carlo experiments on policy calibration.
//!
//! Trial `i` draws from its own ChaCha stream derived from `(seed, i)`, and
//! trials are folded in fixed-size chunks merged in chunk order, so reports
//! are bit-identical whether chunks run sequentially or on the rayon pool.

mod audit;
mod calibration;
mod experts;

pub use audit::{
    reliability_audit, sample_domain, statement_tally, PartitionSource, ReliabilityAuditConfig,
    StatementClass, TrialDomain,
};
pub use calibration::{CalibrationBin, CalibrationReport, Calibrator, DEFAULT_MIN_BIN_COUNT};
pub use experts::{run_two_experts, ExpertPolicy, TwoExpertsConfig};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

const CHUNK: u64 = 1024;

pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trial` for `0..trials` into per-chunk accumulators and merges them in order.
pub(crate) fn fold_trials<A, F>(
    trials: u64,
    parallel: bool,
    init: impl Fn() -> A + Sync,
    trial: F,
) -> A
where
    A: Send + Merge,
    F: Fn(u64, &mut A) + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let run_chunk = |c: u64| {
        let mut acc = init();
        for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
            trial(t, &mut acc);
        }
        acc
    };
    let parts: Vec<A> = if parallel {
        (0..chunks).into_par_iter().map(run_chunk).collect()
    } else {
        (0..chunks).map(run_chunk).collect()
    };
    let mut total = init();
    for p in &parts {
        total.merge_from(p);
    }
    total
}

pub(crate) trait Merge {
    fn merge_from(&mut self, other: &Self);
}

impl Merge for Calibrator {
    fn merge_from(&mut self, other: &Self) {
        self.merge(other);
    }
}

impl<const N: usize> Merge for [Calibrator; N] {
    fn merge_from(&mut self, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            a.merge(b);
        }
    }
}
