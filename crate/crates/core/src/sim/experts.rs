//! Two experts, one decision maker.
//!
//! Both experts report exact posteriors given their own binary signal, so each
//! is calibrated on its own. Expert 2's signal duplicates expert 1's with
//! probability `redundancy`, which the combining policies cannot observe.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::calibration::DEFAULT_MIN_BIN_COUNT;
use super::{fold_trials, trial_rng, CalibrationReport, Calibrator, SimError};

#[derive(Debug, Clone, PartialEq)]
pub struct TwoExpertsConfig {
    pub trials: u64,
    pub seed: u64,
    /// Probability expert 1's signal equals the truth.
    pub quality1: f64,
    /// Probability expert 2's own (non-copied) signal equals the truth.
    pub quality2: f64,
    /// Probability expert 2's signal is a copy of expert 1's.
    pub redundancy: f64,
    pub base_rate: f64,
    pub bins: usize,
    pub min_bin_count: u64,
    pub parallel: bool,
}

impl Default for TwoExpertsConfig {
    fn default() -> Self {
        TwoExpertsConfig {
            trials: 100_000,
            seed: 0,
            quality1: 0.9,
            quality2: 0.7,
            redundancy: 0.0,
            base_rate: 0.5,
            bins: 10,
            min_bin_count: DEFAULT_MIN_BIN_COUNT,
            parallel: true,
        }
    }
}

impl TwoExpertsConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: &str| Err(SimError::InvalidConfig(msg.to_string()));
        let open_half = |q: f64| q > 0.5 && q < 1.0;
        if !open_half(self.quality1) || !open_half(self.quality2) {
            return bad("signal qualities must lie in (0.5, 1)");
        }
        if self.quality1 < self.quality2 {
            return bad("expert 1 must be at least as accurate as expert 2");
        }
        if !(0.0..=1.0).contains(&self.redundancy) {
            return bad("redundancy must lie in [0, 1]");
        }
        if !(self.base_rate > 0.0 && self.base_rate < 1.0) {
            return bad("base rate must lie in (0, 1)");
        }
        if self.bins == 0 || self.trials == 0 {
            return bad("bins and trials must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpertPolicy {
    FollowExpert1,
    FollowExpert2,
    Average,
    IndependentFusion,
}

impl ExpertPolicy {
    pub const ALL: [ExpertPolicy; 4] = [
        ExpertPolicy::FollowExpert1,
        ExpertPolicy::FollowExpert2,
        ExpertPolicy::Average,
        ExpertPolicy::IndependentFusion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExpertPolicy::FollowExpert1 => "follow_expert1",
            ExpertPolicy::FollowExpert2 => "follow_expert2",
            ExpertPolicy::Average => "average",
            ExpertPolicy::IndependentFusion => "independent_fusion",
        }
    }
}

/// `P(truth | signal)` for a signal of accuracy `quality`.
fn posterior(signal: bool, quality: f64, prior: f64) -> f64 {
    let (hit, miss) = if signal {
        (quality * prior, (1.0 - quality) * (1.0 - prior))
    } else {
        ((1.0 - quality) * prior, quality * (1.0 - prior))
    };
    hit / (hit + miss)
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Combines two reports under the named policy.
pub fn combine(policy: ExpertPolicy, p1: f64, p2: f64, prior: f64) -> f64 {
    match policy {
        ExpertPolicy::FollowExpert1 => p1,
        ExpertPolicy::FollowExpert2 => p2,
        ExpertPolicy::Average => 0.5 * (p1 + p2),
        ExpertPolicy::IndependentFusion => logistic(logit(p1) + logit(p2) - logit(prior)),
    }
}

pub fn run_two_experts(
    config: &TwoExpertsConfig,
) -> Result<BTreeMap<ExpertPolicy, CalibrationReport>, SimError> {
    config.validate()?;
    let prior = config.base_rate;
    // marginal accuracy of expert 2's signal, copies included
    let quality2_effective =
        config.redundancy * config.quality1 + (1.0 - config.redundancy) * config.quality2;

    let totals = fold_trials(
        config.trials,
        config.parallel,
        || std::array::from_fn::<_, 4, _>(|_| Calibrator::new(config.bins)),
        |t, acc| {
            let mut rng = trial_rng(config.seed, t);
            let truth = rng.gen_bool(prior);
            let s1 = if rng.gen_bool(config.quality1) {
                truth
            } else {
                !truth
            };
            let copied = rng.gen_bool(config.redundancy);
            let own = if rng.gen_bool(config.quality2) {
                truth
            } else {
                !truth
            };
            let s2 = if copied { s1 } else { own };
            let p1 = posterior(s1, config.quality1, prior);
            let p2 = posterior(s2, quality2_effective, prior);
            for (slot, policy) in acc.iter_mut().zip(ExpertPolicy::ALL) {
                slot.add(combine(policy, p1, p2, prior), truth, 1);
            }
        },
    );
    Ok(ExpertPolicy::ALL
        .into_iter()
        .zip(totals.iter())
        .map(|(policy, cal)| (policy, cal.report(policy.as_str(), config.min_bin_count)))
        .collect())
}
