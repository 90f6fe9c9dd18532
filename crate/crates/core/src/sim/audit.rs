//! Calibration of partition-mixed beliefs over random domains.
//!
//! Every trial draws a random axiom set, a partition of the surviving worlds
//! and a true world, then scores *every* statement over those worlds. Two
//! statements with the same models are the same statement, so statements are
//! the subsets of the admissible worlds. A statement's belief only depends on
//! how many of its worlds fall in each cell, so subsets are counted by their
//! per-cell sizes instead of being listed one by one.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::logic::{models_in, Formula, World, WorldSet};
use crate::num::binomial;
use num_traits::ToPrimitive;

use super::calibration::DEFAULT_MIN_BIN_COUNT;
use super::{fold_trials, trial_rng, CalibrationReport, Calibrator, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionSource {
    /// One cell; beliefs are plain possibility ratios.
    None,
    /// Cells `{x, !x}` for a random atom `x`, with a random probability.
    SingleMarginal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityAuditConfig {
    pub trials: u64,
    pub seed: u64,
    /// Vocabulary size, 1 to 4.
    pub atoms: usize,
    /// Chance that each of `atoms` candidate random clauses becomes an axiom.
    pub axiom_density: f64,
    pub source: PartitionSource,
    pub bins: usize,
    pub min_bin_count: u64,
    pub parallel: bool,
}

impl Default for ReliabilityAuditConfig {
    fn default() -> Self {
        ReliabilityAuditConfig {
            trials: 10_000,
            seed: 0,
            atoms: 4,
            axiom_density: 0.5,
            source: PartitionSource::SingleMarginal,
            bins: 10,
            min_bin_count: DEFAULT_MIN_BIN_COUNT,
            parallel: true,
        }
    }
}

impl ReliabilityAuditConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(1..=4).contains(&self.atoms) {
            return Err(SimError::InvalidConfig(
                "vocabulary size must be between 1 and 4".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.axiom_density) {
            return Err(SimError::InvalidConfig(
                "axiom density must lie in [0, 1]".into(),
            ));
        }
        if self.bins == 0 || self.trials == 0 {
            return Err(SimError::InvalidConfig(
                "bins and trials must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One sampled domain: admissible worlds, partition cells with their
/// probabilities, and the world that is actually the case.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDomain {
    pub worlds: WorldSet,
    pub cells: Vec<(WorldSet, f64)>,
    pub true_world: World,
}

/// All statements sharing one per-cell size profile.
#[derive(Debug, Clone, PartialEq)]
pub struct StatementClass {
    /// Worlds of the statement inside each cell.
    pub per_cell: Vec<usize>,
    pub belief: f64,
    /// Number of world subsets with this profile.
    pub count: u64,
    /// How many of them contain the true world.
    pub true_count: u64,
}

fn random_clause<R: Rng>(rng: &mut R, atoms: usize) -> Formula {
    let literal = |rng: &mut R, atom: usize| {
        let a = Formula::Atom(atom);
        if rng.gen_bool(0.5) {
            a
        } else {
            a.not()
        }
    };
    let first = rng.gen_range(0..atoms);
    if atoms == 1 {
        return literal(rng, first);
    }
    let mut second = rng.gen_range(0..atoms - 1);
    if second >= first {
        second += 1;
    }
    literal(rng, first).or(literal(rng, second))
}

/// Draws trial `trial` of the audit.
pub fn sample_domain(config: &ReliabilityAuditConfig, trial: u64) -> TrialDomain {
    let mut rng = trial_rng(config.seed, trial);
    let atoms = config.atoms;
    let worlds = loop {
        let axioms: Vec<Formula> = (0..atoms)
            .filter_map(|_| {
                let clause = random_clause(&mut rng, atoms);
                rng.gen_bool(config.axiom_density).then_some(clause)
            })
            .collect();
        let w = models_in(&Formula::conjunction(axioms), atoms);
        if !w.is_empty() {
            break w;
        }
    };

    let cells: Vec<(WorldSet, f64)> = match config.source {
        PartitionSource::None => vec![(worlds.clone(), 1.0)],
        PartitionSource::SingleMarginal => {
            let atom = Formula::Atom(rng.gen_range(0..atoms));
            let yes = models_in(&atom, atoms).intersection(&worlds);
            let no = worlds.difference(&yes);
            let p: f64 = rng.gen();
            match (yes.is_empty(), no.is_empty()) {
                (false, false) => vec![(yes, p), (no, 1.0 - p)],
                (true, _) => vec![(no, 1.0)],
                (_, true) => vec![(yes, 1.0)],
            }
        }
    };

    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut chosen = cells.len() - 1;
    for (i, (_, p)) in cells.iter().enumerate() {
        acc += p;
        if u < acc {
            chosen = i;
            break;
        }
    }
    let members: Vec<World> = cells[chosen].0.iter().collect();
    let true_world = *members.choose(&mut rng).expect("cells are non-empty");
    TrialDomain {
        worlds,
        cells,
        true_world,
    }
}

/// Groups every subset of the domain's worlds by its per-cell sizes.
pub fn statement_tally(domain: &TrialDomain) -> Vec<StatementClass> {
    let sizes: Vec<usize> = domain.cells.iter().map(|(c, _)| c.len()).collect();
    let true_cell = domain
        .cells
        .iter()
        .position(|(c, _)| c.contains(domain.true_world))
        .expect("true world lies in some cell");
    let mut out = Vec::new();
    let mut profile = vec![0usize; sizes.len()];
    loop {
        let mut count = binomial(1, 1);
        let mut true_count = binomial(1, 1);
        let mut belief = 0.0;
        for (i, (&k, &n)) in profile.iter().zip(&sizes).enumerate() {
            count *= binomial(n as u64, k as u64);
            // subsets of cell i with k worlds that include the true world
            true_count *= if i == true_cell {
                if k == 0 {
                    binomial(0, 1)
                } else {
                    binomial(n as u64 - 1, k as u64 - 1)
                }
            } else {
                binomial(n as u64, k as u64)
            };
            belief += k as f64 / n as f64 * domain.cells[i].1;
        }
        out.push(StatementClass {
            per_cell: profile.clone(),
            belief: belief.clamp(0.0, 1.0),
            count: count.to_u64().expect("at most 2^16 subsets"),
            true_count: true_count.to_u64().expect("at most 2^16 subsets"),
        });
        // odometer over 0..=size per cell
        let mut i = 0;
        loop {
            if i == profile.len() {
                return out;
            }
            if profile[i] < sizes[i] {
                profile[i] += 1;
                break;
            }
            profile[i] = 0;
            i += 1;
        }
    }
}

pub fn reliability_audit(config: &ReliabilityAuditConfig) -> Result<CalibrationReport, SimError> {
    config.validate()?;
    let total = fold_trials(
        config.trials,
        config.parallel,
        || Calibrator::new(config.bins),
        |t, cal| {
            let domain = sample_domain(config, t);
            for class in statement_tally(&domain) {
                cal.add(class.belief, true, class.true_count);
                cal.add(class.belief, false, class.count - class.true_count);
            }
        },
    );
    let policy = match config.source {
        PartitionSource::None => "ratio",
        PartitionSource::SingleMarginal => "reliable",
    };
    Ok(total.report(policy, config.min_bin_count))
}
