//! Belief-value policies over a set of admissible worlds.
//!
//! * `ratio`: the fraction of admissible worlds satisfying the query.
//! * `reliable`: ratios inside each cell of a probability partition, mixed by
//!   the cell probabilities.
//! * `point`: the query's probability when the credal constraints fix it.

mod ratio;
mod reliable;
mod score;

pub use ratio::{laplace_sequence, possibility_ratio, InductionState};
pub use reliable::{point_belief, reliable_belief, Partition, POINT_TOLERANCE};
pub use score::{expected_error, tradeoff_table, Guarantee, TradeoffRow};

use serde::Serialize;
use thiserror::Error;

use crate::credal::CredalError;
use crate::logic::{Formula, LogicError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("possibility ratio undefined over an empty world set")]
    UndefinedRatio,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("belief and probability lists name different statements")]
    MismatchedStatements,
    #[error("belief or probability outside [0, 1]")]
    OutOfRange,
    #[error("all {causes} candidate causes are already in the chain")]
    OutOfCauses { causes: usize },
    #[error("probability is not point-valued: derivable interval [{lo}, {hi}]")]
    NotPointValued { lo: f64, hi: f64 },
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Credal(#[from] CredalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyTag {
    Ratio,
    Reliable,
    Point,
}

impl PolicyTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PolicyTag::Ratio => "ratio",
            PolicyTag::Reliable => "reliable",
            PolicyTag::Point => "point",
        }
    }
}

impl std::str::FromStr for PolicyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ratio" => Ok(PolicyTag::Ratio),
            "reliable" => Ok(PolicyTag::Reliable),
            "point" => Ok(PolicyTag::Point),
            other => Err(format!("unknown policy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeliefEntry {
    pub statement: Formula,
    pub belief: f64,
    pub policy: PolicyTag,
}

/// Beliefs reported on request, one entry per queried statement.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BeliefReport {
    pub entries: Vec<BeliefEntry>,
}

impl BeliefReport {
    pub fn push(&mut self, statement: Formula, belief: f64, policy: PolicyTag) {
        debug_assert!((0.0..=1.0).contains(&belief));
        self.entries.push(BeliefEntry {
            statement,
            belief,
            policy,
        });
    }
}
