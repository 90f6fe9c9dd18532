use num_traits::ToPrimitive;

use crate::logic::{Formula, WorldSet};
use crate::num::{is_probability, Scalar};

use super::{possibility_ratio, reliable_belief, Partition, PolicyError};

/// Quadratic expected error `Σ p(1 - b)² + (1 - p) b²` of `beliefs` against
/// the true probabilities `truth`, matched statement by statement.
pub fn expected_error<S: Scalar>(
    beliefs: &[(Formula, S)],
    truth: &[(Formula, S)],
) -> Result<S, PolicyError> {
    if beliefs.len() != truth.len() {
        return Err(PolicyError::MismatchedStatements);
    }
    let mut total = S::zero();
    for (statement, b) in beliefs {
        let p = truth
            .iter()
            .find(|(s, _)| s == statement)
            .map(|(_, p)| p)
            .ok_or(PolicyError::MismatchedStatements)?;
        if !is_probability(b) || !is_probability(p) {
            return Err(PolicyError::OutOfRange);
        }
        let miss = S::one() - b.clone();
        total = total
            + p.clone() * miss.clone() * miss
            + (S::one() - p.clone()) * b.clone() * b.clone();
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Guarantee {
    NoneGuaranteed,
    ProvablyReliable,
    PreciselyReliable,
}

impl Guarantee {
    pub fn label(self) -> &'static str {
        match self {
            Guarantee::NoneGuaranteed => "none-guaranteed",
            Guarantee::ProvablyReliable => "provably-reliable",
            Guarantee::PreciselyReliable => "precisely-reliable",
        }
    }
}

/// One row of the accuracy/reliability trade-off table.
#[derive(Debug, Clone)]
pub struct TradeoffRow<S> {
    pub source: String,
    pub beliefs: Vec<S>,
    pub expected_error: S,
    pub guarantee: Guarantee,
}

/// Belief sets obtainable from known marginals `p(m_1) .. p(m_k)` and their
/// expected errors against those marginals:
/// the raw point values, one reliable row per single-marginal partition
/// `{m_i: p_i, !m_i: 1 - p_i}`, and the pure possibility ratio.
pub fn tradeoff_table<S: Scalar>(
    worlds: &WorldSet,
    marginals: &[(Formula, S)],
    names: &[String],
) -> Result<Vec<TradeoffRow<S>>, PolicyError> {
    let score = |beliefs: &[S]| {
        let labelled: Vec<(Formula, S)> = marginals
            .iter()
            .zip(beliefs)
            .map(|((f, _), b)| (f.clone(), b.clone()))
            .collect();
        expected_error(&labelled, marginals)
    };
    let mut rows = Vec::new();

    let point: Vec<S> = marginals.iter().map(|(_, p)| p.clone()).collect();
    rows.push(TradeoffRow {
        source: "point".into(),
        expected_error: score(&point)?,
        beliefs: point,
        guarantee: Guarantee::NoneGuaranteed,
    });

    for (i, (m, p)) in marginals.iter().enumerate() {
        let partition = Partition::new(vec![
            (m.clone(), p.clone()),
            (m.clone().not(), S::one() - p.clone()),
        ])?;
        let beliefs = marginals
            .iter()
            .map(|(q, _)| reliable_belief(worlds, &partition, q))
            .collect::<Result<Vec<S>, _>>()?;
        rows.push(TradeoffRow {
            source: format!(
                "partition on {}",
                names.get(i).map(String::as_str).unwrap_or("?")
            ),
            expected_error: score(&beliefs)?,
            beliefs,
            guarantee: Guarantee::ProvablyReliable,
        });
    }

    let ratio = marginals
        .iter()
        .map(|(q, _)| {
            possibility_ratio(worlds, q).map(|r| {
                S::from_ratio(
                    r.numer().to_u64().unwrap_or(0),
                    r.denom().to_u64().unwrap_or(1),
                )
            })
        })
        .collect::<Result<Vec<S>, _>>()?;
    rows.push(TradeoffRow {
        source: "possibility ratio".into(),
        expected_error: score(&ratio)?,
        beliefs: ratio,
        guarantee: Guarantee::PreciselyReliable,
    });
    Ok(rows)
}
