//! Interval and conditional probability constraints over possible worlds.
//!
//! A knowledge base of statements `P(target | given) ∈ [lo, hi]` is compiled
//! into homogeneous linear rows over one non-negative mass per admissible
//! world. Certain knowledge (axioms) never becomes a row: it shrinks the
//! admissible world set instead.
//!
//! Conditional queries are linear-fractional programs. They are solved
//! exactly via the Charnes-Cooper substitution `y = x / P(given)`, which is
//! well defined here because every compiled row is homogeneous: the
//! normalisation `Σ x = 1` is replaced by `Σ_{w ⊨ given} y_w = 1`.
//!
//! Worlds that agree on every formula of a query have identical columns, so
//! [`feasible`] and [`query_bounds`] keep one representative per class.

mod experts;
pub mod lp;

pub use experts::{merge_experts, ExpertAssessment};

use std::collections::HashSet;

use thiserror::Error;

use crate::logic::{models_in, Formula, WorldSet};
use crate::num::{is_probability, Interval, Scalar};
use lp::{Outcome, Relation, Row, Sense};

/// Largest number of distinguishable worlds (LP variables) accepted.
pub const MAX_LP_WORLDS: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CredalError {
    #[error("constraint set is infeasible")]
    Infeasible,
    #[error("conditioning event has probability zero under every admissible distribution")]
    ConditioningImpossible,
    #[error(
        "{count} distinguishable worlds exceed the solver cap of {}",
        MAX_LP_WORLDS
    )]
    TooManyWorlds { count: usize },
    #[error("invalid probability bounds [{lo}, {hi}]")]
    InvalidBounds { lo: String, hi: String },
    #[error("assessment of expert `{0}` is infeasible on its own")]
    ExpertInfeasible(String),
    #[error("linear solver did not converge")]
    SolverStalled,
}

/// `P(target | given) ∈ [lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CredalConstraint<S> {
    pub target: Formula,
    pub given: Formula,
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> CredalConstraint<S> {
    pub fn new(target: Formula, given: Formula, lo: S, hi: S) -> Result<Self, CredalError> {
        if !is_probability(&lo) || !is_probability(&hi) || (lo.clone() - hi.clone()).is_pos() {
            return Err(CredalError::InvalidBounds {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(CredalConstraint {
            target,
            given,
            lo,
            hi,
        })
    }

    /// Unconditional `P(target) ∈ [lo, hi]`.
    pub fn marginal(target: Formula, lo: S, hi: S) -> Result<Self, CredalError> {
        Self::new(target, Formula::top(), lo, hi)
    }

    /// `P(target | given) = value`.
    pub fn point(target: Formula, given: Formula, value: S) -> Result<Self, CredalError> {
        Self::new(target, given, value.clone(), value)
    }

    /// `P(target | given) >= lo`.
    pub fn at_least(target: Formula, given: Formula, lo: S) -> Result<Self, CredalError> {
        Self::new(target, given, lo, S::one())
    }
}

/// Compiled constraint rows over the masses of the admissible worlds.
/// Every row reads `coeffs · x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearSystem<S> {
    worlds: WorldSet,
    index: Vec<usize>,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> LinearSystem<S> {
    pub fn compile(worlds: &WorldSet, constraints: &[CredalConstraint<S>]) -> Self {
        let index: Vec<usize> = worlds.iter().map(|w| w.0).collect();
        let atoms = worlds.atom_count();
        let mut rows = Vec::new();
        for c in constraints {
            let given = models_in(&c.given, atoms);
            let joint = models_in(&c.target, atoms).intersection(&given);
            let membership = |w: usize, set: &WorldSet| -> S {
                if set.contains(crate::logic::World(w)) {
                    S::one()
                } else {
                    S::zero()
                }
            };
            // rows with lo = 0 or hi = 1 hold for every non-negative mass vector
            if c.lo.is_pos() {
                rows.push(
                    index
                        .iter()
                        .map(|&w| membership(w, &joint) - c.lo.clone() * membership(w, &given))
                        .collect(),
                );
            }
            if (S::one() - c.hi.clone()).is_pos() {
                rows.push(
                    index
                        .iter()
                        .map(|&w| c.hi.clone() * membership(w, &given) - membership(w, &joint))
                        .collect(),
                );
            }
        }
        LinearSystem {
            worlds: worlds.clone(),
            index,
            rows,
        }
    }

    pub fn variables(&self) -> usize {
        self.index.len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn worlds(&self) -> &WorldSet {
        &self.worlds
    }

    fn indicator(&self, f: &Formula) -> Vec<S> {
        let set = models_in(f, self.worlds.atom_count());
        self.index
            .iter()
            .map(|&w| {
                if set.contains(crate::logic::World(w)) {
                    S::one()
                } else {
                    S::zero()
                }
            })
            .collect()
    }

    fn lp_rows(&self, normalise_over: &[S]) -> Vec<Row<S>> {
        let mut rows: Vec<Row<S>> = self
            .rows
            .iter()
            .map(|r| Row::new(r.clone(), Relation::Ge, S::zero()))
            .collect();
        rows.push(Row::new(normalise_over.to_vec(), Relation::Eq, S::one()));
        rows
    }

    /// Some probability distribution over the admissible worlds satisfies every row.
    pub fn is_feasible(&self) -> Result<bool, CredalError> {
        if self.index.is_empty() {
            return Ok(false);
        }
        let ones = vec![S::one(); self.variables()];
        let zero = vec![S::zero(); self.variables()];
        match lp::solve(
            self.variables(),
            &self.lp_rows(&ones),
            &zero,
            Sense::Minimize,
        ) {
            Outcome::Optimal { .. } => Ok(true),
            Outcome::Infeasible => Ok(false),
            Outcome::IterationLimit | Outcome::Unbounded => Err(CredalError::SolverStalled),
        }
    }

    /// Tightest `[min, max]` of `P(query | given)` over satisfying distributions
    /// with `P(given) > 0`.
    pub fn conditional_bounds(
        &self,
        query: &Formula,
        given: &Formula,
    ) -> Result<Interval<S>, CredalError> {
        if !self.is_feasible()? {
            return Err(CredalError::Infeasible);
        }
        let given_ind = self.indicator(given);
        let objective: Vec<S> = self
            .indicator(query)
            .into_iter()
            .zip(&given_ind)
            .map(|(q, g)| q * g.clone())
            .collect();
        let rows = self.lp_rows(&given_ind);
        let extreme = |sense| match lp::solve(self.variables(), &rows, &objective, sense) {
            Outcome::Optimal { value, .. } => Ok(clamp_unit(value)),
            Outcome::Infeasible => Err(CredalError::ConditioningImpossible),
            Outcome::Unbounded | Outcome::IterationLimit => Err(CredalError::SolverStalled),
        };
        let lo = extreme(Sense::Minimize)?;
        let hi = extreme(Sense::Maximize)?;
        Ok(Interval::new(lo, hi))
    }
}

fn clamp_unit<S: Scalar>(value: S) -> S {
    if value < S::zero() {
        S::zero()
    } else if value > S::one() {
        S::one()
    } else {
        value
    }
}

/// One world per class of `worlds` that no formula in `formulas` separates,
/// checked against the solver cap.
fn representatives<'a, S: Scalar>(
    worlds: &WorldSet,
    constraints: &'a [CredalConstraint<S>],
    extra: &[&'a Formula],
) -> Result<WorldSet, CredalError> {
    let atoms = worlds.atom_count();
    let sets: Vec<WorldSet> = constraints
        .iter()
        .flat_map(|c| [&c.target, &c.given])
        .chain(extra.iter().copied())
        .map(|f| models_in(f, atoms))
        .collect();
    let mut seen = HashSet::new();
    let mut out = WorldSet::empty(atoms);
    for w in worlds.iter() {
        let signature: Vec<bool> = sets.iter().map(|s| s.contains(w)).collect();
        if seen.insert(signature) {
            out.insert(w);
        }
    }
    let count = out.len();
    if count > MAX_LP_WORLDS {
        return Err(CredalError::TooManyWorlds { count });
    }
    Ok(out)
}

/// True iff some distribution over `worlds` satisfies every constraint.
pub fn feasible<S: Scalar>(
    worlds: &WorldSet,
    constraints: &[CredalConstraint<S>],
) -> Result<bool, CredalError> {
    let reps = representatives(worlds, constraints, &[])?;
    LinearSystem::compile(&reps, constraints).is_feasible()
}

/// Sharpest derivable interval for `P(query | given)`.
pub fn query_bounds<S: Scalar>(
    worlds: &WorldSet,
    constraints: &[CredalConstraint<S>],
    query: &Formula,
    given: &Formula,
) -> Result<Interval<S>, CredalError> {
    let reps = representatives(worlds, constraints, &[query, given])?;
    LinearSystem::compile(&reps, constraints).conditional_bounds(query, given)
}
