use crate::credal::{query_bounds, CredalConstraint};
use crate::logic::{models_in, Formula, WorldSet};
use crate::num::{is_probability, Scalar};

use super::PolicyError;

/// Width below which a credal interval counts as a point value.
pub const POINT_TOLERANCE: f64 = 1e-6;

/// Mutually exclusive, exhaustive sentences with point probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<S> {
    cells: Vec<(Formula, S)>,
}

impl<S: Scalar> Partition<S> {
    /// Checks probability ranges and that they sum to one. Disjointness and
    /// coverage depend on the world set and are checked at each use.
    pub fn new(cells: Vec<(Formula, S)>) -> Result<Self, PolicyError> {
        if cells.is_empty() {
            return Err(PolicyError::InvalidPartition("no cells".into()));
        }
        for (i, (_, p)) in cells.iter().enumerate() {
            if !is_probability(p) {
                return Err(PolicyError::InvalidPartition(format!(
                    "cell {i} has probability {p} outside [0, 1]"
                )));
            }
        }
        let total = cells.iter().fold(S::zero(), |acc, (_, p)| acc + p.clone());
        if !total.approx_eq(&S::one()) {
            return Err(PolicyError::InvalidPartition(format!(
                "cell probabilities sum to {total}, not 1"
            )));
        }
        Ok(Partition { cells })
    }

    /// The one-cell partition `{true: 1}`.
    pub fn trivial() -> Self {
        Partition {
            cells: vec![(Formula::top(), S::one())],
        }
    }

    pub fn cells(&self) -> &[(Formula, S)] {
        &self.cells
    }

    /// World sets of each cell within `worlds`, after checking the cells are
    /// non-empty, pairwise disjoint and jointly cover `worlds`.
    pub fn cells_on(&self, worlds: &WorldSet) -> Result<Vec<WorldSet>, PolicyError> {
        let atoms = worlds.atom_count();
        let mut covered = WorldSet::empty(atoms);
        let mut out = Vec::with_capacity(self.cells.len());
        for (i, (f, _)) in self.cells.iter().enumerate() {
            let cell = models_in(f, atoms).intersection(worlds);
            if cell.is_empty() {
                return Err(PolicyError::InvalidPartition(format!(
                    "cell {i} is empty on the admissible worlds"
                )));
            }
            if !cell.is_disjoint(&covered) {
                return Err(PolicyError::InvalidPartition(format!(
                    "cell {i} overlaps an earlier cell"
                )));
            }
            covered = covered.union(&cell);
            out.push(cell);
        }
        if covered != *worlds {
            return Err(PolicyError::InvalidPartition(
                "cells do not cover the admissible worlds".into(),
            ));
        }
        Ok(out)
    }
}

/// `Σ_i c(q | r_i) p_i`, where `c(q | r_i)` is the fraction of the admissible
/// worlds in cell `r_i` that satisfy `q`.
pub fn reliable_belief<S: Scalar>(
    worlds: &WorldSet,
    partition: &Partition<S>,
    q: &Formula,
) -> Result<S, PolicyError> {
    let cells = partition.cells_on(worlds)?;
    let q_worlds = models_in(q, worlds.atom_count());
    Ok(cells
        .iter()
        .zip(partition.cells())
        .fold(S::zero(), |acc, (cell, (_, p))| {
            let within =
                S::from_ratio(cell.intersection_count(&q_worlds) as u64, cell.len() as u64);
            acc + within * p.clone()
        }))
}

/// Point-probability policy: the value of `P(q)` when the constraints pin it
/// down, an error otherwise.
pub fn point_belief<S: Scalar>(
    worlds: &WorldSet,
    constraints: &[CredalConstraint<S>],
    q: &Formula,
) -> Result<S, PolicyError> {
    let bounds = query_bounds(worlds, constraints, q, &Formula::top())?;
    if bounds.width().to_f64_lossy() > POINT_TOLERANCE {
        return Err(PolicyError::NotPointValued {
            lo: bounds.lo.to_f64_lossy(),
            hi: bounds.hi.to_f64_lossy(),
        });
    }
    Ok(bounds.lo)
}
