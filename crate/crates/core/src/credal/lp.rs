//! Dense two-phase tableau simplex with Bland's rule, generic over [`Scalar`].
//!
//! With [`BigRational`](num_rational::BigRational) every pivot is exact and
//! Bland's rule guarantees termination. With `f64` sign tests use the type's
//! tolerance.

use crate::num::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Row<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

impl<S: Scalar> Row<S> {
    pub fn new(coeffs: Vec<S>, relation: Relation, rhs: S) -> Self {
        Row {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<S> {
    Optimal { value: S, point: Vec<S> },
    Infeasible,
    Unbounded,
    IterationLimit,
}

const MAX_PIVOTS: usize = 100_000;

struct Tableau<S> {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    cells: Vec<Vec<S>>,
    /// Reduced costs, last entry is minus the objective value.
    objective: Vec<S>,
    basis: Vec<usize>,
    cols: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Limit,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.cells[row][col].clone();
        for v in self.cells[row].iter_mut() {
            *v = v.clone() / pivot.clone();
        }
        let pivot_row = self.cells[row].clone();
        let eliminate = |target: &mut Vec<S>| {
            let factor = target[col].clone();
            if factor.is_zero() {
                return;
            }
            for (t, p) in target.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *t = t.clone() - factor.clone() * p.clone();
                }
            }
        };
        for (i, r) in self.cells.iter_mut().enumerate() {
            if i != row {
                eliminate(r);
            }
        }
        eliminate(&mut self.objective);
        self.basis[row] = col;
    }

    /// Runs simplex iterations over columns `< allowed` until optimal.
    fn run(&mut self, allowed: usize) -> Step {
        for _ in 0..MAX_PIVOTS {
            let Some(col) = (0..allowed).find(|&j| self.objective[j].is_neg()) else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, S)> = None;
            for (i, r) in self.cells.iter().enumerate() {
                if !r[col].is_pos() {
                    continue;
                }
                let ratio = r[self.cols].clone() / r[col].clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let diff = ratio.clone() - br.clone();
                        if diff.is_neg() || (diff.is_negligible() && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Step::Unbounded,
            }
        }
        Step::Limit
    }
}

/// Optimizes `objective · x` subject to `rows` and `x >= 0`.
pub fn solve<S: Scalar>(vars: usize, rows: &[Row<S>], objective: &[S], sense: Sense) -> Outcome<S> {
    assert_eq!(objective.len(), vars);
    let slacks = rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let m = rows.len();
    let artificial_start = vars + slacks;
    let cols = artificial_start + m;

    let mut cells = Vec::with_capacity(m);
    let mut slack = vars;
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.coeffs.len(), vars);
        let mut cells_row = vec![S::zero(); cols + 1];
        cells_row[..vars].clone_from_slice(&row.coeffs);
        match row.relation {
            Relation::Ge => {
                cells_row[slack] = -S::one();
                slack += 1;
            }
            Relation::Le => {
                cells_row[slack] = S::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        cells_row[cols] = row.rhs.clone();
        if row.rhs.is_negative() {
            for v in cells_row.iter_mut() {
                *v = -v.clone();
            }
        }
        cells_row[artificial_start + i] = S::one();
        cells.push(cells_row);
    }

    // phase 1: minimize the sum of artificials
    let mut phase1 = vec![S::zero(); cols + 1];
    for r in &cells {
        for j in 0..artificial_start {
            phase1[j] = phase1[j].clone() - r[j].clone();
        }
        phase1[cols] = phase1[cols].clone() - r[cols].clone();
    }
    let mut tab = Tableau {
        cells,
        objective: phase1,
        basis: (artificial_start..cols).collect(),
        cols,
    };
    match tab.run(artificial_start) {
        Step::Optimal => {}
        Step::Limit => return Outcome::IterationLimit,
        Step::Unbounded => unreachable!("phase one objective is bounded below"),
    }
    if (-tab.objective[cols].clone()).is_pos() {
        return Outcome::Infeasible;
    }

    // drive remaining artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.cells.len() {
        if tab.basis[i] >= artificial_start {
            match (0..artificial_start).find(|&j| !tab.cells[i][j].is_negligible()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.cells.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // phase 2
    let cost = |j: usize| -> S {
        if j < vars {
            match sense {
                Sense::Minimize => objective[j].clone(),
                Sense::Maximize => -objective[j].clone(),
            }
        } else {
            S::zero()
        }
    };
    let mut reduced = vec![S::zero(); cols + 1];
    for (j, r) in reduced.iter_mut().enumerate().take(artificial_start) {
        *r = cost(j);
    }
    for (row, &b) in tab.cells.iter().zip(&tab.basis) {
        let cb = cost(b);
        if cb.is_zero() {
            continue;
        }
        for j in 0..artificial_start {
            reduced[j] = reduced[j].clone() - cb.clone() * row[j].clone();
        }
        reduced[cols] = reduced[cols].clone() - cb.clone() * row[cols].clone();
    }
    tab.objective = reduced;
    match tab.run(artificial_start) {
        Step::Optimal => {}
        Step::Unbounded => return Outcome::Unbounded,
        Step::Limit => return Outcome::IterationLimit,
    }

    let mut point = vec![S::zero(); vars];
    for (row, &b) in tab.cells.iter().zip(&tab.basis) {
        if b < vars {
            point[b] = row[cols].clone();
        }
    }
    let value = point
        .iter()
        .zip(objective)
        .fold(S::zero(), |acc, (x, c)| acc + x.clone() * c.clone());
    Outcome::Optimal { value, point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let rows = vec![
            Row::new(vec![1.0f64, 0.0], Relation::Le, 4.0),
            Row::new(vec![0.0, 2.0], Relation::Le, 12.0),
            Row::new(vec![3.0, 2.0], Relation::Le, 18.0),
        ];
        match solve(2, &rows, &[3.0, 5.0], Sense::Maximize) {
            Outcome::Optimal { value, point } => {
                assert!((value - 36.0).abs() < 1e-9);
                assert!((point[0] - 2.0).abs() < 1e-9 && (point[1] - 6.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_minimum_with_equalities() {
        // min x + 2y st x + y = 1, x >= 1/3 -> 1/3 + 4/3 = ... x = 1, y = 0 -> 1
        let rows = vec![
            Row::new(vec![r(1, 1), r(1, 1)], Relation::Eq, r(1, 1)),
            Row::new(vec![r(1, 1), r(0, 1)], Relation::Ge, r(1, 3)),
        ];
        match solve(2, &rows, &[r(1, 1), r(2, 1)], Sense::Minimize) {
            Outcome::Optimal { value, .. } => assert_eq!(value, r(1, 1)),
            other => panic!("{other:?}"),
        }
        match solve(2, &rows, &[r(1, 1), r(2, 1)], Sense::Maximize) {
            Outcome::Optimal { value, .. } => assert_eq!(value, r(5, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let rows = vec![
            Row::new(vec![1.0f64], Relation::Ge, 2.0),
            Row::new(vec![1.0], Relation::Le, 1.0),
        ];
        assert_eq!(
            solve(1, &rows, &[1.0], Sense::Minimize),
            Outcome::Infeasible
        );
        let rows = vec![Row::new(vec![1.0f64, -1.0], Relation::Ge, 0.0)];
        assert_eq!(
            solve(2, &rows, &[1.0, 0.0], Sense::Maximize),
            Outcome::Unbounded
        );
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let rows = vec![
            Row::new(vec![r(1, 1), r(1, 1)], Relation::Eq, r(1, 1)),
            Row::new(vec![r(2, 1), r(2, 1)], Relation::Eq, r(2, 1)),
        ];
        match solve(2, &rows, &[r(1, 1), r(0, 1)], Sense::Maximize) {
            Outcome::Optimal { value, .. } => assert_eq!(value, r(1, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        // -x <= -2  (x >= 2), min x -> 2
        let rows = vec![Row::new(vec![-1.0f64], Relation::Le, -2.0)];
        match solve(1, &rows, &[1.0], Sense::Minimize) {
            Outcome::Optimal { value, .. } => assert!((value - 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }
}
