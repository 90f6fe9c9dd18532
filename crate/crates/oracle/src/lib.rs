//! Slow, obviously-correct reference computations for tests.
//!
//! Nothing here calls into the solver, the extension search or the policy
//! code under test; formulas are only evaluated world by world with
//! [`Formula::eval`].

use ipw_core::defaults::DefaultRule;
use ipw_core::logic::Formula;
use rand::Rng;

/// Outcome of a brute-force conditional bounds computation.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleBounds {
    Infeasible,
    ConditioningImpossible,
    Bounds { lo: f64, hi: f64 },
}

/// `P(target | given) ∈ [lo, hi]`, kept independent of the core constraint type.
#[derive(Debug, Clone)]
pub struct OracleConstraint {
    pub target: Formula,
    pub given: Formula,
    pub lo: f64,
    pub hi: f64,
}

const EPS: f64 = 1e-9;

/// Solves the square system `a x = b` by Gaussian elimination with partial pivoting.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        for row in 0..n {
            if row != col {
                let factor = a[row][col] / pivot_row[col];
                if factor != 0.0 {
                    for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                        *x -= factor * p;
                    }
                    b[row] -= factor * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of `{x >= 0, Σ x = 1, rows · x >= 0}` in `worlds.len()` dimensions.
pub fn polytope_vertices(dim: usize, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    // inequality k: either x_k >= 0 (k < dim) or rows[k - dim] · x >= 0
    let ineq = |k: usize| -> Vec<f64> {
        if k < dim {
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            e
        } else {
            rows[k - dim].clone()
        }
    };
    let total = dim + rows.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    combinations(total, dim - 1, |active| {
        let mut a = vec![vec![1.0; dim]];
        let mut b = vec![1.0];
        for &k in active {
            a.push(ineq(k));
            b.push(0.0);
        }
        let Some(x) = solve_square(a, b) else { return };
        let ok = (0..total).all(|k| {
            let g = ineq(k);
            g.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>() >= -EPS
        });
        if ok
            && !out
                .iter()
                .any(|v| v.iter().zip(&x).all(|(p, q)| (p - q).abs() < 1e-9))
        {
            out.push(x);
        }
    });
    out
}

/// Brute-force conditional bounds by enumerating polytope vertices.
///
/// The ratio `P(q ∧ g) / P(g)` over a point of the polytope is a weighted
/// average of its value at the vertices with `P(g) > 0`, so its extremes
/// are attained at such vertices.
pub fn vertex_bounds(
    worlds: &[usize],
    constraints: &[OracleConstraint],
    query: &Formula,
    given: &Formula,
) -> OracleBounds {
    if worlds.is_empty() {
        return OracleBounds::Infeasible;
    }
    let mut rows = Vec::new();
    for c in constraints {
        let joint: Vec<f64> = worlds
            .iter()
            .map(|&w| (c.target.eval(w) && c.given.eval(w)) as u8 as f64)
            .collect();
        let cond: Vec<f64> = worlds
            .iter()
            .map(|&w| c.given.eval(w) as u8 as f64)
            .collect();
        rows.push(joint.iter().zip(&cond).map(|(j, g)| j - c.lo * g).collect());
        rows.push(joint.iter().zip(&cond).map(|(j, g)| c.hi * g - j).collect());
    }
    let vertices = polytope_vertices(worlds.len(), &rows);
    if vertices.is_empty() {
        return OracleBounds::Infeasible;
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in &vertices {
        let pg: f64 = worlds
            .iter()
            .zip(v)
            .filter(|(w, _)| given.eval(**w))
            .map(|(_, x)| x)
            .sum();
        if pg <= 1e-9 {
            continue;
        }
        let pqg: f64 = worlds
            .iter()
            .zip(v)
            .filter(|(w, _)| given.eval(**w) && query.eval(**w))
            .map(|(_, x)| x)
            .sum();
        lo = lo.min(pqg / pg);
        hi = hi.max(pqg / pg);
    }
    if lo.is_infinite() {
        OracleBounds::ConditioningImpossible
    } else {
        OracleBounds::Bounds { lo, hi }
    }
}

/// Worlds of an `atoms`-atom space satisfying every formula.
pub fn satisfying(atoms: usize, formulas: &[Formula]) -> Vec<usize> {
    (0..1usize << atoms)
        .filter(|&w| formulas.iter().all(|f| f.eval(w)))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Extensions of a normal default theory by the operational definition:
/// for every ordering, fire the first rule whose prerequisite holds in every
/// current world and whose consequent holds in some, until none can fire.
/// Returns the distinct believed world lists, sorted.
pub fn greedy_extensions(
    atoms: usize,
    background: &[Formula],
    defaults: &[DefaultRule],
) -> Vec<Vec<usize>> {
    let start = satisfying(atoms, background);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for order in permutations(defaults.len()) {
        let mut current = start.clone();
        let mut fired = vec![false; defaults.len()];
        while let Some(&i) = order.iter().find(|&&i| {
            !fired[i]
                && current.iter().all(|&w| defaults[i].prerequisite.eval(w))
                && current.iter().any(|&w| defaults[i].consequent.eval(w))
        }) {
            fired[i] = true;
            current.retain(|&w| defaults[i].consequent.eval(w));
        }
        if !out.contains(&current) {
            out.push(current);
        }
    }
    out.sort();
    out
}

/// Random formula over `atoms` atoms with at most `depth` nested connectives.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: usize, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.05) {
            Formula::Const(rng.gen())
        } else {
            Formula::Atom(rng.gen_range(0..atoms))
        };
    }
    let l = random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..5) {
        0 => l.not(),
        1 => l.and(random_formula(rng, atoms, depth - 1)),
        2 => l.or(random_formula(rng, atoms, depth - 1)),
        3 => l.implies(random_formula(rng, atoms, depth - 1)),
        _ => l.iff(random_formula(rng, atoms, depth - 1)),
    }
}

/// A random literal.
pub fn random_literal<R: Rng>(rng: &mut R, atoms: usize) -> Formula {
    let a = Formula::Atom(rng.gen_range(0..atoms));
    if rng.gen_bool(0.5) {
        a
    } else {
        a.not()
    }
}

/// A small random credal query: constraints over at most 3 atoms, with
/// bounds on a grid of twentieths.
#[derive(Debug, Clone)]
pub struct RandomSystem {
    pub atoms: usize,
    pub axioms: Vec<Formula>,
    pub constraints: Vec<OracleConstraint>,
    pub query: Formula,
    pub given: Formula,
}

impl RandomSystem {
    pub fn worlds(&self) -> Vec<usize> {
        satisfying(self.atoms, &self.axioms)
    }

    pub fn oracle(&self) -> OracleBounds {
        vertex_bounds(&self.worlds(), &self.constraints, &self.query, &self.given)
    }
}

fn condition<R: Rng>(rng: &mut R, atoms: usize) -> Formula {
    if rng.gen_bool(0.5) {
        Formula::top()
    } else {
        random_formula(rng, atoms, 1)
    }
}

pub fn random_system<R: Rng>(rng: &mut R) -> RandomSystem {
    let atoms = rng.gen_range(1..=3);
    let axioms = if rng.gen_bool(0.3) {
        vec![random_formula(rng, atoms, 2)]
    } else {
        vec![]
    };
    let constraints = (0..rng.gen_range(1..=3))
        .map(|_| {
            let lo = rng.gen_range(0..=20);
            let hi = if rng.gen_bool(0.3) {
                lo
            } else {
                rng.gen_range(lo..=20)
            };
            OracleConstraint {
                target: random_formula(rng, atoms, 2),
                given: condition(rng, atoms),
                lo: lo as f64 / 20.0,
                hi: hi as f64 / 20.0,
            }
        })
        .collect();
    RandomSystem {
        atoms,
        axioms,
        constraints,
        query: random_formula(rng, atoms, 2),
        given: condition(rng, atoms),
    }
}

/// Parts of a random consistent normal default theory over 2 to 4 atoms.
#[derive(Debug, Clone)]
pub struct RandomTheory {
    pub atoms: usize,
    pub facts: Vec<Formula>,
    pub axioms: Vec<Formula>,
    pub defaults: Vec<DefaultRule>,
}

impl RandomTheory {
    pub fn background(&self) -> Vec<Formula> {
        self.facts.iter().chain(&self.axioms).cloned().collect()
    }
}

pub fn random_theory<R: Rng>(rng: &mut R, max_defaults: usize) -> RandomTheory {
    loop {
        let atoms = rng.gen_range(2..=4);
        let facts = (0..rng.gen_range(0..=2))
            .map(|_| random_formula(rng, atoms, 1))
            .collect();
        let axioms = (0..rng.gen_range(0..=2))
            .map(|_| random_formula(rng, atoms, 2))
            .collect();
        let defaults = (0..rng.gen_range(1..=max_defaults))
            .map(|_| {
                let pre = if rng.gen_bool(0.3) {
                    Formula::top()
                } else {
                    random_formula(rng, atoms, 1)
                };
                let cons = if rng.gen_bool(0.6) {
                    random_literal(rng, atoms)
                } else {
                    random_formula(rng, atoms, 1)
                };
                DefaultRule::normal(pre, cons)
            })
            .collect();
        let theory = RandomTheory {
            atoms,
            facts,
            axioms,
            defaults,
        };
        if !satisfying(atoms, &theory.background()).is_empty() {
            return theory;
        }
    }
}
