use num_bigint::BigInt;
use num_rational::BigRational;

use crate::logic::{count_models, models, Formula, LogicError, Vocabulary, WorldSet, MAX_ATOMS};

use super::PolicyError;

/// Fraction of the worlds in `worlds` that satisfy `q`, exactly.
pub fn possibility_ratio(worlds: &WorldSet, q: &Formula) -> Result<BigRational, PolicyError> {
    if worlds.is_empty() {
        return Err(PolicyError::UndefinedRatio);
    }
    Ok(BigRational::new(
        BigInt::from(count_models(q, worlds)),
        BigInt::from(worlds.len()),
    ))
}

/// Causal-chain learner over a target atom.
///
/// Each observation of the target adds one deterministic rule to a chain
/// `b -> a`, `c -> b`, `d -> c`, ... and the belief in the target is its
/// possibility ratio under the rules so far.
#[derive(Debug, Clone)]
pub struct InductionState {
    vocab: Vocabulary,
    causes: usize,
    chain: Vec<Formula>,
}

const ATOM_NAMES: &str = "abcdefghijklmnopqrstuvwxyz";

impl InductionState {
    /// Target `a`, then `causes` candidate-cause atoms, then `free` unrelated atoms.
    pub fn new(causes: usize, free: usize) -> Result<Self, PolicyError> {
        let total = 1 + causes + free;
        if total > MAX_ATOMS {
            return Err(LogicError::TooManyAtoms { requested: total }.into());
        }
        let names = ATOM_NAMES.chars().take(total).map(String::from);
        Ok(InductionState {
            vocab: Vocabulary::new(names)?,
            causes,
            chain: Vec::new(),
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn target(&self) -> Formula {
        Formula::Atom(0)
    }

    pub fn observations(&self) -> usize {
        self.chain.len()
    }

    pub fn chain(&self) -> &[Formula] {
        &self.chain
    }

    /// Records one more occurrence of the target by positing the next cause.
    pub fn observe(&mut self) -> Result<(), PolicyError> {
        let n = self.chain.len();
        if n == self.causes {
            return Err(PolicyError::OutOfCauses {
                causes: self.causes,
            });
        }
        self.chain
            .push(Formula::Atom(n + 1).implies(Formula::Atom(n)));
        Ok(())
    }

    /// Worlds consistent with every rule in the chain.
    pub fn worlds(&self) -> WorldSet {
        models(
            &Formula::conjunction(self.chain.iter().cloned()),
            &self.vocab,
        )
    }

    pub fn belief(&self) -> BigRational {
        possibility_ratio(&self.worlds(), &self.target())
            .expect("a chain of implications is always satisfiable")
    }
}

/// Possibility ratio of the target after `0..=max_observations` observations,
/// with `free_atoms` unrelated atoms in the vocabulary.
pub fn laplace_sequence(
    max_observations: usize,
    free_atoms: usize,
) -> Result<Vec<BigRational>, PolicyError> {
    let mut state = InductionState::new(max_observations, free_atoms)?;
    let mut out = Vec::with_capacity(max_observations + 1);
    out.push(state.belief());
    for _ in 0..max_observations {
        state.observe()?;
        out.push(state.belief());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn implication_ratios() {
        let v = Vocabulary::new(["a", "b"]).unwrap();
        let w = models(&parse_formula("a -> b", &v).unwrap(), &v);
        assert_eq!(
            possibility_ratio(&w, &v.atom("b").unwrap()).unwrap(),
            r(2, 3)
        );
        assert_eq!(
            possibility_ratio(&w, &v.atom("a").unwrap()).unwrap(),
            r(1, 3)
        );
    }

    #[test]
    fn symmetric_single_atom() {
        let v = Vocabulary::new(["a"]).unwrap();
        assert_eq!(
            possibility_ratio(&WorldSet::full(1), &v.atom("a").unwrap()).unwrap(),
            r(1, 2)
        );
    }

    #[test]
    fn empty_world_set_has_no_ratio() {
        assert_eq!(
            possibility_ratio(&WorldSet::empty(2), &Formula::top()),
            Err(PolicyError::UndefinedRatio)
        );
    }

    #[test]
    fn four_atom_chain() {
        let mut s = InductionState::new(3, 0).unwrap();
        assert_eq!(s.worlds().len(), 16);
        assert_eq!(s.belief(), r(1, 2));
        s.observe().unwrap();
        assert_eq!(s.worlds().len(), 12);
        assert_eq!(s.belief(), r(2, 3));
        s.observe().unwrap();
        assert_eq!(s.belief(), r(3, 4));
        s.observe().unwrap();
        assert_eq!(s.belief(), r(4, 5));
        assert!(matches!(
            s.observe(),
            Err(PolicyError::OutOfCauses { causes: 3 })
        ));
    }

    #[test]
    fn chain_text() {
        let mut s = InductionState::new(2, 0).unwrap();
        s.observe().unwrap();
        s.observe().unwrap();
        let rendered: Vec<String> = s.chain().iter().map(|f| f.render(s.vocab())).collect();
        assert_eq!(rendered, ["b -> a", "c -> b"]);
    }

    #[test]
    fn vocabulary_cap_is_enforced() {
        assert!(laplace_sequence(15, 5).is_err());
        assert!(laplace_sequence(15, 4).is_ok());
    }
}
