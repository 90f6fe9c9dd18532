use std::collections::BTreeSet;

use crate::logic::{consistent_with, entails, models_in, WorldSet};

use super::DefaultTheory;

/// A Reiter extension, represented by the worlds of its deductive closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub believed: WorldSet,
    pub applied: BTreeSet<usize>,
}

fn closure(theory: &DefaultTheory, applied: impl IntoIterator<Item = usize>) -> WorldSet {
    let atoms = theory.vocab().len();
    applied.into_iter().fold(theory.background(), |acc, i| {
        acc.intersection(&models_in(&theory.defaults()[i].consequent, atoms))
    })
}

/// The applied set can be reached by firing rules one at a time, each with a
/// prerequisite already derivable from the facts and earlier conclusions.
fn grounded(theory: &DefaultTheory, applied: &BTreeSet<usize>) -> bool {
    let mut fired = BTreeSet::new();
    let mut current = theory.background();
    loop {
        let next = applied
            .iter()
            .copied()
            .find(|i| !fired.contains(i) && entails(&current, &theory.defaults()[*i].prerequisite));
        match next {
            Some(i) => {
                fired.insert(i);
                current = current.intersection(&models_in(
                    &theory.defaults()[i].consequent,
                    theory.vocab().len(),
                ));
            }
            None => return fired.len() == applied.len(),
        }
    }
}

/// Fixed-point check: consistent, grounded, every applied rule holds in the
/// closure, and a rule is applied exactly when its prerequisite is entailed and
/// its justification is consistent with the believed worlds.
pub fn is_extension(theory: &DefaultTheory, ext: &Extension) -> bool {
    if ext.believed.is_empty() || ext.believed != closure(theory, ext.applied.iter().copied()) {
        return false;
    }
    let fixed_point = theory.defaults().iter().enumerate().all(|(i, d)| {
        let applicable = entails(&ext.believed, &d.prerequisite)
            && consistent_with(&ext.believed, &d.justification);
        applicable == ext.applied.contains(&i)
    });
    fixed_point && grounded(theory, &ext.applied)
}

/// All extensions of a normal theory, ordered by their applied-rule bitmask.
pub fn compute_extensions(theory: &DefaultTheory) -> Vec<Extension> {
    let n = theory.defaults().len();
    let mut out: Vec<Extension> = Vec::new();
    for mask in 0u32..(1 << n) {
        let applied: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let believed = closure(theory, applied.iter().copied());
        let candidate = Extension { believed, applied };
        if is_extension(theory, &candidate) && !out.iter().any(|e| e.believed == candidate.believed)
        {
            out.push(candidate);
        }
    }
    out
}
