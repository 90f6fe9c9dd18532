use fixedbitset::FixedBitSet;

use super::{Formula, Vocabulary};

/// A truth assignment, encoded as an index whose bit `i` is the value of atom `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct World(pub usize);

impl World {
    pub fn value(self, atom: usize) -> bool {
        (self.0 >> atom) & 1 == 1
    }
}

/// Dense set of worlds over a vocabulary of `atoms` atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WorldSet {
    atoms: usize,
    bits: FixedBitSet,
}

impl WorldSet {
    pub fn empty(atoms: usize) -> Self {
        WorldSet {
            atoms,
            bits: FixedBitSet::with_capacity(1 << atoms),
        }
    }

    pub fn full(atoms: usize) -> Self {
        let mut set = Self::empty(atoms);
        set.bits.insert_range(..);
        set
    }

    pub fn from_worlds<I: IntoIterator<Item = usize>>(atoms: usize, worlds: I) -> Self {
        let mut set = Self::empty(atoms);
        for w in worlds {
            set.insert(World(w));
        }
        set
    }

    /// Worlds where `atom` is true.
    fn atom_pattern(atoms: usize, atom: usize) -> Self {
        let mut set = Self::empty(atoms);
        let block = 1usize << atom;
        let mut start = block;
        while start < (1 << atoms) {
            set.bits.insert_range(start..start + block);
            start += 2 * block;
        }
        set
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, world: World) -> bool {
        self.bits.contains(world.0)
    }

    pub fn insert(&mut self, world: World) {
        assert!(world.0 < (1 << self.atoms), "world index out of range");
        self.bits.insert(world.0);
    }

    pub fn iter(&self) -> impl Iterator<Item = World> + '_ {
        self.bits.ones().map(World)
    }

    fn same_space(&self, other: &WorldSet) {
        assert_eq!(
            self.atoms, other.atoms,
            "world sets over different vocabularies"
        );
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        self.same_space(other);
        WorldSet {
            atoms: self.atoms,
            bits: &self.bits & &other.bits,
        }
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        self.same_space(other);
        WorldSet {
            atoms: self.atoms,
            bits: &self.bits | &other.bits,
        }
    }

    /// Complement within all `2^n` worlds.
    pub fn complement(&self) -> WorldSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        WorldSet {
            atoms: self.atoms,
            bits,
        }
    }

    pub fn difference(&self, other: &WorldSet) -> WorldSet {
        self.same_space(other);
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        WorldSet {
            atoms: self.atoms,
            bits,
        }
    }

    pub fn intersection_count(&self, other: &WorldSet) -> usize {
        self.same_space(other);
        self.bits.intersection_count(&other.bits)
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.same_space(other);
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &WorldSet) -> bool {
        self.same_space(other);
        self.bits.is_disjoint(&other.bits)
    }
}

/// Satisfying assignments of `f` over the `atoms`-atom space.
///
/// Panics if `f` references an atom index `>= atoms`.
pub fn models_in(f: &Formula, atoms: usize) -> WorldSet {
    match f {
        Formula::Const(true) => WorldSet::full(atoms),
        Formula::Const(false) => WorldSet::empty(atoms),
        Formula::Atom(i) => {
            assert!(
                *i < atoms,
                "atom index {i} outside a {atoms}-atom vocabulary"
            );
            WorldSet::atom_pattern(atoms, *i)
        }
        Formula::Not(g) => models_in(g, atoms).complement(),
        Formula::And(l, r) => models_in(l, atoms).intersection(&models_in(r, atoms)),
        Formula::Or(l, r) => models_in(l, atoms).union(&models_in(r, atoms)),
        Formula::Implies(l, r) => models_in(l, atoms).complement().union(&models_in(r, atoms)),
        Formula::Iff(l, r) => {
            let (l, r) = (models_in(l, atoms), models_in(r, atoms));
            l.intersection(&r)
                .union(&l.complement().intersection(&r.complement()))
        }
    }
}

/// The worlds of `vocab` that satisfy `f`.
pub fn models(f: &Formula, vocab: &Vocabulary) -> WorldSet {
    models_in(f, vocab.len())
}

/// `|models(f) ∩ within|`.
pub fn count_models(f: &Formula, within: &WorldSet) -> usize {
    models_in(f, within.atom_count()).intersection_count(within)
}

/// Every world of `within` satisfies `f` (vacuously true when `within` is empty).
pub fn entails(within: &WorldSet, f: &Formula) -> bool {
    within.is_subset(&models_in(f, within.atom_count()))
}

/// Some world of `within` satisfies `f`.
pub fn consistent_with(within: &WorldSet, f: &Formula) -> bool {
    !within.is_disjoint(&models_in(f, within.atom_count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn v(names: &[&str]) -> Vocabulary {
        Vocabulary::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn implication_has_three_models() {
        let vocab = v(&["a", "b"]);
        let w = models(&parse_formula("a -> b", &vocab).unwrap(), &vocab);
        assert_eq!(w.len(), 3);
        // {a,b}, {~a,b}, {~a,~b}; the missing world is a=1,b=0
        assert!(!w.contains(World(0b01)));
    }

    #[test]
    fn tautology_and_contradiction() {
        let vocab = v(&["a"]);
        assert_eq!(models(&Formula::top(), &vocab).len(), 2);
        let contra = parse_formula("a & !a", &vocab).unwrap();
        assert!(models(&contra, &vocab).is_empty());
    }

    #[test]
    fn counting_under_axiom() {
        let vocab = v(&["a", "b"]);
        let w = models(&parse_formula("a -> b", &vocab).unwrap(), &vocab);
        assert_eq!(count_models(&vocab.atom("b").unwrap(), &w), 2);
        assert_eq!(count_models(&vocab.atom("a").unwrap(), &w), 1);
        assert_eq!(count_models(&Formula::top(), &w), w.len());
    }

    #[test]
    fn entailment() {
        let vocab = v(&["a", "b", "c", "d"]);
        let w = models(&parse_formula("c & (c -> a)", &vocab).unwrap(), &vocab);
        assert!(entails(&w, &vocab.atom("a").unwrap()));
        assert!(entails(&w, &Formula::top()));
        let disj = models(&parse_formula("a | b", &vocab).unwrap(), &vocab);
        assert!(!entails(&disj, &vocab.atom("a").unwrap()));
        assert!(entails(&WorldSet::empty(4), &Formula::bottom()));
    }

    #[test]
    fn atom_patterns_match_eval() {
        for atoms in 1..=6 {
            for i in 0..atoms {
                let set = models_in(&Formula::Atom(i), atoms);
                for w in 0..(1 << atoms) {
                    assert_eq!(set.contains(World(w)), Formula::Atom(i).eval(w));
                }
            }
        }
    }

    #[test]
    fn difference_keeps_space() {
        let a = WorldSet::full(3);
        let b = WorldSet::from_worlds(3, [0, 7]);
        let d = a.difference(&b);
        assert_eq!(d.len(), 6);
        assert_eq!(d.complement(), b);
    }
}
