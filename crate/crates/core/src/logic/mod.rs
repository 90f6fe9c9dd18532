//! Propositional formulas and their possible-worlds semantics.

mod formula;
mod parse;
mod worlds;

pub use formula::{DisplayFormula, Formula, Vocabulary, MAX_ATOMS};
pub use parse::{parse_formula, parse_formula_prefix, ParseError};
pub use worlds::{consistent_with, count_models, entails, models, models_in, World, WorldSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("vocabulary must declare at least one atom")]
    EmptyVocabulary,
    #[error("`{0}` is not a valid atom name")]
    InvalidAtomName(String),
    #[error("atom `{0}` declared twice")]
    DuplicateAtom(String),
    #[error("vocabulary of {requested} atoms exceeds the cap of {}", MAX_ATOMS)]
    TooManyAtoms { requested: usize },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("atom index {index} outside a vocabulary of {size} atoms")]
    AtomOutOfRange { index: usize, size: usize },
}
