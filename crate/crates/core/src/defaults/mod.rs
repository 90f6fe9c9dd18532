//! Normal default theories: extension computation and justification audits.

mod audit;
mod extension;

pub use audit::{audit_rule, AuditConfig, AuditMode, AuditVerdict, Verdict};
pub use extension::{compute_extensions, is_extension, Extension};

use thiserror::Error;

use crate::credal::CredalError;
use crate::logic::{models, Formula, LogicError, Vocabulary, WorldSet};

/// Largest number of defaults accepted; extensions are found by subset enumeration.
pub const MAX_DEFAULTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DefaultError {
    #[error("default {index} is not normal: justification differs from consequent")]
    NotNormal { index: usize },
    #[error("facts and axioms are jointly unsatisfiable")]
    Inconsistent,
    #[error("{count} defaults exceed the cap of {}", MAX_DEFAULTS)]
    TooManyDefaults { count: usize },
    #[error("no default with index {0}")]
    NoSuchRule(usize),
    #[error("default {0} is not applied in any extension")]
    NotApplicable(usize),
    #[error("thresholds must lie strictly between 0 and 1")]
    InvalidThreshold,
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("audit constraints: {0}")]
    Credal(#[from] CredalError),
}

/// `prerequisite : justification / consequent`, restricted to normal rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefaultRule {
    pub prerequisite: Formula,
    pub justification: Formula,
    pub consequent: Formula,
}

impl DefaultRule {
    /// The normal rule `prerequisite : consequent / consequent`.
    pub fn normal(prerequisite: Formula, consequent: Formula) -> Self {
        DefaultRule {
            prerequisite,
            justification: consequent.clone(),
            consequent,
        }
    }

    pub fn is_normal(&self) -> bool {
        self.justification == self.consequent
    }

    pub fn relabel(&self, map: &impl Fn(usize) -> usize) -> Self {
        DefaultRule {
            prerequisite: self.prerequisite.relabel(map),
            justification: self.justification.relabel(map),
            consequent: self.consequent.relabel(map),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DefaultTheory {
    vocab: Vocabulary,
    facts: Vec<Formula>,
    axioms: Vec<Formula>,
    defaults: Vec<DefaultRule>,
}

impl DefaultTheory {
    pub fn new(
        vocab: Vocabulary,
        facts: Vec<Formula>,
        axioms: Vec<Formula>,
        defaults: Vec<DefaultRule>,
    ) -> Result<Self, DefaultError> {
        if defaults.len() > MAX_DEFAULTS {
            return Err(DefaultError::TooManyDefaults {
                count: defaults.len(),
            });
        }
        for f in facts.iter().chain(&axioms) {
            vocab.check(f)?;
        }
        for (index, d) in defaults.iter().enumerate() {
            vocab.check(&d.prerequisite)?;
            vocab.check(&d.consequent)?;
            if !d.is_normal() {
                return Err(DefaultError::NotNormal { index });
            }
        }
        let theory = DefaultTheory {
            vocab,
            facts,
            axioms,
            defaults,
        };
        if theory.background().is_empty() {
            return Err(DefaultError::Inconsistent);
        }
        Ok(theory)
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn facts(&self) -> &[Formula] {
        &self.facts
    }

    pub fn axioms(&self) -> &[Formula] {
        &self.axioms
    }

    pub fn defaults(&self) -> &[DefaultRule] {
        &self.defaults
    }

    /// Worlds allowed by the axioms alone.
    pub fn axiom_worlds(&self) -> WorldSet {
        models(
            &Formula::conjunction(self.axioms.iter().cloned()),
            &self.vocab,
        )
    }

    /// Worlds allowed by facts and axioms.
    pub fn background(&self) -> WorldSet {
        models(
            &Formula::conjunction(self.facts.iter().chain(&self.axioms).cloned()),
            &self.vocab,
        )
    }
}
