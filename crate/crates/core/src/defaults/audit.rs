//! Probabilistic audit of a default rule's justification.
//!
//! Each default `α : β / β` is read as a lower bound `P(β | context) >= τ`.
//! A rule is provably irrelevant when the remaining rules' bounds, the axioms
//! and the current evidence already cap `P(β | evidence)` below the belief
//! threshold, whatever value the rule's own justification takes.
//!
//! In the standard reading the context is the prerequisite itself. In the
//! introspective reading it is the agent's own belief state: fresh atoms
//! `L(φ)` stand for "φ is believed", and the rule is read as
//! `P(β | L(α) ∧ ¬L(¬β)) >= τ`. The modal atoms are not linked to the
//! object atoms they name.

use serde::Serialize;

use crate::credal::{query_bounds, CredalConstraint, CredalError};
use crate::logic::{models_in, Formula};

use super::{compute_extensions, DefaultError, DefaultTheory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    Standard,
    Introspective,
}

impl AuditMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AuditMode::Standard => "standard",
            AuditMode::Introspective => "introspective",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ProvablyIrrelevant,
    NotProvablyIrrelevant,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ProvablyIrrelevant => "provably_irrelevant",
            Verdict::NotProvablyIrrelevant => "not_provably_irrelevant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConfig {
    /// Lower bound each default asserts for its conclusion.
    pub tau_justify: f64,
    /// Probability a conclusion must be able to reach to be believable.
    pub tau_believe: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            tau_justify: 0.9,
            tau_believe: 0.9,
        }
    }
}

impl AuditConfig {
    pub fn new(tau_justify: f64, tau_believe: f64) -> Result<Self, DefaultError> {
        let open_unit = |t: f64| t > 0.0 && t < 1.0;
        if !open_unit(tau_justify) || !open_unit(tau_believe) {
            return Err(DefaultError::InvalidThreshold);
        }
        Ok(AuditConfig {
            tau_justify,
            tau_believe,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditVerdict {
    pub rule: usize,
    pub mode: AuditMode,
    pub verdict: Verdict,
    /// Largest derivable `P(consequent | evidence)`.
    pub upper_bound: f64,
    /// The conditioning event, rendered.
    pub evidence: String,
}

/// Object plus modal atoms enumerated by the introspective audit.
const MAX_INTROSPECTIVE_ATOMS: usize = 22;

/// Modal atoms appended to the theory's vocabulary.
struct Introspection {
    believed: Vec<Formula>,
    base: usize,
}

impl Introspection {
    fn new(theory: &DefaultTheory) -> Self {
        let mut believed: Vec<Formula> = Vec::new();
        let candidates = theory
            .facts()
            .iter()
            .cloned()
            .chain(theory.defaults().iter().map(|d| d.prerequisite.clone()))
            .chain(theory.defaults().iter().map(|d| d.consequent.clone().not()));
        for f in candidates {
            if !believed.contains(&f) {
                believed.push(f);
            }
        }
        Introspection {
            believed,
            base: theory.vocab().len(),
        }
    }

    /// Atom for "`f` is believed".
    fn l(&self, f: &Formula) -> Formula {
        let k = self
            .believed
            .iter()
            .position(|g| g == f)
            .expect("modal atom registered");
        Formula::Atom(self.base + k)
    }

    fn atoms(&self) -> usize {
        self.base + self.believed.len()
    }
}

/// Audits default `rule` of `theory` under `mode`.
pub fn audit_rule(
    theory: &DefaultTheory,
    rule: usize,
    mode: AuditMode,
    config: &AuditConfig,
) -> Result<AuditVerdict, DefaultError> {
    let target = theory
        .defaults()
        .get(rule)
        .ok_or(DefaultError::NoSuchRule(rule))?;
    if !compute_extensions(theory)
        .iter()
        .any(|e| e.applied.contains(&rule))
    {
        return Err(DefaultError::NotApplicable(rule));
    }
    let vocab = theory.vocab();
    let others = theory
        .defaults()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != rule)
        .map(|(_, d)| d);

    let (worlds, constraints, evidence, evidence_text) = match mode {
        AuditMode::Standard => {
            let constraints = others
                .map(|d| {
                    CredalConstraint::at_least(
                        d.consequent.clone(),
                        d.prerequisite.clone(),
                        config.tau_justify,
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            let evidence = Formula::conjunction(theory.facts().iter().cloned());
            let text = evidence.render(vocab);
            (theory.axiom_worlds(), constraints, evidence, text)
        }
        AuditMode::Introspective => {
            let modal = Introspection::new(theory);
            if modal.atoms() > MAX_INTROSPECTIVE_ATOMS {
                return Err(CredalError::TooManyWorlds {
                    count: 1 << modal.atoms(),
                }
                .into());
            }
            let context = |pre: &Formula, cons: &Formula| {
                modal.l(pre).and(modal.l(&cons.clone().not()).not())
            };
            let constraints = others
                .map(|d| {
                    CredalConstraint::at_least(
                        d.consequent.clone(),
                        context(&d.prerequisite, &d.consequent),
                        config.tau_justify,
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut parts: Vec<Formula> = theory.facts().iter().map(|f| modal.l(f)).collect();
            let mut text: Vec<String> = theory
                .facts()
                .iter()
                .map(|f| format!("L({})", f.render(vocab)))
                .collect();
            parts.push(context(&target.prerequisite, &target.consequent));
            if !theory.facts().contains(&target.prerequisite) {
                text.push(format!("L({})", target.prerequisite.render(vocab)));
            }
            text.push(format!(
                "!L({})",
                target.consequent.clone().not().render(vocab)
            ));
            let axioms = Formula::conjunction(theory.axioms().iter().cloned());
            (
                models_in(&axioms, modal.atoms()),
                constraints,
                Formula::conjunction(parts),
                text.join(" & "),
            )
        }
    };

    let bounds = query_bounds(&worlds, &constraints, &target.consequent, &evidence)?;
    let verdict = if bounds.hi < config.tau_believe {
        Verdict::ProvablyIrrelevant
    } else {
        Verdict::NotProvablyIrrelevant
    };
    Ok(AuditVerdict {
        rule,
        mode,
        verdict,
        upper_bound: bounds.hi,
        evidence: evidence_text,
    })
}
