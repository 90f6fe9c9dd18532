use crate::logic::{Formula, WorldSet};
use crate::num::Scalar;

use super::{feasible, CredalConstraint, CredalError};

/// One expert's point judgments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpertAssessment<S> {
    pub expert: String,
    pub judgments: Vec<(Formula, S)>,
}

impl<S: Scalar> ExpertAssessment<S> {
    pub fn new(expert: impl Into<String>, judgments: Vec<(Formula, S)>) -> Self {
        ExpertAssessment {
            expert: expert.into(),
            judgments,
        }
    }

    pub fn constraints(&self) -> Result<Vec<CredalConstraint<S>>, CredalError> {
        self.judgments
            .iter()
            .map(|(f, p)| CredalConstraint::point(f.clone(), Formula::top(), p.clone()))
            .collect()
    }
}

/// Envelope of the experts' judgments: one `[min, max]` interval per
/// statement, taken over the experts that assessed it. Statements keep the
/// order of first appearance.
pub fn merge_experts<S: Scalar>(
    worlds: &WorldSet,
    assessments: &[ExpertAssessment<S>],
) -> Result<Vec<CredalConstraint<S>>, CredalError> {
    for a in assessments {
        let own = a.constraints()?;
        if !feasible(worlds, &own)? {
            return Err(CredalError::ExpertInfeasible(a.expert.clone()));
        }
    }
    let mut envelope: Vec<(Formula, S, S)> = Vec::new();
    for (f, p) in assessments.iter().flat_map(|a| &a.judgments) {
        match envelope.iter_mut().find(|(g, _, _)| g == f) {
            Some((_, lo, hi)) => {
                if *p < *lo {
                    *lo = p.clone();
                }
                if *p > *hi {
                    *hi = p.clone();
                }
            }
            None => envelope.push((f.clone(), p.clone(), p.clone())),
        }
    }
    envelope
        .into_iter()
        .map(|(f, lo, hi)| CredalConstraint::marginal(f, lo, hi))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credal::query_bounds;
    use crate::logic::{parse_formula, Vocabulary};

    fn v() -> Vocabulary {
        Vocabulary::new(["a", "b", "q"]).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse_formula(text, &v()).unwrap()
    }

    #[test]
    fn two_point_envelope() {
        let merged = merge_experts(
            &WorldSet::full(3),
            &[
                ExpertAssessment::new("e1", vec![(f("q"), 0.7)]),
                ExpertAssessment::new("e2", vec![(f("q"), 0.9)]),
            ],
        )
        .unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!((merged[0].lo, merged[0].hi), (0.7, 0.9));
    }

    #[test]
    fn single_expert_is_reproduced() {
        let e = ExpertAssessment::new("solo", vec![(f("a"), 0.8), (f("b"), 0.6)]);
        let merged = merge_experts(&WorldSet::full(3), std::slice::from_ref(&e)).unwrap();
        assert_eq!(merged, e.constraints().unwrap());
    }

    #[test]
    fn partial_coverage_uses_assessing_experts_only() {
        let merged = merge_experts(
            &WorldSet::full(3),
            &[
                ExpertAssessment::new("e1", vec![(f("a"), 0.8), (f("b"), 0.1)]),
                ExpertAssessment::new("e2", vec![(f("a"), 0.6)]),
            ],
        )
        .unwrap();
        assert_eq!((merged[0].lo, merged[0].hi), (0.6, 0.8));
        assert_eq!((merged[1].lo, merged[1].hi), (0.1, 0.1));
    }

    #[test]
    fn crossed_experts_stay_feasible() {
        let e1 = ExpertAssessment::new("e1", vec![(f("a"), 0.8), (f("b"), 0.6)]);
        let e2 = ExpertAssessment::new("e2", vec![(f("a"), 0.6), (f("b"), 0.8)]);
        let worlds = WorldSet::full(3);
        let merged = merge_experts(&worlds, &[e1.clone(), e2.clone()]).unwrap();
        assert_eq!((merged[0].lo, merged[0].hi), (0.6, 0.8));
        assert_eq!((merged[1].lo, merged[1].hi), (0.6, 0.8));
        // each expert's judgments, added as point constraints, remain consistent
        for e in [e1, e2] {
            let mut both = merged.clone();
            both.extend(e.constraints().unwrap());
            assert!(feasible(&worlds, &both).unwrap());
        }
        let ab = query_bounds(&worlds, &merged, &f("a & b"), &Formula::top()).unwrap();
        assert!(ab.lo <= 0.4 + 1e-9 && ab.hi >= 0.6 - 1e-9);
    }

    #[test]
    fn infeasible_expert_is_named() {
        let bad = ExpertAssessment::new("sloppy", vec![(f("a"), 0.3), (f("a & b"), 0.5)]);
        let err = merge_experts(&WorldSet::full(3), &[bad]).unwrap_err();
        assert_eq!(err, CredalError::ExpertInfeasible("sloppy".into()));
    }
}
