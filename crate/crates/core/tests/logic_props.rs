use ipw_core::logic::{
    consistent_with, count_models, entails, models_in, parse_formula, Formula, Vocabulary, WorldSet,
};
use proptest::prelude::*;

const ATOMS: usize = 4;

fn vocab() -> Vocabulary {
    Vocabulary::new(["a", "b", "c", "d"]).unwrap()
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        6 => (0..ATOMS).prop_map(Formula::Atom),
        1 => any::<bool>().prop_map(Formula::Const),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.and(r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.or(r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.implies(r)),
            (inner.clone(), inner).prop_map(|(l, r)| l.iff(r)),
        ]
    })
}

fn world_set() -> impl Strategy<Value = WorldSet> {
    proptest::collection::vec(any::<bool>(), 1 << ATOMS).prop_map(|bits| {
        WorldSet::from_worlds(
            ATOMS,
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(w, _)| w),
        )
    })
}

/// Truth table computed world by world.
fn table(f: &Formula) -> Vec<bool> {
    (0..1 << ATOMS).map(|w| f.eval(w)).collect()
}

fn set_table(s: &WorldSet) -> Vec<bool> {
    let mut out = vec![false; 1 << ATOMS];
    for w in s.iter() {
        out[w.0] = true;
    }
    out
}

proptest! {
    #[test]
    fn models_agree_with_evaluation(f in formula()) {
        prop_assert_eq!(set_table(&models_in(&f, ATOMS)), table(&f));
    }

    #[test]
    fn connectives_are_set_operations(f in formula(), g in formula()) {
        let mf = models_in(&f, ATOMS);
        let mg = models_in(&g, ATOMS);
        prop_assert_eq!(models_in(&f.clone().not(), ATOMS), mf.complement());
        prop_assert_eq!(models_in(&f.clone().and(g.clone()), ATOMS), mf.intersection(&mg));
        prop_assert_eq!(models_in(&f.clone().or(g.clone()), ATOMS), mf.union(&mg));
        prop_assert_eq!(
            models_in(&f.clone().implies(g.clone()), ATOMS),
            mf.complement().union(&mg)
        );
        let both = mf.intersection(&mg);
        let neither = mf.complement().intersection(&mg.complement());
        prop_assert_eq!(models_in(&f.iff(g), ATOMS), both.union(&neither));
    }

    #[test]
    fn render_parse_round_trip(f in formula()) {
        let v = vocab();
        let text = f.render(&v);
        let back = parse_formula(&text, &v).unwrap();
        prop_assert_eq!(&back, &f, "rendered as {}", text);
        prop_assert_eq!(back.render(&v), text);
    }

    #[test]
    fn counts_are_monotone(f in formula(), g in formula(), w in world_set()) {
        let fg = f.clone().and(g.clone());
        prop_assert!(count_models(&fg, &w) <= count_models(&f, &w));
        prop_assert!(count_models(&f, &w) <= count_models(&f.clone().or(g), &w));
        prop_assert_eq!(
            count_models(&f, &w) + count_models(&f.clone().not(), &w),
            w.len()
        );
    }

    #[test]
    fn entailment_is_inconsistency_of_negation(f in formula(), w in world_set()) {
        prop_assert_eq!(entails(&w, &f), !consistent_with(&w, &f.clone().not()));
        prop_assert_eq!(entails(&w, &f), w.is_subset(&models_in(&f, ATOMS)));
    }

    #[test]
    fn set_algebra_laws(x in world_set(), y in world_set()) {
        prop_assert_eq!(x.union(&y).complement(), x.complement().intersection(&y.complement()));
        prop_assert_eq!(x.difference(&y), x.intersection(&y.complement()));
        prop_assert_eq!(x.intersection_count(&y), x.intersection(&y).len());
        prop_assert_eq!(x.is_disjoint(&y), x.intersection(&y).is_empty());
    }
}
