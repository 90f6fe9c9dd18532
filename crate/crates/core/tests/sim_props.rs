use ipw_core::sim::{
    reliability_audit, run_two_experts, sample_domain, statement_tally, ExpertPolicy,
    PartitionSource, ReliabilityAuditConfig, TwoExpertsConfig,
};
use proptest::prelude::*;

fn audit_config(
    seed: u64,
    trials: u64,
    atoms: usize,
    source: PartitionSource,
) -> ReliabilityAuditConfig {
    ReliabilityAuditConfig {
        trials,
        seed,
        atoms,
        source,
        ..ReliabilityAuditConfig::default()
    }
}

fn source() -> impl Strategy<Value = PartitionSource> {
    prop_oneof![
        Just(PartitionSource::None),
        Just(PartitionSource::SingleMarginal)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn audit_is_thread_independent(
        seed in any::<u64>(),
        trials in 1u64..2500,
        atoms in 1usize..=4,
        source in source(),
    ) {
        let cfg = audit_config(seed, trials, atoms, source);
        let par = reliability_audit(&cfg).unwrap();
        let seq = reliability_audit(&ReliabilityAuditConfig { parallel: false, ..cfg.clone() }).unwrap();
        prop_assert_eq!(&par, &seq);
        prop_assert_eq!(par, reliability_audit(&cfg).unwrap());
    }

    #[test]
    fn experts_are_thread_independent(
        seed in any::<u64>(),
        trials in 1u64..5000,
        redundancy in 0.0f64..=1.0,
    ) {
        let cfg = TwoExpertsConfig { trials, seed, redundancy, ..TwoExpertsConfig::default() };
        let par = run_two_experts(&cfg).unwrap();
        let seq = run_two_experts(&TwoExpertsConfig { parallel: false, ..cfg.clone() }).unwrap();
        prop_assert_eq!(&par, &seq);
        prop_assert_eq!(par, run_two_experts(&cfg).unwrap());
    }
}

proptest! {
    #[test]
    fn sampled_domains_are_well_formed(
        seed in any::<u64>(),
        trial in 0u64..10_000,
        atoms in 1usize..=4,
        source in source(),
    ) {
        let d = sample_domain(&audit_config(seed, 1, atoms, source), trial);
        prop_assert!(d.worlds.contains(d.true_world));
        let mut covered = 0;
        let mut mass = 0.0;
        for (cell, p) in &d.cells {
            prop_assert!(!cell.is_empty());
            prop_assert!(cell.is_subset(&d.worlds));
            prop_assert!((0.0..=1.0).contains(p));
            covered += cell.len();
            mass += p;
        }
        prop_assert_eq!(covered, d.worlds.len());
        prop_assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tally_counts_every_subset(
        seed in any::<u64>(),
        trial in 0u64..10_000,
        atoms in 1usize..=4,
        source in source(),
    ) {
        let d = sample_domain(&audit_config(seed, 1, atoms, source), trial);
        let n = d.worlds.len() as u32;
        let tally = statement_tally(&d);
        prop_assert_eq!(tally.iter().map(|c| c.count).sum::<u64>(), 1u64 << n);
        // exactly half of all subsets contain the true world
        prop_assert_eq!(tally.iter().map(|c| c.true_count).sum::<u64>(), 1u64 << (n - 1));
    }

    /// Without a partition a statement with k of n worlds holds in exactly
    /// k/n of its subsets, so the ratio is calibrated trial by trial.
    #[test]
    fn ratio_classes_are_exactly_calibrated(
        seed in any::<u64>(),
        trial in 0u64..10_000,
        atoms in 1usize..=4,
    ) {
        let d = sample_domain(&audit_config(seed, 1, atoms, PartitionSource::None), trial);
        let n = d.worlds.len() as u64;
        for class in statement_tally(&d) {
            let k = class.per_cell[0] as u64;
            prop_assert_eq!(class.true_count * n, class.count * k);
            prop_assert!((class.belief - k as f64 / n as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn fusion_beats_single_expert_when_independent() {
    let cfg = TwoExpertsConfig {
        trials: 20_000,
        seed: 3,
        ..TwoExpertsConfig::default()
    };
    let r = run_two_experts(&cfg).unwrap();
    let fused = r[&ExpertPolicy::IndependentFusion].brier;
    let single = r[&ExpertPolicy::FollowExpert1].brier;
    assert!(fused <= single, "{fused} > {single}");
}

#[test]
fn seeds_change_the_draws() {
    let a = reliability_audit(&audit_config(1, 500, 3, PartitionSource::SingleMarginal)).unwrap();
    let b = reliability_audit(&audit_config(2, 500, 3, PartitionSource::SingleMarginal)).unwrap();
    assert_ne!(a, b);
}
