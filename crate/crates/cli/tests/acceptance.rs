//! End-to-end acceptance checks, one line per criterion.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ipw_core::credal::{query_bounds, CredalConstraint, CredalError};
use ipw_core::defaults::{compute_extensions, is_extension, DefaultTheory};
use ipw_core::logic::{models_in, Formula, Vocabulary, WorldSet};
use ipw_core::policy::{laplace_sequence, possibility_ratio, reliable_belief, Partition};
use ipw_core::sim::{
    reliability_audit, run_two_experts, PartitionSource, ReliabilityAuditConfig, TwoExpertsConfig,
};
use ipw_core::Rational;
use ipw_oracle::{random_formula, random_system, random_theory, OracleBounds};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "kb", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = ["ipw", "--format", "json"]
        .into_iter()
        .chain(args.iter().copied());
    let code = ipw::run(argv, &mut out, &mut err);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    serde_json::from_slice(&out).map_err(|e| e.to_string())
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("numeric field")
}

fn r(n: u64, d: u64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table1() -> Check {
    let v = cli_json(&["table1"])?;
    let expected = [
        (0.8, 0.6, 0.4),
        (0.8, 0.5, 0.41),
        (0.5, 0.6, 0.49),
        (0.5, 0.5, 0.5),
    ];
    let rows = v["rows"].as_array().ok_or("no rows")?;
    ensure(rows.len() == 4, || format!("{} rows", rows.len()))?;
    for (row, (ba, bb, err)) in rows.iter().zip(expected) {
        let beliefs = &row["beliefs"];
        let got = (
            num(&beliefs[0]),
            num(&beliefs[1]),
            num(&row["expected_error"]),
        );
        ensure(
            (got.0 - ba).abs() < 1e-9 && (got.1 - bb).abs() < 1e-9 && (got.2 - err).abs() < 1e-9,
            || format!("row {:?}, expected {:?}", got, (ba, bb, err)),
        )?;
    }
    let labels: Vec<&str> = rows
        .iter()
        .filter_map(|r| r["guarantee"].as_str())
        .collect();
    ensure(
        labels
            == [
                "none-guaranteed",
                "provably-reliable",
                "provably-reliable",
                "precisely-reliable",
            ],
        || format!("labels {labels:?}"),
    )?;
    Ok("errors .4 .41 .49 .5".into())
}

fn laplace() -> Check {
    for free in 0..=5 {
        let seq = laplace_sequence(8, free).map_err(|e| e.to_string())?;
        for (n, b) in seq.iter().enumerate() {
            let n = n as u64;
            ensure(*b == r(1 + n, 2 + n), || format!("N={n}, free={free}: {b}"))?;
        }
    }
    Ok("(1+N)/(2+N) for N<=8, free<=5".into())
}

fn ratio_example() -> Check {
    let v = cli_json(&[
        "eval",
        "--kb",
        &fixture("implication.kb"),
        "--query",
        "b",
        "--query",
        "a",
    ])?;
    let b = &v["entries"][0]["exact"];
    let a = &v["entries"][1]["exact"];
    ensure(b == "2/3" && a == "1/3", || format!("b={b}, a={a}"))?;
    Ok("b=2/3 a=1/3".into())
}

fn default_extensions() -> Check {
    let std = cli_json(&[
        "extensions",
        "--kb",
        &fixture("conflicting_defaults.kb"),
        "--audit",
        "--mode",
        "standard",
    ])?;
    let exts = std["extensions"].as_array().ok_or("no extensions")?;
    ensure(exts.len() == 2, || format!("{} extensions", exts.len()))?;
    let literals: Vec<Vec<&str>> = exts
        .iter()
        .map(|e| {
            e["literals"]
                .as_array()
                .unwrap()
                .iter()
                .filter_map(|l| l.as_str())
                .collect()
        })
        .collect();
    let has = |lits: &[&str]| literals.iter().any(|l| lits.iter().all(|x| l.contains(x)));
    ensure(has(&["b", "!d"]) && has(&["!b", "d"]), || {
        format!("{literals:?}")
    })?;

    let rule1 = &std["audit"][0];
    ensure(rule1["verdict"] == "provably_irrelevant", || {
        format!("standard {rule1}")
    })?;
    let hi = num(&rule1["upper_bound"]);
    ensure((hi - (1.0 - 0.9)).abs() < 1e-9, || {
        format!("upper bound {hi}")
    })?;

    let intro = cli_json(&[
        "extensions",
        "--kb",
        &fixture("conflicting_defaults.kb"),
        "--audit",
        "--mode",
        "introspective",
    ])?;
    let rule1 = &intro["audit"][0];
    ensure(rule1["verdict"] == "not_provably_irrelevant", || {
        format!("introspective {rule1}")
    })?;
    Ok(format!(
        "2 extensions, standard bound {hi:.6}, introspective {}",
        num(&rule1["upper_bound"])
    ))
}

fn credal_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut counts = [0usize; 3];
    for i in 0..200 {
        let sys = random_system(&mut rng);
        let worlds = WorldSet::from_worlds(sys.atoms, sys.worlds());
        let constraints: Vec<CredalConstraint<f64>> = sys
            .constraints
            .iter()
            .map(|c| CredalConstraint::new(c.target.clone(), c.given.clone(), c.lo, c.hi))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let got = query_bounds(&worlds, &constraints, &sys.query, &sys.given);
        let ok = match (sys.oracle(), &got) {
            (OracleBounds::Bounds { lo, hi }, Ok(b)) => {
                counts[0] += 1;
                (lo - b.lo).abs() < 1e-4 && (hi - b.hi).abs() < 1e-4
            }
            (OracleBounds::Infeasible, Err(CredalError::Infeasible)) => {
                counts[1] += 1;
                true
            }
            (OracleBounds::ConditioningImpossible, Err(CredalError::ConditioningImpossible)) => {
                counts[2] += 1;
                true
            }
            _ => false,
        };
        ensure(ok, || {
            format!("system {i}: oracle {:?}, solver {:?}", sys.oracle(), got)
        })?;
    }

    let v = cli_json(&["bounds", "--kb", &fixture("frechet.kb"), "--query", "a & b"])?;
    let (lo, hi) = (num(&v["lo"]), num(&v["hi"]));
    ensure((lo - 0.4).abs() < 1e-9 && (hi - 0.6).abs() < 1e-9, || {
        format!("frechet [{lo}, {hi}]")
    })?;
    Ok(format!(
        "200 systems ({} bounded, {} infeasible, {} unconditionable); frechet [{lo}, {hi}]",
        counts[0], counts[1], counts[2]
    ))
}

fn minterm(world: usize, atoms: usize) -> Formula {
    Formula::conjunction((0..atoms).map(|i| {
        let a = Formula::Atom(i);
        if world >> i & 1 == 1 {
            a
        } else {
            a.not()
        }
    }))
}

fn precise_reliability() -> Check {
    const ATOMS: usize = 3;
    let mut checked = 0usize;
    for mask in 1u32..1 << (1 << ATOMS) {
        let members: Vec<usize> = (0..1 << ATOMS).filter(|w| mask >> w & 1 == 1).collect();
        let n = members.len();
        let w = WorldSet::from_worlds(ATOMS, members.iter().copied());
        // ratio of every statement, one per subset of W
        let mut ratios = Vec::with_capacity(1 << n);
        for sub in 0u32..1 << n {
            let q = (0..n)
                .filter(|i| sub >> i & 1 == 1)
                .map(|i| minterm(members[i], ATOMS))
                .reduce(Formula::or)
                .unwrap_or_else(Formula::bottom);
            ratios.push(possibility_ratio(&w, &q).map_err(|e| e.to_string())?);
        }
        for actual in 0..n {
            for size in 0..=n {
                let x = r(size as u64, n as u64);
                let (mut hits, mut total) = (0u64, 0u64);
                for (sub, ratio) in ratios.iter().enumerate() {
                    if *ratio == x {
                        total += 1;
                        hits += (sub >> actual & 1) as u64;
                    }
                }
                ensure(r(hits, total) == x, || {
                    format!(
                        "W={members:?}, w={}, x={x}: {hits}/{total}",
                        members[actual]
                    )
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (W, w, x) triples"))
}

fn mixed_reliability() -> Check {
    let report = reliability_audit(&ReliabilityAuditConfig {
        trials: 10_000,
        seed: 1,
        source: PartitionSource::SingleMarginal,
        ..ReliabilityAuditConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let e = report.calibration_error;
    ensure(e < 0.05, || format!("calibration error {e}"))?;
    Ok(format!(
        "calibration error {e:.4} over {} statements",
        report.samples
    ))
}

fn two_experts() -> Check {
    use ipw_core::sim::ExpertPolicy::{FollowExpert1, IndependentFusion};
    let run = |redundancy: f64, quality2: f64| {
        run_two_experts(&TwoExpertsConfig {
            trials: 100_000,
            seed: 5,
            quality1: 0.9,
            quality2,
            redundancy,
            ..TwoExpertsConfig::default()
        })
        .map_err(|e| e.to_string())
    };
    let mut follow = Vec::new();
    for rho in [0.0, 0.5, 1.0] {
        let e = run(rho, 0.7)?[&FollowExpert1].calibration_error;
        ensure(e < 0.03, || {
            format!("follow_expert1 error {e} at rho={rho}")
        })?;
        follow.push(e);
    }
    let copied = run(1.0, 0.9)?;
    let (fused, single) = (
        copied[&IndependentFusion].calibration_error,
        copied[&FollowExpert1].calibration_error,
    );
    ensure(fused > single, || {
        format!("rho=1: fusion error {fused} <= follow {single}")
    })?;
    let independent = run(0.0, 0.7)?;
    let (fb, sb) = (
        independent[&IndependentFusion].brier,
        independent[&FollowExpert1].brier,
    );
    ensure(fb <= sb, || {
        format!("rho=0: fusion brier {fb} > follow {sb}")
    })?;
    Ok(format!(
        "follow errors {:.4}/{:.4}/{:.4}; rho=1 fusion {fused:.4} > {single:.4}; rho=0 brier {fb:.4} <= {sb:.4}",
        follow[0], follow[1], follow[2]
    ))
}

fn random_world_set(rng: &mut StdRng, atoms: usize) -> WorldSet {
    loop {
        let w = WorldSet::from_worlds(atoms, (0..1 << atoms).filter(|_| rng.gen_bool(0.6)));
        if !w.is_empty() {
            return w;
        }
    }
}

fn property(
    name: &str,
    cases: u32,
    test: impl Fn(u64) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&any::<u64>(), test)
        .map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Check {
    const ATOMS: usize = 3;
    property("formula algebra", 256, |seed| {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_formula(&mut rng, ATOMS, 3);
        let g = random_formula(&mut rng, ATOMS, 3);
        let (mf, mg) = (models_in(&f, ATOMS), models_in(&g, ATOMS));
        prop_assert_eq!(models_in(&f.clone().not(), ATOMS), mf.complement());
        prop_assert_eq!(
            models_in(&f.clone().and(g.clone()), ATOMS),
            mf.intersection(&mg)
        );
        prop_assert_eq!(models_in(&f.or(g), ATOMS), mf.union(&mg));
        Ok(())
    })?;

    property("belief additivity", 256, |seed| {
        let mut rng = StdRng::seed_from_u64(seed);
        let w = random_world_set(&mut rng, ATOMS);
        let q = random_formula(&mut rng, ATOMS, 3);
        let nq = q.clone().not();
        let ratio = possibility_ratio(&w, &q).unwrap() + possibility_ratio(&w, &nq).unwrap();
        prop_assert_eq!(ratio, r(1, 1));
        let cut = Formula::Atom(rng.gen_range(0..ATOMS));
        let p = r(rng.gen_range(0..=20), 20);
        let partition =
            Partition::new(vec![(cut.clone(), p.clone()), (cut.not(), r(1, 1) - p)]).unwrap();
        if let Ok(b) = reliable_belief(&w, &partition, &q) {
            prop_assert_eq!(b + reliable_belief(&w, &partition, &nq).unwrap(), r(1, 1));
        }
        Ok(())
    })?;

    property("cell recovery", 256, |seed| {
        let mut rng = StdRng::seed_from_u64(seed);
        let w = random_world_set(&mut rng, ATOMS);
        let cut = random_formula(&mut rng, ATOMS, 2);
        let p = r(rng.gen_range(0..=20), 20);
        let cells = vec![(cut.clone(), p.clone()), (cut.not(), r(1, 1) - p)];
        let partition = Partition::new(cells.clone()).unwrap();
        if partition.cells_on(&w).is_ok() {
            for (cell, prob) in &cells {
                prop_assert_eq!(&reliable_belief(&w, &partition, cell).unwrap(), prob);
            }
        }
        Ok(())
    })?;

    property("extension fixed point", 128, |seed| {
        let t = random_theory(&mut StdRng::seed_from_u64(seed), 4);
        let names = ["a", "b", "c", "d"];
        let theory = DefaultTheory::new(
            Vocabulary::new(names[..t.atoms].iter().copied()).unwrap(),
            t.facts.clone(),
            t.axioms.clone(),
            t.defaults.clone(),
        )
        .unwrap();
        for ext in compute_extensions(&theory) {
            prop_assert!(is_extension(&theory, &ext));
        }
        Ok(())
    })?;

    property("parallel determinism", 6, |seed| {
        let audit = ReliabilityAuditConfig {
            trials: 1500,
            seed,
            ..ReliabilityAuditConfig::default()
        };
        let seq = ReliabilityAuditConfig {
            parallel: false,
            ..audit.clone()
        };
        prop_assert_eq!(
            reliability_audit(&audit).unwrap(),
            reliability_audit(&seq).unwrap()
        );
        let experts = TwoExpertsConfig {
            trials: 3000,
            seed,
            redundancy: 0.3,
            ..TwoExpertsConfig::default()
        };
        let seq = TwoExpertsConfig {
            parallel: false,
            ..experts.clone()
        };
        prop_assert_eq!(
            run_two_experts(&experts).unwrap(),
            run_two_experts(&seq).unwrap()
        );
        Ok(())
    })?;

    Ok("algebra, additivity, cell recovery, fixed point, determinism".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("table 1 reproduction", 1, table1),
        ("laplace emulation", 5, laplace),
        ("possibility-ratio example", 1, ratio_example),
        ("default extensions", 1, default_extensions),
        ("credal oracle equivalence", 60, credal_oracle),
        ("precise-reliability identity", 30, precise_reliability),
        ("mixed-calculus reliability", 60, mixed_reliability),
        ("two-experts scenario", 60, two_experts),
        ("property suites", 120, property_suites),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed > Duration::from_secs(budget) {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget} s"))
            } else {
                Ok(detail)
            }
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL {name} ({why})", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
