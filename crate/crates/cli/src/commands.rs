//! Subcommand implementations and their reports.

use std::io::Write;
use std::path::Path;

use ipw_core::credal::{merge_experts, query_bounds, CredalConstraint};
use ipw_core::defaults::{
    audit_rule, compute_extensions, AuditConfig, AuditMode, DefaultError, DefaultRule,
};
use ipw_core::logic::{entails, parse_formula, Formula, Vocabulary, WorldSet};
use ipw_core::policy::{
    laplace_sequence, point_belief, possibility_ratio, reliable_belief, tradeoff_table,
    BeliefReport, PolicyTag,
};
use ipw_core::sim::{
    reliability_audit, run_two_experts, CalibrationReport, PartitionSource, ReliabilityAuditConfig,
    TwoExpertsConfig,
};
use ipw_core::{Rational, Scalar};
use serde::Serialize;

use crate::kb::{load_kb, KbError, KnowledgeBase};
use crate::report::{emit, Format, NumFmt, Report, Table};
use crate::{
    BoundsArgs, EvalArgs, ExtensionsArgs, Failure, LaplaceArgs, MergeArgs, ModeArg, PartitionArg,
    Scenario, SimulateArgs, Table1Args,
};

type Outcome = Result<(), Failure>;

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn load<S: Scalar>(path: &Path) -> Result<KnowledgeBase<S>, Failure> {
    load_kb(path).map_err(|e| match e {
        KbError::Io { .. } => Failure::Usage(e.to_string()),
        other => Failure::Usage(format!("{}: {}", path.display(), other)),
    })
}

fn formula(text: &str, vocab: &Vocabulary) -> Result<Formula, Failure> {
    parse_formula(text, vocab).map_err(|e| Failure::Usage(format!("formula `{text}`: {e}")))
}

fn write<R: Report>(report: &R, format: Format, out: &mut dyn Write) -> Outcome {
    emit(report, format, out).map_err(|e| Failure::Domain(format!("writing report: {e}")))
}

/// Exact rendering when `S` is an exact type.
fn exact<S: Scalar>(value: &S) -> Option<String> {
    S::tolerance().is_zero().then(|| value.to_string())
}

fn arithmetic<S: Scalar>() -> &'static str {
    if S::tolerance().is_zero() {
        "exact"
    } else {
        "float"
    }
}

fn opt(value: &Option<String>) -> String {
    value.clone().unwrap_or_default()
}

// eval

#[derive(Serialize)]
struct EvalEntry {
    statement: String,
    belief: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
}

#[derive(Serialize)]
struct EvalReport {
    policy: PolicyTag,
    arithmetic: &'static str,
    entries: Vec<EvalEntry>,
}

impl Report for EvalReport {
    fn tables(&self, num: NumFmt) -> Vec<Table> {
        let mut t = Table::new(&["statement", "policy", "belief", "exact"]);
        for e in &self.entries {
            t.push(vec![
                e.statement.clone(),
                self.policy.as_str().into(),
                num(e.belief),
                opt(&e.exact),
            ]);
        }
        vec![t]
    }
}

pub fn eval(args: &EvalArgs, format: Format, out: &mut dyn Write) -> Outcome {
    if args.float {
        eval_with::<f64>(args, format, out)
    } else {
        eval_with::<Rational>(args, format, out)
    }
}

fn eval_with<S: Scalar>(args: &EvalArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let kb: KnowledgeBase<S> = load(&args.kb)?;
    let worlds = kb.worlds();
    let mut beliefs = BeliefReport::default();
    let mut exacts = Vec::new();
    for text in &args.queries {
        let q = formula(text, &kb.vocab)?;
        let (value, exact_text) = match args.policy {
            PolicyTag::Ratio => {
                let r = possibility_ratio(&worlds, &q).map_err(domain)?;
                (r.to_f64_lossy(), Some(r.to_string()))
            }
            PolicyTag::Reliable => {
                let partition = kb
                    .partition
                    .as_ref()
                    .ok_or_else(|| domain("the knowledge base declares no partition"))?;
                let b = reliable_belief(&worlds, partition, &q).map_err(domain)?;
                (b.to_f64_lossy(), exact(&b))
            }
            PolicyTag::Point => {
                let b = point_belief(&worlds, &kb.constraints, &q).map_err(domain)?;
                (b.to_f64_lossy(), exact(&b))
            }
        };
        beliefs.push(q, value, args.policy);
        exacts.push(exact_text);
    }
    let report = EvalReport {
        policy: args.policy,
        arithmetic: arithmetic::<S>(),
        entries: beliefs
            .entries
            .iter()
            .zip(exacts)
            .map(|(e, exact)| EvalEntry {
                statement: e.statement.render(&kb.vocab),
                belief: e.belief,
                exact,
            })
            .collect(),
    };
    write(&report, format, out)
}

// bounds

#[derive(Serialize)]
struct BoundsEntry {
    query: String,
    given: String,
    lo: f64,
    hi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_lo: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_hi: Option<String>,
}

impl BoundsEntry {
    fn new<S: Scalar>(query: String, given: String, lo: &S, hi: &S) -> Self {
        BoundsEntry {
            query,
            given,
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
            exact_lo: exact(lo),
            exact_hi: exact(hi),
        }
    }

    fn table(entries: &[BoundsEntry], num: NumFmt) -> Table {
        let mut t = Table::new(&["query", "given", "lo", "hi", "exact_lo", "exact_hi"]);
        for e in entries {
            t.push(vec![
                e.query.clone(),
                e.given.clone(),
                num(e.lo),
                num(e.hi),
                opt(&e.exact_lo),
                opt(&e.exact_hi),
            ]);
        }
        t
    }
}

#[derive(Serialize)]
struct BoundsReport {
    arithmetic: &'static str,
    #[serde(flatten)]
    bounds: BoundsEntry,
}

impl Report for BoundsReport {
    fn tables(&self, num: NumFmt) -> Vec<Table> {
        vec![BoundsEntry::table(std::slice::from_ref(&self.bounds), num)]
    }
}

pub fn bounds(args: &BoundsArgs, format: Format, out: &mut dyn Write) -> Outcome {
    if args.float {
        bounds_with::<f64>(args, format, out)
    } else {
        bounds_with::<Rational>(args, format, out)
    }
}

fn bounds_with<S: Scalar>(args: &BoundsArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let kb: KnowledgeBase<S> = load(&args.kb)?;
    let q = formula(&args.query, &kb.vocab)?;
    let g = formula(&args.given, &kb.vocab)?;
    let interval = query_bounds(&kb.worlds(), &kb.constraints, &q, &g).map_err(domain)?;
    let report = BoundsReport {
        arithmetic: arithmetic::<S>(),
        bounds: BoundsEntry::new(
            q.render(&kb.vocab),
            g.render(&kb.vocab),
            &interval.lo,
            &interval.hi,
        ),
    };
    write(&report, format, out)
}

// merge

#[derive(Serialize)]
struct EnvelopeEntry {
    statement: String,
    lo: f64,
    hi: f64,
}

#[derive(Serialize)]
struct MergeReport {
    arithmetic: &'static str,
    experts: Vec<String>,
    envelope: Vec<EnvelopeEntry>,
    queries: Vec<BoundsEntry>,
}

impl Report for MergeReport {
    fn tables(&self, num: NumFmt) -> Vec<Table> {
        let mut env = Table::new(&["statement", "lo", "hi"])
            .titled(format!("envelope of {}", self.experts.join(", ")));
        for e in &self.envelope {
            env.push(vec![e.statement.clone(), num(e.lo), num(e.hi)]);
        }
        let mut tables = vec![env];
        if !self.queries.is_empty() {
            tables.push(BoundsEntry::table(&self.queries, num));
        }
        tables
    }
}

pub fn merge(args: &MergeArgs, format: Format, out: &mut dyn Write) -> Outcome {
    if args.float {
        merge_with::<f64>(args, format, out)
    } else {
        merge_with::<Rational>(args, format, out)
    }
}

fn merge_with<S: Scalar>(args: &MergeArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let kb: KnowledgeBase<S> = load(&args.kb)?;
    if kb.experts.is_empty() {
        return Err(domain("the knowledge base declares no experts"));
    }
    let worlds = kb.worlds();
    let envelope = merge_experts(&worlds, &kb.experts).map_err(domain)?;
    let mut constraints: Vec<CredalConstraint<S>> = kb.constraints.clone();
    constraints.extend(envelope.iter().cloned());
    let mut queries = Vec::new();
    for text in &args.queries {
        let q = formula(text, &kb.vocab)?;
        let b = query_bounds(&worlds, &constraints, &q, &Formula::top()).map_err(domain)?;
        queries.push(BoundsEntry::new(
            q.render(&kb.vocab),
            "true".into(),
            &b.lo,
            &b.hi,
        ));
    }
    let report = MergeReport {
        arithmetic: arithmetic::<S>(),
        experts: kb.experts.iter().map(|e| e.expert.clone()).collect(),
        envelope: envelope
            .iter()
            .map(|c| EnvelopeEntry {
                statement: c.target.render(&kb.vocab),
                lo: c.lo.to_f64_lossy(),
                hi: c.hi.to_f64_lossy(),
            })
            .collect(),
        queries,
    };
    write(&report, format, out)
}

// extensions

#[derive(Serialize)]
struct ExtensionEntry {
    index: usize,
    /// 1-based rule numbers.
    applied: Vec<usize>,
    /// Literals entailed by the extension.
    literals: Vec<String>,
}

#[derive(Serialize)]
struct AuditEntry {
    rule: usize,
    default: String,
    mode: &'static str,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evidence: Option<String>,
}

#[derive(Serialize)]
struct ExtensionsReport {
    defaults: Vec<String>,
    extensions: Vec<ExtensionEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<Vec<AuditEntry>>,
}

impl Report for ExtensionsReport {
    fn tables(&self, num: NumFmt) -> Vec<Table> {
        let mut ext = Table::new(&["extension", "applied", "literals"])
            .titled(format!("{} extension(s)", self.extensions.len()));
        for e in &self.extensions {
            let applied: Vec<String> = e.applied.iter().map(|r| r.to_string()).collect();
            ext.push(vec![
                e.index.to_string(),
                applied.join(" "),
                e.literals.join(" "),
            ]);
        }
        let mut tables = vec![ext];
        if let Some(audit) = &self.audit {
            let mut t = Table::new(&[
                "rule",
                "default",
                "mode",
                "verdict",
                "upper_bound",
                "evidence",
            ]);
            for a in audit {
                t.push(vec![
                    a.rule.to_string(),
                    a.default.clone(),
                    a.mode.into(),
                    a.verdict.into(),
                    a.upper_bound.map(num).unwrap_or_default(),
                    opt(&a.evidence),
                ]);
            }
            tables.push(t);
        }
        tables
    }
}

fn render_default(d: &DefaultRule, vocab: &Vocabulary) -> String {
    format!(
        "{} : {} / {}",
        d.prerequisite.render(vocab),
        d.justification.render(vocab),
        d.consequent.render(vocab)
    )
}

fn literals(believed: &WorldSet, vocab: &Vocabulary) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..vocab.len() {
        let atom = Formula::Atom(i);
        if entails(believed, &atom) {
            out.push(vocab.name(i).to_string());
        } else if entails(believed, &atom.not()) {
            out.push(format!("!{}", vocab.name(i)));
        }
    }
    out
}

pub fn extensions(args: &ExtensionsArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let kb: KnowledgeBase<f64> = load(&args.kb)?;
    let theory = kb.theory().map_err(domain)?;
    let vocab = theory.vocab();
    let found = compute_extensions(&theory);
    let audit = if args.audit {
        let config = AuditConfig::new(args.tau_justify, args.tau_believe)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        let mode = match args.mode {
            ModeArg::Standard => AuditMode::Standard,
            ModeArg::Introspective => AuditMode::Introspective,
        };
        let mut rows = Vec::new();
        for (i, d) in theory.defaults().iter().enumerate() {
            let default = render_default(d, vocab);
            let row = match audit_rule(&theory, i, mode, &config) {
                Ok(v) => AuditEntry {
                    rule: i + 1,
                    default,
                    mode: mode.as_str(),
                    verdict: v.verdict.as_str(),
                    upper_bound: Some(v.upper_bound),
                    evidence: Some(v.evidence),
                },
                Err(DefaultError::NotApplicable(_)) => AuditEntry {
                    rule: i + 1,
                    default,
                    mode: mode.as_str(),
                    verdict: "not_applicable",
                    upper_bound: None,
                    evidence: None,
                },
                Err(e) => return Err(domain(e)),
            };
            rows.push(row);
        }
        Some(rows)
    } else {
        None
    };
    let report = ExtensionsReport {
        defaults: theory
            .defaults()
            .iter()
            .map(|d| render_default(d, vocab))
            .collect(),
        extensions: found
            .iter()
            .enumerate()
            .map(|(i, e)| ExtensionEntry {
                index: i + 1,
                applied: e.applied.iter().map(|r| r + 1).collect(),
                literals: literals(&e.believed, vocab),
            })
            .collect(),
        audit,
    };
    write(&report, format, out)
}

// laplace

#[derive(Serialize)]
struct LaplaceRow {
    observations: usize,
    belief: f64,
    exact: String,
}

#[derive(Serialize)]
struct LaplaceReport {
    free_atoms: usize,
    sequence: Vec<LaplaceRow>,
}

impl Report for LaplaceReport {
    fn tables(&self, num: NumFmt) -> Vec<Table> {
        let mut t = Table::new(&["observations", "belief", "exact"]);
        for r in &self.sequence {
            t.push(vec![
                r.observations.to_string(),
                num(r.belief),
                r.exact.clone(),
            ]);
        }
        vec![t]
    }
}

pub fn laplace(args: &LaplaceArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let seq = laplace_sequence(args.observations, args.free_atoms).map_err(domain)?;
    let report = LaplaceReport {
        free_atoms: args.free_atoms,
        sequence: seq
            .iter()
            .enumerate()
            .map(|(n, r)| LaplaceRow {
                observations: n,
                belief: r.to_f64_lossy(),
                exact: r.to_string(),
            })
            .collect(),
    };
    write(&report, format, out)
}

// table1

#[derive(Serialize)]
struct Marginal {
    statement: String,
    probability: f64,
}

#[derive(Serialize)]
struct TradeoffEntry {
    source: String,
    beliefs: Vec<f64>,
    expected_error: f64,
    expected_error_exact: String,
    guarantee: &'static str,
}

#[derive(Serialize)]
struct Table1Report {
    marginals: Vec<Marginal>,
    rows: Vec<TradeoffEntry>,
}

impl Report for Table1Report {
    fn tables(&self, num: NumFmt) -> Vec<Table> {
        let mut headers = vec!["source".to_string()];
        headers.extend(self.marginals.iter().map(|m| format!("b({})", m.statement)));
        headers.extend(["expected_error", "exact", "guarantee"].map(String::from));
        let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
        let mut t = Table::new(&headers);
        for r in &self.rows {
            let mut row = vec![r.source.clone()];
            row.extend(r.beliefs.iter().map(|b| num(*b)));
            row.push(num(r.expected_error));
            row.push(r.expected_error_exact.clone());
            row.push(r.guarantee.into());
            t.push(row);
        }
        vec![t]
    }
}

pub fn table1(args: &Table1Args, format: Format, out: &mut dyn Write) -> Outcome {
    let (vocab, worlds, marginals) = match &args.kb {
        None => {
            let vocab = Vocabulary::new(["a", "b"]).expect("valid vocabulary");
            let tenth = |n: i64| Rational::new(n.into(), 10.into());
            let marginals = vec![(Formula::Atom(0), tenth(8)), (Formula::Atom(1), tenth(6))];
            (vocab, WorldSet::full(2), marginals)
        }
        Some(path) => {
            let kb: KnowledgeBase<Rational> = load(path)?;
            let marginals: Vec<(Formula, Rational)> = kb
                .constraints
                .iter()
                .filter(|c| c.given == Formula::top() && c.lo == c.hi)
                .map(|c| (c.target.clone(), c.lo.clone()))
                .collect();
            if marginals.is_empty() {
                return Err(domain("the knowledge base has no point-valued marginals"));
            }
            let worlds = kb.worlds();
            (kb.vocab, worlds, marginals)
        }
    };
    let names: Vec<String> = marginals.iter().map(|(f, _)| f.render(&vocab)).collect();
    let rows = tradeoff_table(&worlds, &marginals, &names).map_err(domain)?;
    let report = Table1Report {
        marginals: marginals
            .iter()
            .zip(&names)
            .map(|((_, p), n)| Marginal {
                statement: n.clone(),
                probability: p.to_f64_lossy(),
            })
            .collect(),
        rows: rows
            .iter()
            .map(|r| TradeoffEntry {
                source: r.source.clone(),
                beliefs: r.beliefs.iter().map(Scalar::to_f64_lossy).collect(),
                expected_error: r.expected_error.to_f64_lossy(),
                expected_error_exact: r.expected_error.to_string(),
                guarantee: r.guarantee.label(),
            })
            .collect(),
    };
    write(&report, format, out)
}

// simulate

#[derive(Serialize)]
struct SimulateReport {
    scenario: &'static str,
    trials: u64,
    seed: u64,
    reports: Vec<CalibrationReport>,
}

impl Report for SimulateReport {
    fn tables(&self, num: NumFmt) -> Vec<Table> {
        let mut t = Table::new(&[
            "policy",
            "lo",
            "hi",
            "count",
            "mean_belief",
            "truth_fraction",
        ])
        .titled(format!(
            "{}: {} trials, seed {}",
            self.scenario, self.trials, self.seed
        ));
        for r in &self.reports {
            for b in &r.bins {
                t.push(vec![
                    r.policy.clone(),
                    num(b.lo),
                    num(b.hi),
                    b.count.to_string(),
                    num(b.mean_belief),
                    num(b.truth_fraction),
                ]);
            }
        }
        for r in &self.reports {
            for (label, value) in [
                ("calibration_error", r.calibration_error),
                ("brier", r.brier),
            ] {
                t.push(vec![
                    r.policy.clone(),
                    label.into(),
                    num(value),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
        }
        vec![t]
    }
}

pub fn simulate(args: &SimulateArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let invalid = |e: ipw_core::sim::SimError| Failure::Usage(e.to_string());
    let report = match args.scenario {
        Scenario::TwoExperts => {
            let defaults = TwoExpertsConfig::default();
            let config = TwoExpertsConfig {
                trials: args.trials.unwrap_or(defaults.trials),
                seed: args.seed,
                quality1: args.quality1,
                quality2: args.quality2,
                redundancy: args.redundancy,
                base_rate: args.base_rate,
                bins: args.bins,
                min_bin_count: args.min_bin_count,
                parallel: !args.sequential,
            };
            let reports = run_two_experts(&config).map_err(invalid)?;
            SimulateReport {
                scenario: "two-experts",
                trials: config.trials,
                seed: config.seed,
                reports: reports.into_values().collect(),
            }
        }
        Scenario::ReliabilityAudit => {
            let defaults = ReliabilityAuditConfig::default();
            let config = ReliabilityAuditConfig {
                trials: args.trials.unwrap_or(defaults.trials),
                seed: args.seed,
                atoms: args.atoms,
                axiom_density: args.axiom_density,
                source: match args.partition {
                    PartitionArg::None => PartitionSource::None,
                    PartitionArg::SingleMarginal => PartitionSource::SingleMarginal,
                },
                bins: args.bins,
                min_bin_count: args.min_bin_count,
                parallel: !args.sequential,
            };
            let report = reliability_audit(&config).map_err(invalid)?;
            SimulateReport {
                scenario: "reliability-audit",
                trials: config.trials,
                seed: config.seed,
                reports: vec![report],
            }
        }
    };
    write(&report, format, out)
}
