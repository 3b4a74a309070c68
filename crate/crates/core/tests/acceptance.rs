//! Acceptance gate: one PASS/FAIL line per criterion, with its runtime
//! budget. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines.

mod common;

use std::time::{Duration, Instant};

use common::suites::*;
use harnack::cli::{cmd_repro_paper, render_search_summary, EXIT_PASS, EXIT_VIOLATION};
use harnack::conjectures::{search, SearchConfig, SearchSummary, SpecialCase};
use harnack::report::RunReport;

const SEED: u64 = 42;

fn line(id: u32, title: &str, pass: bool, elapsed: Duration, budget: Duration, detail: &str) -> bool {
    let within = elapsed <= budget;
    let ok = pass && within;
    println!(
        "criterion {id} [{}] {title}: {detail} ({:.2?} of {:.0?} budget{})",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        budget,
        if within { "" } else { ", OVER BUDGET" }
    );
    ok
}

#[test]
fn criterion_1_reference_examples() {
    let start = Instant::now();
    let report = cmd_repro_paper(vec!["harnack".into(), "repro-paper".into()]);
    let elapsed = start.elapsed();
    let failures: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
    let text = serde_json::to_string(&report).unwrap();
    let round_trip: RunReport = serde_json::from_str(&text).unwrap();
    let ok = line(
        1,
        "reference examples reproduce",
        report.overall_pass && failures.is_empty() && round_trip == report,
        elapsed,
        Duration::from_secs(1),
        &format!("{} checks, failing {failures:?}", report.checks.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_2_identity_suite() {
    let start = Instant::now();
    let out = identity_suite(1000, SEED);
    let ok = line(2, "identity residuals", out.passed() && out.cases == 1000, start.elapsed(), Duration::from_secs(10), &out.summary());
    assert!(ok);
}

#[test]
fn criterion_3_inequality_suite() {
    let start = Instant::now();
    let out = inequality_suite(1000, SEED);
    let ok = line(3, "inequality suite", out.passed() && out.cases == 1000, start.elapsed(), Duration::from_secs(60), &out.summary());
    assert!(ok);
}

#[test]
fn criterion_4_cayley_suite() {
    let start = Instant::now();
    let pairs = cayley_pair_suite(500, SEED);
    let hermitian = hermitian_pair_suite(500, SEED);
    let ok = line(
        4,
        "cayley chains and hermitian comparison",
        pairs.passed() && hermitian.passed() && pairs.cases == 500 && hermitian.cases == 500,
        start.elapsed(),
        Duration::from_secs(30),
        &format!("contraction pairs: {}; hermitian pairs: {}", pairs.summary(), hermitian.summary()),
    );
    assert!(ok);
}

fn evidence_config(n: usize) -> SearchConfig {
    let mut c = SearchConfig::new(n, 100_000, SEED);
    c.descent_steps = 2000;
    c
}

#[test]
fn criterion_5_conjecture_evidence() {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    for n in 2..=5 {
        let summary = search(&evidence_config(n)).expect("valid config").summary;
        let (_, code) = render_search_summary(&summary).expect("serializable");
        pass &= !summary.violation_found && summary.best.min_slack >= -1e-8 && code == EXIT_PASS;
        details.push(format!("n={n}: min_slack {:e} at j={}", summary.best.min_slack, summary.best.min_j));
    }
    for (case, label) in [
        (SpecialCase::Normal, "normal"),
        (SpecialCase::LastIndex, "last index"),
        (SpecialCase::SingularFirstIndex, "singular first index"),
    ] {
        let out = special_case_suite(500, SEED, case);
        pass &= out.passed() && out.cases == 500;
        details.push(format!("{label}: {}", out.summary()));
    }

    // a hand-flipped slack must be detected, serialized and mapped to exit 3
    let mut injected: SearchSummary = search(&SearchConfig::new(3, 10, SEED)).unwrap().summary;
    injected.best.slacks[1] = -0.25;
    injected.best.refresh_minimum();
    injected.refresh_violation();
    let (json, code) = render_search_summary(&injected).unwrap();
    let parsed: SearchSummary = serde_json::from_str(&json).unwrap();
    let detected = code == EXIT_VIOLATION && parsed.violation_found && parsed.best.min_slack == -0.25 && parsed.best.min_j == 2;
    pass &= detected;
    details.push(format!("injected violation exit code {code}"));

    let ok = line(5, "conjecture evidence", pass, start.elapsed(), Duration::from_secs(300), &details.join("; "));
    assert!(ok);
}

#[test]
fn criterion_6_oracle_equivalence() {
    let start = Instant::now();
    let out = oracle_suite(500, SEED);
    let ok = line(6, "oracle equivalence", out.passed() && out.cases == 1000, start.elapsed(), Duration::from_secs(60), &out.summary());
    assert!(ok);
}
