//! One test per acceptance criterion. Each prints a single pass/fail line
//! straight to stdout so the summary is visible without `--nocapture`.

use std::io::Write;

use sparsity::suite::{run_criterion, CriterionResult};

const SEED: u64 = 2024;

fn check(id: u8) {
    let res: CriterionResult = run_criterion(id, SEED);
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", res.line()).unwrap();
    out.flush().unwrap();
    assert!(res.passed, "{}\n{}", res.line(), serde_json::to_string_pretty(&res.details).unwrap());
}

#[test]
fn criterion_1_inequality_chain() {
    check(1);
}

#[test]
fn criterion_2_flow_vs_enumeration() {
    check(2);
}

#[test]
fn criterion_3_scatter_extraction() {
    check(3);
}

#[test]
fn criterion_4_splitter_game() {
    check(4);
}

#[test]
fn criterion_5_construction_invariants() {
    check(5);
}

#[test]
fn criterion_6_uniformity() {
    check(6);
}

#[test]
fn criterion_7_spanning_tree_claims() {
    check(7);
}

#[test]
fn criterion_8_runtime() {
    check(8);
}
