//! The acceptance suite: eight corpus-level checks, each producing a
//! pass/fail line and a JSON record.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::augment::{build_augmented, verify_claims};
use crate::brute;
use crate::generate::{erdos_renyi, grid, planar_triangulation, random_connected, random_tree, star};
use crate::graph::{Bfs, Graph, LinearOrder, VertexSet};
use crate::reach::{
    adm_with, exact_optimum, greedy_order, vertex_admissibility, wcol_under, AdmMode, Metric, DEFAULT_ENUMERATION_CAP,
};
use crate::scatter::{audit, largest_m, scatter_extract};
use crate::splitter::{play_game, replay, ConnectorKind, WcolSplitter};
use crate::uniform::{build_uniform_order, verify_invariant, Variant};

/// Largest `max_r adm_r(G, L) / r` tolerated per family for the uniform order.
pub const UNIFORMITY_BOUND: f64 = 12.0;
/// Tripwire factor between the uniform order and the optimum on tiny graphs.
pub const SMALL_GRAPH_FACTOR: usize = 3;
pub const RUNTIME_LIMIT_SECS: f64 = 60.0;
pub const RUNTIME_SLOPE_LIMIT: f64 = 5.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub seconds: f64,
    pub details: serde_json::Value,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({:.1}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.summary,
            self.seconds
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# Acceptance report\n\n| # | criterion | result | summary | time |\n|---|---|---|---|---|\n");
        for c in &self.criteria {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {:.1}s |\n",
                c.id,
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.summary.replace('|', "/"),
                c.seconds
            ));
        }
        out.push_str(&format!("\nOverall: {}\n", if self.passed { "pass" } else { "FAIL" }));
        out
    }
}

pub const CRITERIA: [(u8, &str); 8] = [
    (1, "inequality chain"),
    (2, "flow vs enumeration"),
    (3, "scatter extraction"),
    (4, "splitter game"),
    (5, "construction invariants"),
    (6, "uniformity"),
    (7, "spanning-tree claims"),
    (8, "runtime"),
];

/// Runs one criterion by number.
pub fn run_criterion(id: u8, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let (passed, summary, details) = match id {
        1 => inequality_chain(seed),
        2 => flow_vs_enumeration(seed),
        3 => scatter_corpus(),
        4 => splitter_corpus(),
        5 => construction_invariants(),
        6 => uniformity(seed),
        7 => spanning_claims(seed),
        8 => runtime(),
        _ => (false, format!("no criterion {id}"), json!(null)),
    };
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1).to_string();
    CriterionResult { id, name, passed, summary, seconds: start.elapsed().as_secs_f64(), details }
}

pub fn run_suite(ids: &[u8], seed: u64) -> SuiteReport {
    let criteria: Vec<CriterionResult> = ids.iter().map(|&id| run_criterion(id, seed)).collect();
    SuiteReport { seed, passed: criteria.iter().all(|c| c.passed), criteria }
}

type Outcome = (bool, String, serde_json::Value);

// ---------------------------------------------------------------------------
// corpora

/// `count` seeded random graphs on 1..=`max_n` vertices with varied density.
pub fn small_random_graphs(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    (0..count as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(i));
            let n = rng.gen_range(2..=max_n);
            let p = rng.gen_range(0.2..0.8);
            erdos_renyi(n, p, rng.gen())
        })
        .collect()
}

/// Stars, trees, grids up to 6x6 and planar triangulations up to n = 200.
pub fn structural_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for leaves in [8, 16, 32, 64] {
        out.push((format!("star-{leaves}"), star(leaves)));
    }
    for (n, seed) in [(20, 1), (50, 2), (100, 3), (200, 4)] {
        out.push((format!("tree-{n}-s{seed}"), random_tree(n, seed)));
    }
    for side in 2..=6 {
        out.push((format!("grid-{side}"), grid(side, side)));
    }
    for (n, seed) in [(20, 1), (50, 2), (100, 3), (200, 4)] {
        out.push((format!("planar-{n}-s{seed}"), planar_triangulation(n, seed).graph));
    }
    out
}

fn all_vertices(g: &Graph) -> VertexSet {
    g.vertices().collect()
}

// ---------------------------------------------------------------------------
// criteria

fn inequality_chain(seed: u64) -> Outcome {
    let graphs = small_random_graphs(100, 7, seed);
    let violations: Vec<String> = graphs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, g)| {
            (1..=3usize).filter_map(move |r| {
                let opt = |m| exact_optimum(g, r, m, DEFAULT_ENUMERATION_CAP).expect("n <= 7").value;
                let (adm, col, wcol) = (opt(Metric::Adm), opt(Metric::Col), opt(Metric::Wcol));
                let ok = adm <= col && col <= wcol && wcol <= adm.pow(r as u32);
                (!ok).then(|| format!("graph {i} (n={}) r={r}: adm={adm} col={col} wcol={wcol}", g.n()))
            })
        })
        .collect();
    let checks = graphs.len() * 3;
    (
        violations.is_empty(),
        format!("{} violations in {checks} (graph, r) pairs", violations.len()),
        json!({ "graphs": graphs.len(), "checks": checks, "violations": violations }),
    )
}

fn sample_orders(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<LinearOrder> {
    let mut all_fit = true;
    let mut fact = 1usize;
    for k in 1..=n {
        fact *= k;
        if fact > count {
            all_fit = false;
            break;
        }
    }
    let mut orders = Vec::new();
    if all_fit {
        brute::for_each_permutation(n, |p| orders.push(LinearOrder::from_sequence(p.to_vec()).unwrap()));
    } else {
        let mut seq: Vec<usize> = (0..n).collect();
        for _ in 0..count {
            seq.shuffle(rng);
            orders.push(LinearOrder::from_sequence(seq.clone()).unwrap());
        }
    }
    orders
}

fn flow_vs_enumeration(seed: u64) -> Outcome {
    let classes = brute::all_graphs_up_to(7);
    let graphs: Vec<&Graph> = classes.iter().flatten().collect();
    let results: Vec<(usize, usize, Vec<String>)> = graphs
        .par_iter()
        .enumerate()
        .map(|(gi, g)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (gi as u64).wrapping_mul(0x9e37_79b9));
            let mut bfs = Bfs::new(g.n());
            let mut checks = 0;
            let mut exact_r3 = 0;
            let mut bad = Vec::new();
            for order in sample_orders(g.n(), 50, &mut rng) {
                for v in g.vertices() {
                    for r in 1..=3 {
                        let truth = brute::admissibility(g, &order, v, r);
                        let bounds = adm_with(g, order.positions(), v, r, AdmMode::Bounds, &mut bfs);
                        checks += 1;
                        let ok = if r <= 2 { bounds.is_exact() && bounds.lower == truth } else { bounds.contains(truth) };
                        if r == 3 {
                            let exact = adm_with(g, order.positions(), v, r, AdmMode::Exact, &mut bfs);
                            if exact.is_exact() && exact.lower == truth {
                                exact_r3 += 1;
                            }
                        }
                        if !ok && bad.len() < 3 {
                            bad.push(format!("graph {gi} order {:?} v={v} r={r}: brute {truth}, got {bounds:?}", order.sequence()));
                        }
                    }
                }
            }
            (checks, exact_r3, bad)
        })
        .collect();
    let checks: usize = results.iter().map(|r| r.0).sum();
    let r3_checks = checks / 3;
    let exact_r3: usize = results.iter().map(|r| r.1).sum();
    let mismatches: Vec<String> = results.into_iter().flat_map(|r| r.2).collect();
    (
        mismatches.is_empty(),
        format!(
            "{} mismatches over {} graphs, {checks} vertex checks; r=3 exact search agrees {exact_r3}/{r3_checks}",
            mismatches.len(),
            graphs.len()
        ),
        json!({ "graphs": graphs.len(), "checks": checks, "r3_exact_agreement": exact_r3, "mismatches": mismatches }),
    )
}

fn scatter_corpus() -> Outcome {
    let corpus = structural_corpus();
    let rows: Vec<serde_json::Value> = corpus
        .par_iter()
        .flat_map_iter(|(name, g)| {
            (1..=2usize).map(move |r| {
                let order = greedy_order(g, r);
                let c = wcol_under(g, &order, r);
                // for stars also run on the leaves alone
                let sets: Vec<(&str, VertexSet)> = if name.starts_with("star") {
                    vec![("all", all_vertices(g)), ("leaves", (1..g.n()).collect())]
                } else {
                    vec![("all", all_vertices(g))]
                };
                let runs: Vec<serde_json::Value> = sets
                    .into_iter()
                    .map(|(label, a)| match largest_m(a.len(), c) {
                        None => json!({ "set": label, "skipped": "|A| < c+1", "ok": true }),
                        Some(m) => match scatter_extract(g, &order, r, &a, m) {
                            Ok(res) => {
                                let rep = audit(g, &a, &res);
                                json!({
                                    "set": label, "m": m, "S": res.deleted.len(), "B": res.scattered.len(),
                                    "case2": res.case_two_count(), "ok": rep.ok, "scattered_2r": rep.scattered_2r,
                                })
                            }
                            Err(e) => json!({ "set": label, "m": m, "error": e.to_string(), "ok": false }),
                        },
                    })
                    .collect();
                json!({ "graph": name, "r": r, "c": c, "runs": runs })
            })
        })
        .collect();
    let runs = rows.iter().flat_map(|row| row["runs"].as_array().unwrap().iter());
    let (total, failed) = runs.fold((0, 0), |(t, f), run| (t + 1, f + usize::from(!run["ok"].as_bool().unwrap())));
    (failed == 0, format!("{failed} violations in {total} runs"), json!({ "runs": rows }))
}

fn splitter_corpus() -> Outcome {
    let corpus = structural_corpus();
    let mut connectors = vec![ConnectorKind::MaxBall, ConnectorKind::First];
    connectors.extend((0..10).map(ConnectorKind::Random));
    let rows: Vec<serde_json::Value> = corpus
        .par_iter()
        .flat_map_iter(|(name, g)| {
            let connectors = connectors.clone();
            (1..=2usize).map(move |r| {
                let order = greedy_order(g, 2 * r);
                let bound = wcol_under(g, &order, 2 * r);
                let mut worst = 0;
                let mut violations = Vec::new();
                for kind in &connectors {
                    let mut splitter = WcolSplitter { order: order.clone() };
                    let mut connector = kind.build();
                    match play_game(g, r, &mut splitter, connector.as_mut(), g.n().max(1)) {
                        Ok(t) => {
                            worst = worst.max(t.rounds_used);
                            if let Err(e) = replay(g, &t) {
                                violations.push(format!("{}: replay failed: {e}", connector.name()));
                            } else if t.rounds_used > bound {
                                violations.push(format!("{}: {} rounds > {bound}", connector.name(), t.rounds_used));
                            }
                        }
                        Err(e) => violations.push(format!("{}: {e}", connector.name())),
                    }
                }
                json!({ "graph": name, "r": r, "wcol_2r": bound, "max_rounds": worst, "violations": violations })
            })
        })
        .collect();
    let failed: usize = rows.iter().map(|r| r["violations"].as_array().unwrap().len()).sum();
    let games = rows.len() * connectors.len();
    (failed == 0, format!("{failed} violations in {games} games"), json!({ "rows": rows }))
}

fn construction_corpus() -> Vec<(String, Graph)> {
    let mut corpus = structural_corpus();
    for seed in 0..5 {
        corpus.push((format!("random-connected-40-s{seed}"), random_connected(40, 30, seed)));
        corpus.push((format!("erdos-renyi-40-s{seed}"), erdos_renyi(40, 0.08, seed)));
    }
    corpus
}

fn construction_invariants() -> Outcome {
    let corpus = construction_corpus();
    let rows: Vec<(String, bool, Option<String>, serde_json::Value)> = corpus
        .par_iter()
        .flat_map_iter(|(name, g)| {
            [Variant::Plain, Variant::Successor].into_iter().filter_map(move |variant| {
                if variant == Variant::Successor && !g.is_connected() {
                    return None;
                }
                let (_, trace) = build_uniform_order(g, variant).expect("valid input");
                let rep = verify_invariant(g, &trace);
                Some((format!("{name}/{variant:?}"), rep.ok, rep.violation, serde_json::to_value(rep.stats).unwrap()))
            })
        })
        .collect();
    let failures: Vec<String> =
        rows.iter().filter(|r| !r.1).map(|r| format!("{}: {}", r.0, r.2.clone().unwrap_or_default())).collect();
    let stats: Vec<serde_json::Value> = rows.iter().map(|r| json!({ "run": r.0, "ok": r.1, "stats": r.3 })).collect();
    (failures.is_empty(), format!("{} violations in {} traces", failures.len(), rows.len()), json!({ "runs": stats, "failures": failures }))
}

fn uniformity(seed: u64) -> Outcome {
    let mut instances: Vec<(&str, String, Graph)> = Vec::new();
    for side in [5, 10, 15, 20] {
        instances.push(("grid", format!("grid-{side}"), grid(side, side)));
    }
    for (n, s) in [(50, 1), (100, 2), (200, 3), (500, 4)] {
        instances.push(("planar", format!("planar-{n}-s{s}"), planar_triangulation(n, s).graph));
    }
    let rows: Vec<(String, String, f64, Vec<usize>)> = instances
        .par_iter()
        .map(|(family, name, g)| {
            let (order, _) = build_uniform_order(g, Variant::Plain).expect("valid input");
            let per_r: Vec<usize> = (1..=8)
                .map(|r| crate::reach::adm_under(g, &order, r, AdmMode::Bounds).iter().map(|a| a.upper).max().unwrap_or(0))
                .collect();
            let ratio = per_r.iter().enumerate().map(|(i, &a)| a as f64 / (i + 1) as f64).fold(0.0, f64::max);
            (family.to_string(), name.clone(), ratio, per_r)
        })
        .collect();
    let mut families: Vec<(String, f64)> = Vec::new();
    for (family, _, ratio, _) in &rows {
        match families.iter_mut().find(|f| &f.0 == family) {
            Some(f) => f.1 = f.1.max(*ratio),
            None => families.push((family.clone(), *ratio)),
        }
    }
    let uniform_ok = families.iter().all(|f| f.1 <= UNIFORMITY_BOUND);

    // tripwire on tiny graphs against the exact optimum
    let small = small_random_graphs(100, 7, seed);
    let small_failures: Vec<String> = small
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, g)| {
            let (order, _) = build_uniform_order(g, Variant::Plain).expect("valid input");
            (1..=3usize).filter_map(move |r| {
                let opt = exact_optimum(g, r, Metric::Adm, DEFAULT_ENUMERATION_CAP).expect("n <= 7").value;
                let got = g.vertices().map(|v| vertex_admissibility(g, &order, v, r, AdmMode::Exact).unwrap().upper).max().unwrap_or(0);
                (got > SMALL_GRAPH_FACTOR * opt).then(|| format!("graph {i} r={r}: uniform {got} vs optimum {opt}"))
            })
        })
        .collect();
    let summary = format!(
        "max_r adm_r/r per family: {} (bound {UNIFORMITY_BOUND}); small-graph factor-{SMALL_GRAPH_FACTOR} tripwire: {} violations",
        families.iter().map(|f| format!("{} {:.2}", f.0, f.1)).collect::<Vec<_>>().join(", "),
        small_failures.len()
    );
    let details = json!({
        "families": families.iter().map(|f| json!({ "family": f.0, "max_ratio": f.1 })).collect::<Vec<_>>(),
        "instances": rows.iter().map(|r| json!({ "graph": r.1, "max_ratio": r.2, "adm_upper_by_r": r.3 })).collect::<Vec<_>>(),
        "tripwire": { "factor": SMALL_GRAPH_FACTOR, "note": "regression tripwire, not a theorem", "violations": small_failures },
    });
    (uniform_ok && small_failures.is_empty(), summary, details)
}

/// 100 seeded graphs with at most 40 vertices; every third one disconnected.
pub fn claims_corpus(seed: u64) -> Vec<Graph> {
    (0..100u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(7_919).wrapping_add(i));
            let n = rng.gen_range(2..=40);
            match i % 3 {
                0 => {
                    let a = rng.gen_range(1..n);
                    random_connected(a, a / 2, rng.gen()).disjoint_union(&random_connected(n - a, (n - a) / 2, rng.gen()))
                }
                1 => random_connected(n, rng.gen_range(0..=n), rng.gen()),
                _ => erdos_renyi(n, rng.gen_range(0.05..0.3), rng.gen()),
            }
        })
        .collect()
}

fn spanning_claims(seed: u64) -> Outcome {
    let graphs = claims_corpus(seed);
    let rows: Vec<(usize, bool, usize, Vec<String>)> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let aug = build_augmented(g).expect("valid input");
            let mut failures = Vec::new();
            let mut refined = 0;
            for r in 1..=3 {
                let rep = verify_claims(&aug, r);
                refined += rep.refined;
                if !rep.ok {
                    failures.push(format!(
                        "graph {i} r={r}: tree {} ledger {:?} charges {} adm {} > {}",
                        rep.tree_ok, rep.ledger_violations, rep.charges_ok, rep.adm_upper, rep.adm_threshold
                    ));
                }
            }
            (i, g.is_connected(), refined, failures)
        })
        .collect();
    let disconnected = rows.iter().filter(|r| !r.1).count();
    let refined: usize = rows.iter().map(|r| r.2).sum();
    let failures: Vec<String> = rows.into_iter().flat_map(|r| r.3).collect();
    (
        failures.is_empty(),
        format!("{} violations over {} graphs ({disconnected} disconnected) x r in 1..=3", failures.len(), graphs.len()),
        json!({ "graphs": graphs.len(), "disconnected": disconnected, "refined_vertices": refined, "failures": failures }),
    )
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.max(1e-9).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn runtime() -> Outcome {
    let mut points = Vec::new();
    for n in [50usize, 100, 200, 300] {
        let g = planar_triangulation(n, 8).graph;
        let best = (0..3)
            .map(|_| {
                let start = Instant::now();
                build_uniform_order(&g, Variant::Plain).expect("valid input");
                start.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min);
        points.push((n as f64, best));
    }
    let slope = log_log_slope(&points);
    let t300 = points.last().unwrap().1;
    (
        t300 < RUNTIME_LIMIT_SECS && slope < RUNTIME_SLOPE_LIMIT,
        format!("n=300 in {t300:.3}s (limit {RUNTIME_LIMIT_SECS}s), log-log slope {slope:.2} (limit {RUNTIME_SLOPE_LIMIT})"),
        json!({ "points": points.iter().map(|p| json!({ "n": p.0, "seconds": p.1 })).collect::<Vec<_>>(), "slope": slope }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [10.0, 20.0, 40.0].iter().map(|&x: &f64| (x, 3.0 * x.powi(3))).collect();
        assert!((log_log_slope(&pts) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn corpora_are_deterministic() {
        assert_eq!(small_random_graphs(5, 7, 1), small_random_graphs(5, 7, 1));
        assert_eq!(claims_corpus(2).len(), 100);
        assert!(claims_corpus(2).iter().all(|g| g.n() <= 40));
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(9, 0).passed);
    }
}
