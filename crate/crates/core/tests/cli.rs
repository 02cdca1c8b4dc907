//! End-to-end runs of the `sparsity` binary. Every JSON document it emits
//! is validated against the shipped schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sparsity"));
    cmd.env("SPARSITY_THREADS", "2");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"))
}

fn validate(name: &str, doc: &Value) {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{doc}");
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const C5: &str = "0 1\n1 2\n2 3\n3 4\n4 0\n";

#[test]
fn oracle_on_five_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.el", C5);
    let doc = json_stdout(&run(&["oracle", "--in", &g, "--r", "1", "--metric", "wcol"]));
    validate("oracle", &doc);
    assert_eq!(doc["value"], 3);
    let too_big = write(dir.path(), "p.el", &(0..9).map(|i| format!("{i} {}\n", i + 1)).collect::<String>());
    let out = run(&["oracle", "--in", &too_big, "--r", "1", "--metric", "adm"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn metrics_profile_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.el", C5);
    let o = write(dir.path(), "o.txt", "0\n1\n2\n3\n4\n");
    let doc = json_stdout(&run(&["metrics", "--in", &g, "--order", &o, "--r", "2"]));
    validate("profile", &doc);
    assert_eq!(doc["per_vertex"][4]["adm_upper"], 3);
    assert!(doc.get("labels").is_none());

    let lab = write(dir.path(), "lab.el", "100 7\n7 42\n");
    let lo = write(dir.path(), "lo.txt", "42\n7\n100\n");
    let doc = json_stdout(&run(&["metrics", "--in", &lab, "--order", &lo, "--r", "1", "--exact"]));
    validate("profile", &doc);
    assert_eq!(doc["labels"], serde_json::json!([7, 42, 100]));

    let bad = write(dir.path(), "bad.txt", "0\n1\n");
    assert_eq!(run(&["metrics", "--in", &g, "--order", &bad, "--r", "1"]).status.code(), Some(2));
}

#[test]
fn order_trace_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.el");
    let g = g.to_str().unwrap();
    assert!(run(&["generate", "--family", "planar", "--size", "40", "--seed", "3", "--out", g]).status.success());
    for variant in ["plain", "successor"] {
        let trace = dir.path().join(format!("{variant}.json"));
        let order = dir.path().join(format!("{variant}.txt"));
        let out = run(&[
            "order", "--in", g, "--variant", variant, "--out", trace.to_str().unwrap(), "--order-out", order.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
        validate("trace", &doc);
        assert_eq!(std::fs::read_to_string(&order).unwrap().lines().count(), 40);
        let report = json_stdout(&run(&["verify-order", "--in", g, "--trace", trace.to_str().unwrap(), "--beta", "2"]));
        validate("invariant_report", &report);
        assert_eq!(report["ok"], true);
    }

    // a corrupted trace fails with exit code 1
    let trace = dir.path().join("plain.json");
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    let moved = doc["fragments"][0]["vertices"][0].clone();
    doc["fragments"][1]["vertices"].as_array_mut().unwrap().push(moved);
    std::fs::write(&trace, doc.to_string()).unwrap();
    let out = run(&["verify-order", "--in", g, "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    validate("invariant_report", &serde_json::from_slice(&out.stdout).unwrap());
}

#[test]
fn scatter_and_splitter() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("grid.el");
    let g = g.to_str().unwrap();
    assert!(run(&["generate", "--family", "grid", "--size", "6", "--out", g]).status.success());
    let order = dir.path().join("o.txt");
    assert!(run(&["greedy-order", "--in", g, "--r", "2", "--out", order.to_str().unwrap()]).status.success());

    let doc = json_stdout(&run(&["scatter", "--in", g, "--r", "1"]));
    validate("scatter", &doc);
    assert_eq!(doc["audit"]["ok"], true);

    let a = write(dir.path(), "a.txt", "0\n5\n30\n35\n");
    let out = run(&["scatter", "--in", g, "--r", "1", "--a", &a, "--m", "3"]);
    assert_eq!(out.status.code(), Some(2), "precondition violation is an error");

    for connector in ["max-ball", "first", "random:5"] {
        let doc = json_stdout(&run(&[
            "splitter", "--in", g, "--r", "1", "--order", order.to_str().unwrap(), "--connector", connector,
        ]));
        validate("transcript", &doc);
        assert_eq!(doc["winner"], "splitter");
        assert_eq!(doc["order_file"], order.to_str().unwrap());
    }
    assert_eq!(run(&["splitter", "--in", g, "--r", "1", "--connector", "sneaky"]).status.code(), Some(2));
}

#[test]
fn augment_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "two.el", "p 4 2\n0 1\n2 3\n");
    let out_dir = dir.path().join("aug");
    let out = run(&["augment", "--in", &g, "--r", "2", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let read = |f: &str| -> Value { serde_json::from_str(&std::fs::read_to_string(out_dir.join(f)).unwrap()).unwrap() };
    validate("tree", &read("tree.json"));
    validate("charges", &read("charges.json"));
    validate("claims", &read("claims.json"));
    let h = std::fs::read_to_string(out_dir.join("h.el")).unwrap();
    assert_eq!(h, "p 4 3\n0 1\n2 3\n# added\n1 2\n");
    let parsed = sparsity::parse_graph(&h).unwrap();
    assert!(parsed.warnings.is_empty());

    let doc = json_stdout(&run(&["verify-claims", "--in", &g, "--r", "1"]));
    validate("claims", &doc);
    assert_eq!(doc["ok"], true);
}

#[test]
fn generation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"corpus": [{"family": "planar", "size": 60, "seed": 1}, {"family": "tree", "size": 30, "seed": 2}], "cap": 8}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        assert!(run(&["generate", "--config", &cfg, "--out", d.to_str().unwrap()]).status.success());
    }
    for name in ["planar-60-s1.el", "tree-30-s2.el"] {
        let x = std::fs::read(a.join(name)).unwrap();
        assert_eq!(x, std::fs::read(b.join(name)).unwrap());
        assert!(String::from_utf8(x).unwrap().contains("seed="));
    }
    let bad = write(dir.path(), "bad.json", r#"{"corpus": [], "cap": 12}"#);
    assert_eq!(run(&["generate", "--config", &bad, "--out", a.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn suite_subset_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["suite", "--criteria", "5,8", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.starts_with("criterion")).count(), 2);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    validate("suite_report", &doc);
    assert!(std::fs::read_to_string(dir.path().join("report.md")).unwrap().contains("| 5 |"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["metrics", "--in", "/definitely/missing.el", "--r", "1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "loop.el", "0 1\n1 1\n");
    let out = run(&["metrics", "--in", &g, "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
