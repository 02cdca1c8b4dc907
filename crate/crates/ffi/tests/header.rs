//! The generated header is current and usable from C.

use std::path::{Path, PathBuf};
use std::process::Command;

const EXPORTS: &[&str] = &[
    "sparsity_last_error",
    "sparsity_version",
    "sparsity_graph_new",
    "sparsity_graph_parse",
    "sparsity_graph_free",
    "sparsity_graph_vertex_count",
    "sparsity_graph_edge_count",
    "sparsity_profile",
    "sparsity_exact_optimum",
    "sparsity_greedy_order",
    "sparsity_uniform_order",
    "sparsity_scatter",
    "sparsity_splitter_game",
    "sparsity_spanning_tree",
    "sparsity_verify_claims",
    "sparsity_string_free",
];

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sparsity.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in EXPORTS {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    for item in ["typedef struct SparsityGraph SparsityGraph", "SPARSITY_STATUS_CHECK_FAILED", "SPARSITY_NO_PARENT"] {
        assert!(text.contains(item), "{item} missing from header");
    }
}

/// Directory holding the built library artifacts (`target/<profile>`).
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "sparsity.h"

int main(void) {
    size_t edges[] = {0, 1, 1, 2, 2, 3, 3, 4, 4, 0};
    SparsityGraph *g = NULL;
    if (sparsity_graph_new(5, edges, 5, &g) != SPARSITY_STATUS_OK) return 10;
    size_t value = 0;
    if (sparsity_exact_optimum(g, 1, SPARSITY_METRIC_WCOL, 8, &value, NULL) != SPARSITY_STATUS_OK) return 11;
    if (value != 3) return 12;
    size_t bad[] = {0, 0, 0, 0, 0};
    SparsityProfile p;
    if (sparsity_profile(g, bad, 1, false, &p, NULL, NULL) != SPARSITY_STATUS_INVALID_ARGUMENT) return 13;
    if (sparsity_last_error() == NULL) return 14;
    size_t parent[5];
    size_t root = 0;
    if (sparsity_spanning_tree(g, parent, &root, NULL) != SPARSITY_STATUS_OK) return 15;
    if (parent[root] != SPARSITY_NO_PARENT) return 16;
    sparsity_graph_free(g);
    printf("ok %s\n", sparsity_version());
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let lib = artifact_dir().join("libsparsity_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler runs");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
