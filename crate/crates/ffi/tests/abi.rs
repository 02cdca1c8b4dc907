//! Calls through the exported C ABI, checked against the Rust API.

use std::ffi::{CStr, CString};
use std::ptr;

use sparsity::generate::grid;
use sparsity::reach::metric_profile;
use sparsity_ffi::*;

fn new_graph(n: usize, edges: &[(usize, usize)]) -> *mut SparsityGraph {
    let flat: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mut g = ptr::null_mut();
    let st = unsafe { sparsity_graph_new(n, flat.as_ptr(), edges.len(), &mut g) };
    assert_eq!(st, SparsityStatus::Ok);
    g
}

fn last_error() -> String {
    let p = sparsity_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { sparsity_string_free(p) };
    s
}

const C5: [(usize, usize); 5] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];

#[test]
fn graph_lifecycle_and_errors() {
    let g = new_graph(5, &C5);
    unsafe {
        assert_eq!(sparsity_graph_vertex_count(g), 5);
        assert_eq!(sparsity_graph_edge_count(g), 5);
        sparsity_graph_free(g);
        sparsity_graph_free(ptr::null_mut());
        assert_eq!(sparsity_graph_vertex_count(ptr::null()), 0);
    }

    let mut out = ptr::null_mut();
    let bad = [0usize, 0];
    assert_eq!(unsafe { sparsity_graph_new(2, bad.as_ptr(), 1, &mut out) }, SparsityStatus::Parse);
    assert!(!last_error().is_empty());
    assert!(out.is_null());

    let text = CString::new("5 6\n6 7\n").unwrap();
    assert_eq!(unsafe { sparsity_graph_parse(text.as_ptr(), &mut out) }, SparsityStatus::Ok);
    assert_eq!(unsafe { sparsity_graph_vertex_count(out) }, 3);
    assert!(sparsity_last_error().is_null(), "success clears the error");
    unsafe { sparsity_graph_free(out) };

    assert_eq!(unsafe { sparsity_graph_parse(ptr::null(), &mut out) }, SparsityStatus::NullPointer);
    let version = unsafe { CStr::from_ptr(sparsity_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn profile_matches_rust_api() {
    let gr = grid(4, 4);
    let edges: Vec<(usize, usize)> = gr.edges().collect();
    let g = new_graph(gr.n(), &edges);
    let order: Vec<usize> = (0..gr.n()).rev().collect();
    let expected = metric_profile(&gr, &sparsity::LinearOrder::from_sequence(order.clone()).unwrap(), 2).unwrap();

    let mut p = SparsityProfile::default();
    let mut wreach = vec![0usize; gr.n()];
    let st = unsafe { sparsity_profile(g, order.as_ptr(), 2, false, &mut p, wreach.as_mut_ptr(), ptr::null_mut()) };
    assert_eq!(st, SparsityStatus::Ok);
    assert_eq!((p.wcol, p.col, p.adm_lower, p.adm_upper), (expected.wcol, expected.col, expected.adm_lower, expected.adm_upper));
    assert_eq!(wreach, expected.per_vertex.iter().map(|v| v.wreach).collect::<Vec<_>>());

    let dup = vec![0usize; gr.n()];
    let st = unsafe { sparsity_profile(g, dup.as_ptr(), 2, false, &mut p, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, SparsityStatus::InvalidArgument);
    assert_eq!(unsafe { sparsity_profile(g, ptr::null(), 2, true, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) }, SparsityStatus::NullPointer);
    unsafe { sparsity_graph_free(g) };
}

#[test]
fn exact_and_greedy_orders() {
    let g = new_graph(5, &C5);
    let mut value = 0;
    let mut order = vec![0usize; 5];
    let st = unsafe { sparsity_exact_optimum(g, 1, SparsityMetric::Wcol, 8, &mut value, order.as_mut_ptr()) };
    assert_eq!(st, SparsityStatus::Ok);
    assert_eq!(value, 3);
    let mut sorted = order.clone();
    sorted.sort();
    assert_eq!(sorted, vec![0, 1, 2, 3, 4]);

    let st = unsafe { sparsity_exact_optimum(g, 1, SparsityMetric::Adm, 3, &mut value, ptr::null_mut()) };
    assert_eq!(st, SparsityStatus::CapExceeded);

    let mut greedy = vec![0usize; 5];
    assert_eq!(unsafe { sparsity_greedy_order(g, 2, greedy.as_mut_ptr()) }, SparsityStatus::Ok);
    let mut p = SparsityProfile::default();
    let st = unsafe { sparsity_profile(g, greedy.as_ptr(), 1, false, &mut p, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, SparsityStatus::Ok);
    assert!(p.wcol >= value);
    unsafe { sparsity_graph_free(g) };
}

#[test]
fn uniform_order_and_trace() {
    let gr = grid(5, 5);
    let edges: Vec<(usize, usize)> = gr.edges().collect();
    let g = new_graph(gr.n(), &edges);
    for variant in [SparsityVariant::Plain, SparsityVariant::Successor] {
        let mut order = vec![0usize; gr.n()];
        let mut json = ptr::null_mut();
        assert_eq!(unsafe { sparsity_uniform_order(g, variant, order.as_mut_ptr(), &mut json) }, SparsityStatus::Ok);
        let trace: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(trace["n"], gr.n());
        order.sort();
        assert_eq!(order, (0..gr.n()).collect::<Vec<_>>());
    }
    unsafe { sparsity_graph_free(g) };

    let g = new_graph(4, &[(0, 1), (2, 3)]);
    let mut order = vec![0usize; 4];
    let st = unsafe { sparsity_uniform_order(g, SparsityVariant::Successor, order.as_mut_ptr(), ptr::null_mut()) };
    assert_eq!(st, SparsityStatus::Precondition);
    unsafe { sparsity_graph_free(g) };
}

#[test]
fn scatter_and_splitter() {
    let gr = grid(6, 6);
    let edges: Vec<(usize, usize)> = gr.edges().collect();
    let g = new_graph(gr.n(), &edges);
    let a: Vec<usize> = (0..gr.n()).collect();
    let mut json = ptr::null_mut();
    let st = unsafe { sparsity_scatter(g, ptr::null(), 1, a.as_ptr(), a.len(), 2, &mut json) };
    assert_eq!(st, SparsityStatus::Ok, "{}", last_error());
    let doc: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(doc["audit"]["ok"], true);

    let out_of_range = [99usize];
    let st = unsafe { sparsity_scatter(g, ptr::null(), 1, out_of_range.as_ptr(), 1, 1, &mut json) };
    assert_ne!(st, SparsityStatus::Ok);

    for (connector, seed) in [(SparsityConnector::MaxBall, 0), (SparsityConnector::First, 0), (SparsityConnector::Random, 9)] {
        let (mut rounds, mut won) = (0usize, false);
        let st = unsafe { sparsity_splitter_game(g, ptr::null(), 1, connector, seed, 1000, &mut rounds, &mut won) };
        assert_eq!(st, SparsityStatus::Ok);
        assert!(won);
        assert!(rounds >= 1);
    }
    unsafe { sparsity_graph_free(g) };
}

#[test]
fn spanning_tree_and_claims() {
    let g = new_graph(6, &[(0, 1), (1, 2), (3, 4), (4, 5), (5, 3)]);
    let mut parent = vec![0usize; 6];
    let (mut root, mut added) = (0usize, 0usize);
    assert_eq!(unsafe { sparsity_spanning_tree(g, parent.as_mut_ptr(), &mut root, &mut added) }, SparsityStatus::Ok);
    assert_eq!(parent[root], SPARSITY_NO_PARENT);
    assert_eq!(parent.iter().filter(|&&p| p == SPARSITY_NO_PARENT).count(), 1);
    assert!(added >= 1, "two components need a bridge");
    for v in 0..6 {
        // walking up reaches the root
        let mut x = v;
        for _ in 0..6 {
            if x == root {
                break;
            }
            x = parent[x];
        }
        assert_eq!(x, root);
    }

    let mut ok = false;
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sparsity_verify_claims(g, 2, &mut ok, &mut json) }, SparsityStatus::Ok);
    assert!(ok);
    let doc: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(doc["ok"], true);
    unsafe { sparsity_graph_free(g) };
}
