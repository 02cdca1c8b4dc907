use proptest::prelude::*;

use sparsity::brute;
use sparsity::generate::erdos_renyi;
use sparsity::graph::{parse_graph, r_ball, write_edge_list};
use sparsity::reach::{metric_profile, sreach, vertex_admissibility, wreach, AdmMode};
use sparsity::uniform::{build_uniform_order, verify_invariant, Variant};
use sparsity::{Graph, LinearOrder};

fn graph_and_order(max_n: usize) -> impl Strategy<Value = (Graph, LinearOrder)> {
    (1..=max_n, 0.0f64..0.7, any::<u64>()).prop_flat_map(|(n, p, seed)| {
        let g = erdos_renyi(n, p, seed);
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |seq| (g.clone(), LinearOrder::from_sequence(seq).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn balls_grow_with_radius((g, _) in graph_and_order(20), r in 0usize..5) {
        for v in g.vertices() {
            let small = r_ball(&g, v, r).unwrap();
            let big = r_ball(&g, v, r + 1).unwrap();
            prop_assert!(small.contains(v));
            prop_assert!(small.is_subset(&big));
        }
    }

    #[test]
    fn reach_sets_nest((g, order) in graph_and_order(16), r in 0usize..4) {
        for v in g.vertices() {
            let s = sreach(&g, &order, v, r).unwrap();
            let w = wreach(&g, &order, v, r).unwrap();
            let ball = r_ball(&g, v, r).unwrap();
            prop_assert!(s.is_subset(&w));
            prop_assert!(w.is_subset(&ball));
            prop_assert!(s.contains(v) && w.contains(v));
        }
    }

    #[test]
    fn kernels_match_path_enumeration((g, order) in graph_and_order(7), r in 1usize..4) {
        for v in g.vertices() {
            prop_assert_eq!(wreach(&g, &order, v, r).unwrap().into_vec(), brute::wreach(&g, &order, v, r));
            prop_assert_eq!(sreach(&g, &order, v, r).unwrap().into_vec(), brute::sreach(&g, &order, v, r));
            let exact = vertex_admissibility(&g, &order, v, r, AdmMode::Exact).unwrap();
            prop_assert_eq!(exact.upper, brute::admissibility(&g, &order, v, r));
        }
    }

    #[test]
    fn profile_chain_under_fixed_order((g, order) in graph_and_order(14), r in 1usize..4) {
        let p = metric_profile(&g, &order, r).unwrap();
        prop_assert!(p.adm_lower <= p.adm_upper);
        prop_assert!(p.col <= p.wcol);
        // every strongly reached vertex is the end of its own path
        prop_assert!(p.adm_lower <= p.col);
    }

    #[test]
    fn edge_list_round_trip((g, _) in graph_and_order(25)) {
        let parsed = parse_graph(&write_edge_list(&g)).unwrap();
        prop_assert!(parsed.is_identity());
        prop_assert_eq!(parsed.graph, g);
    }

    #[test]
    fn construction_invariant_on_random_graphs((g, _) in graph_and_order(30)) {
        let (order, trace) = build_uniform_order(&g, Variant::Plain).unwrap();
        prop_assert_eq!(order.len(), g.n());
        let rep = verify_invariant(&g, &trace);
        prop_assert!(rep.ok, "{:?}", rep);
    }
}
