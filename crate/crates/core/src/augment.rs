//! Augmentation of `G` to a supergraph `H` with a bounded-degree spanning
//! tree whose admissibility stays close to `col_{2r}(G)`.
//!
//! The successor variant of the uniform order is built per component.
//! Each fragment's entry vertex `w` is charged to its anchor `w'`. For an
//! anchor with charges `u_1, ..., u_h` (in construction order), `w' u_1` and
//! the chain `u_1 u_2, ..., u_{h-1} u_h` become spanning edges together with
//! all fragment tree edges; chain edges missing from `G` are added to `H`.
//! Components are joined in a path by bridges from the last vertex of one
//! component to the first vertex of the next.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, LinearOrder};
use crate::reach::{adm_under, col_under, vertex_admissibility, AdmMode};
use crate::uniform::{build_uniform_order, ConstructionTrace, Variant};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeEntry {
    pub anchor: usize,
    pub charged: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    pub base: Graph,
    /// `H`: the base graph plus `added`.
    pub graph: Graph,
    /// Edges of `H` not in `G`, including bridges.
    pub added: Vec<(usize, usize)>,
    pub bridges: Vec<(usize, usize)>,
    /// `D(w)` for every vertex, in construction order.
    pub charges: Vec<Vec<usize>>,
    pub spanning: Vec<(usize, usize)>,
    pub order: LinearOrder,
    pub trace: ConstructionTrace,
}

impl AugmentedGraph {
    pub fn is_connected_input(&self) -> bool {
        self.bridges.is_empty()
    }

    pub fn charge_entries(&self) -> Vec<ChargeEntry> {
        self.charges
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(anchor, c)| ChargeEntry { anchor, charged: c.clone() })
            .collect()
    }

    pub fn bridge_endpoints(&self) -> HashSet<usize> {
        self.bridges.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

pub fn build_augmented(g: &Graph) -> Result<AugmentedGraph> {
    let n = g.n();
    let mut sequence = Vec::with_capacity(n);
    let mut trace = ConstructionTrace { variant: Variant::Successor, n, fragments: Vec::new(), steps: Vec::new() };
    let mut spans: Vec<(usize, usize)> = Vec::new();
    for comp in g.components() {
        let (sub, map) = g.induced_subgraph(&comp);
        let (local, t) = build_uniform_order(&sub, Variant::Successor)?;
        let start = sequence.len();
        sequence.extend(local.sequence().iter().map(|&v| map[v]));
        spans.push((start, sequence.len()));
        let part = t.relabel(&map, trace.fragments.len(), n);
        trace.fragments.extend(part.fragments);
        trace.steps.extend(part.steps);
    }
    let order = LinearOrder::from_sequence(sequence)?;

    let mut charges = vec![Vec::new(); n];
    for f in &trace.fragments {
        if let (Some(w), Some(a)) = (f.entry, f.anchor) {
            charges[a].push(w);
        }
    }
    let mut spanning: Vec<(usize, usize)> = trace.fragments.iter().flat_map(|f| f.tree_edges.iter().copied()).collect();
    let mut added = Vec::new();
    for (a, d) in charges.iter().enumerate() {
        let Some(&first) = d.first() else { continue };
        spanning.push((a, first));
        for pair in d.windows(2) {
            spanning.push((pair[0], pair[1]));
            if !g.has_edge(pair[0], pair[1]) {
                added.push(norm(pair[0], pair[1]));
            }
        }
    }
    let seq = order.sequence();
    let bridges: Vec<(usize, usize)> = spans.windows(2).map(|w| (seq[w[0].1 - 1], seq[w[1].0])).collect();
    spanning.extend(&bridges);
    added.extend(bridges.iter().map(|&(a, b)| norm(a, b)));
    added.sort_unstable();
    added.dedup();
    let graph = g.with_edges(&added)?;
    Ok(AugmentedGraph { base: g.clone(), graph, added, bridges, charges, spanning, order, trace })
}

/// Spanning tree as a parent array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTree {
    pub root: usize,
    /// `parent[v]`, `None` for the root.
    pub parent: Vec<Option<usize>>,
}

impl RootedTree {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.parent.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                deg[v] += 1;
                deg[p] += 1;
            }
        }
        deg
    }
}

/// Checks the spanning edges form a spanning tree of `H` and roots it at
/// the order-minimum.
pub fn extract_spanning_tree(aug: &AugmentedGraph) -> Result<RootedTree> {
    let n = aug.graph.n();
    let Some(&root) = aug.order.sequence().first() else {
        return Err(Error::SpanningTree("graph has no vertices".into()));
    };
    if aug.spanning.len() + 1 != n {
        return Err(Error::SpanningTree(format!("{} edges for {n} vertices", aug.spanning.len())));
    }
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(u, v) in &aug.spanning {
        if u >= n || v >= n || !aug.graph.has_edge(u, v) {
            return Err(Error::SpanningTree(format!("{u}-{v} is not an edge of H")));
        }
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &y in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                stack.push(y);
            }
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::SpanningTree(format!("vertex {v} is not connected to the root")));
    }
    Ok(RootedTree { root, parent })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimsReport {
    pub r: usize,
    pub ok: bool,
    pub tree_ok: bool,
    pub tree_error: Option<String>,
    pub ledger_ok: bool,
    /// Vertices whose tree degree exceeds their allowance.
    pub ledger_violations: Vec<usize>,
    pub max_tree_degree: usize,
    pub max_fragment_degree: usize,
    pub charges_ok: bool,
    pub col_2r: usize,
    /// Largest admissibility upper bound of `H` under `L` after refinement.
    pub adm_upper: usize,
    pub adm_threshold: usize,
    /// Vertices whose flow bound needed the exact search.
    pub refined: usize,
    pub adm_ok: bool,
}

pub fn verify_claims(aug: &AugmentedGraph, r: usize) -> ClaimsReport {
    let g = &aug.base;
    let n = g.n();
    let (tree_ok, tree_error, tree_deg) = match extract_spanning_tree(aug) {
        Ok(t) => (true, None, t.degrees()),
        Err(e) => {
            let mut deg = vec![0; n];
            for &(u, v) in &aug.spanning {
                deg[u.min(n.saturating_sub(1))] += 1;
                deg[v.min(n.saturating_sub(1))] += 1;
            }
            (false, Some(e.to_string()), deg)
        }
    };

    let frag_deg = aug.trace.fragment_degrees();
    let bridge_ends = aug.bridge_endpoints();
    let ledger_violations: Vec<usize> = (0..n)
        .filter(|&v| {
            let allowance = frag_deg[v] + 3 + if bridge_ends.contains(&v) { 2 } else { 0 };
            tree_deg[v] > allowance
        })
        .collect();

    let mut charged_once = vec![0usize; n];
    let mut charges_ok = true;
    for (a, d) in aug.charges.iter().enumerate() {
        for &w in d {
            charged_once[w] += 1;
            charges_ok &= aug.order.less(a, w) && g.has_edge(a, w);
        }
    }
    let entries: HashSet<usize> = aug.trace.fragments.iter().filter_map(|f| f.entry).collect();
    charges_ok &= (0..n).all(|v| charged_once[v] == usize::from(entries.contains(&v)));

    let col_2r = col_under(g, &aug.order, 2 * r);
    let adm_threshold = col_2r + 2 + if aug.is_connected_input() { 0 } else { 2 };
    let mut refined = 0;
    let adm_upper = if r == 0 {
        1
    } else {
        adm_under(&aug.graph, &aug.order, r, AdmMode::Bounds)
            .into_iter()
            .enumerate()
            .map(|(v, a)| {
                if a.upper <= adm_threshold {
                    return a.upper;
                }
                refined += 1;
                vertex_admissibility(&aug.graph, &aug.order, v, r, AdmMode::Exact).map_or(a.upper, |e| e.upper)
            })
            .max()
            .unwrap_or(0)
    };
    let adm_ok = adm_upper <= adm_threshold;
    let ledger_ok = ledger_violations.is_empty();
    ClaimsReport {
        r,
        ok: tree_ok && ledger_ok && charges_ok && adm_ok,
        tree_ok,
        tree_error,
        ledger_ok,
        ledger_violations,
        max_tree_degree: tree_deg.iter().copied().max().unwrap_or(0),
        max_fragment_degree: frag_deg.iter().copied().max().unwrap_or(0),
        charges_ok,
        col_2r,
        adm_upper,
        adm_threshold,
        refined,
        adm_ok,
    }
}
