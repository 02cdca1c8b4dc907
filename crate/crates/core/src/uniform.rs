//! Greedy construction of a single vertex order whose admissibility grows
//! linearly in the radius on graphs excluding a topological minor.
//!
//! The graph is carved into connected fragments `H_0, H_1, ...`. At each
//! step the residual graph `G_i` (everything not yet in a fragment) is
//! inspected, one component `C` is chosen, and a root `v` maximising `m(v)`
//! (the number of fragments `v` reaches by disjoint paths through `G_i`) is
//! picked. The next fragment is a minimal subtree of the BFS tree of `C`
//! rooted at `v` that touches every fragment adjacent to `C`. Fragments
//! adjacent to a common residual component always form a clique minor
//! model, which [`verify_invariant`] checks.
//!
//! The order lists fragments in construction order. It does not depend
//! on any radius.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{Bfs, Graph, LinearOrder};

const UNASSIGNED: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Vertices inside a fragment follow BFS discovery order from its root.
    Plain,
    /// The fragment's neighbour of its anchor goes first, as required by
    /// the spanning-tree augmentation.
    Successor,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Variant::Plain),
            "successor" => Ok(Variant::Successor),
            other => Err(format!("unknown variant `{other}` (expected plain or successor)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub index: usize,
    pub root: usize,
    /// Vertices in their final order.
    pub vertices: Vec<usize>,
    /// `(parent, child)` pairs of the rooted fragment tree.
    pub tree_edges: Vec<(usize, usize)>,
    /// Successor variant: the fragment's first vertex, adjacent to `anchor`.
    pub entry: Option<usize>,
    /// Successor variant: the largest vertex of the last adjacent fragment
    /// that touches the component.
    pub anchor: Option<usize>,
}

/// Record of the step that produced one fragment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    /// The residual component the fragment was carved from, sorted.
    pub component: Vec<usize>,
    /// Indices of earlier fragments adjacent to the component, ascending.
    pub connected: Vec<usize>,
    /// `(vertex, m(vertex))` for every vertex of the component.
    pub m_values: Vec<(usize, usize)>,
    pub root_m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub variant: Variant,
    pub n: usize,
    pub fragments: Vec<Fragment>,
    pub steps: Vec<Step>,
}

/// Empirical stand-ins for the constants of the quality analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStats {
    pub fragments: usize,
    /// Largest `m(v)` of a chosen root.
    pub max_root_m: usize,
    /// Largest degree inside any fragment tree.
    pub max_fragment_degree: usize,
    /// Largest number of fragments adjacent to a processed component.
    pub max_connected: usize,
}

impl ConstructionTrace {
    pub fn order(&self) -> Result<LinearOrder> {
        LinearOrder::from_sequence(self.fragments.iter().flat_map(|f| f.vertices.iter().copied()).collect())
    }

    /// Fragment index of every vertex (`usize::MAX` if absent).
    pub fn owner(&self) -> Vec<usize> {
        let mut owner = vec![UNASSIGNED; self.n];
        for f in &self.fragments {
            for &v in &f.vertices {
                if v < self.n {
                    owner[v] = f.index;
                }
            }
        }
        owner
    }

    /// Tree degree of every vertex inside its own fragment.
    pub fn fragment_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for f in &self.fragments {
            for &(a, b) in &f.tree_edges {
                deg[a] += 1;
                deg[b] += 1;
            }
        }
        deg
    }

    pub fn stats(&self) -> TraceStats {
        TraceStats {
            fragments: self.fragments.len(),
            max_root_m: self.steps.iter().map(|s| s.root_m).max().unwrap_or(0),
            max_fragment_degree: self.fragment_degrees().into_iter().max().unwrap_or(0),
            max_connected: self.steps.iter().map(|s| s.connected.len()).max().unwrap_or(0),
        }
    }

    /// Renames vertices through `map` (local id -> global id), shifts
    /// fragment indices by `offset`, and sets the vertex count to `n`.
    pub fn relabel(&self, map: &[usize], offset: usize, n: usize) -> ConstructionTrace {
        let mv = |v: &usize| map[*v];
        ConstructionTrace {
            variant: self.variant,
            n,
            fragments: self
                .fragments
                .iter()
                .map(|f| Fragment {
                    index: f.index + offset,
                    root: map[f.root],
                    vertices: f.vertices.iter().map(mv).collect(),
                    tree_edges: f.tree_edges.iter().map(|&(a, b)| (map[a], map[b])).collect(),
                    entry: f.entry.map(|v| map[v]),
                    anchor: f.anchor.map(|v| map[v]),
                })
                .collect(),
            steps: self
                .steps
                .iter()
                .map(|s| {
                    let mut component: Vec<usize> = s.component.iter().map(mv).collect();
                    component.sort_unstable();
                    Step {
                        component,
                        connected: s.connected.iter().map(|j| j + offset).collect(),
                        m_values: s.m_values.iter().map(|&(v, m)| (map[v], m)).collect(),
                        root_m: s.root_m,
                    }
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// shared helpers

fn owner_of(n: usize, fragments: &[Fragment]) -> Vec<usize> {
    let mut owner = vec![UNASSIGNED; n];
    for (i, f) in fragments.iter().enumerate() {
        for &v in &f.vertices {
            owner[v] = i;
        }
    }
    owner
}

/// Sorted distinct owners among the neighbours of `x`.
fn adjacent_fragments(g: &Graph, owner: &[usize], x: usize) -> Vec<usize> {
    let mut out: Vec<usize> = g.neighbours(x).iter().map(|&y| owner[y]).filter(|&o| o != UNASSIGNED).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_component(g: &Graph, owner: &[usize], component: &[usize]) -> Result<()> {
    let Some(&first) = component.first() else {
        return Err(Error::NotAComponent("empty vertex set".into()));
    };
    let mut member = HashSet::new();
    for &v in component {
        g.check_vertex(v)?;
        if owner[v] != UNASSIGNED {
            return Err(Error::NotAComponent(format!("vertex {v} already belongs to fragment {}", owner[v])));
        }
        member.insert(v);
    }
    let mut bfs = Bfs::new(g.n());
    let reached = bfs.run(g, first, usize::MAX, |y| owner[y] == UNASSIGNED, |_| true);
    if reached.len() != member.len() || reached.iter().any(|v| !member.contains(v)) {
        return Err(Error::NotAComponent("set is not a full connected component of the residual graph".into()));
    }
    Ok(())
}

/// Computes `m(v)` for vertices of one residual component. The split-vertex
/// network is built once and reused for every source.
struct MCalculator {
    net: FlowNetwork,
    local: HashMap<usize, usize>,
    sink: usize,
    targets: u32,
}

impl MCalculator {
    fn new(g: &Graph, owner: &[usize], component: &[usize], connected: &[usize]) -> Self {
        let c = component.len();
        let local: HashMap<usize, usize> = component.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let frag_node: HashMap<usize, usize> = connected.iter().enumerate().map(|(k, &j)| (j, 2 * c + k)).collect();
        let sink = 2 * c + connected.len();
        let mut net = FlowNetwork::new(sink + 1);
        for (i, &x) in component.iter().enumerate() {
            net.add_edge(2 * i, 2 * i + 1, 1);
            for &y in g.neighbours(x) {
                if let Some(&ly) = local.get(&y) {
                    net.add_edge(2 * i + 1, 2 * ly, 1);
                } else if owner[y] != UNASSIGNED {
                    // at most one arc per (vertex, fragment) pair matters; extras are harmless
                    net.add_edge(2 * i + 1, frag_node[&owner[y]], 1);
                }
            }
        }
        for k in 0..connected.len() {
            net.add_edge(2 * c + k, sink, 1);
        }
        MCalculator { net, local, sink, targets: connected.len() as u32 }
    }

    fn m(&mut self, v: usize) -> usize {
        self.net.reset();
        let source = 2 * self.local[&v] + 1;
        self.net.max_flow(source, self.sink, self.targets) as usize
    }
}

// ---------------------------------------------------------------------------
// public per-step operations

/// Indices of fragments with an edge into `component`, which must be a
/// connected component of `G` minus all listed fragments.
pub fn connected_fragments(g: &Graph, fragments: &[Fragment], component: &[usize]) -> Result<Vec<usize>> {
    let owner = owner_of(g.n(), fragments);
    check_component(g, &owner, component)?;
    let mut out: Vec<usize> = component.iter().flat_map(|&x| adjacent_fragments(g, &owner, x)).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Maximum number of paths from `v` to distinct fragments adjacent to
/// `component`, pairwise sharing only `v`, with interiors in the residual
/// graph.
pub fn compute_m(g: &Graph, fragments: &[Fragment], component: &[usize], v: usize) -> Result<usize> {
    let owner = owner_of(g.n(), fragments);
    check_component(g, &owner, component)?;
    if !component.contains(&v) {
        return Err(Error::Precondition(format!("vertex {v} is not in the component")));
    }
    let connected = connected_fragments(g, fragments, component)?;
    Ok(MCalculator::new(g, &owner, component, &connected).m(v))
}

// ---------------------------------------------------------------------------
// construction

struct Builder<'a> {
    g: &'a Graph,
    variant: Variant,
    owner: Vec<usize>,
    rank: Vec<usize>,
    assigned: usize,
    next_unassigned: usize,
    fragments: Vec<Fragment>,
    steps: Vec<Step>,
}

impl Builder<'_> {
    fn residual_component(&mut self) -> Vec<usize> {
        while self.owner[self.next_unassigned] != UNASSIGNED {
            self.next_unassigned += 1;
        }
        let owner = &self.owner;
        let mut bfs = Bfs::new(self.g.n());
        let mut comp = bfs.run(self.g, self.next_unassigned, usize::MAX, |y| owner[y] == UNASSIGNED, |_| true).to_vec();
        comp.sort_unstable();
        comp
    }

    fn step(&mut self) {
        let g = self.g;
        let component = self.residual_component();
        let mut connected: Vec<usize> =
            component.iter().flat_map(|&x| adjacent_fragments(g, &self.owner, x)).collect();
        connected.sort_unstable();
        connected.dedup();
        let s = connected.len();

        // m(v) is 0 without targets and 1 with a single one (C is connected)
        let m_values: Vec<(usize, usize)> = if s <= 1 {
            component.iter().map(|&v| (v, s)).collect()
        } else {
            let mut calc = MCalculator::new(g, &self.owner, &component, &connected);
            component.iter().map(|&v| (v, calc.m(v))).collect()
        };
        let (root, root_m) = m_values
            .iter()
            .copied()
            .min_by_key(|&(v, m)| (std::cmp::Reverse(m), v))
            .expect("component is non-empty");

        // BFS tree of G[C] from the root, neighbours in ascending id order
        let in_comp: HashSet<usize> = component.iter().copied().collect();
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut depth: HashMap<usize, usize> = HashMap::new();
        let mut discovery = vec![root];
        depth.insert(root, 0);
        let mut head = 0;
        while head < discovery.len() {
            let x = discovery[head];
            head += 1;
            for &y in g.neighbours(x) {
                if in_comp.contains(&y) && !depth.contains_key(&y) {
                    depth.insert(y, depth[&x] + 1);
                    parent.insert(y, x);
                    discovery.push(y);
                }
            }
        }

        // neighbours in C of each adjacent fragment
        let mut touching: HashMap<usize, Vec<usize>> = HashMap::new();
        for &x in &component {
            for j in adjacent_fragments(g, &self.owner, x) {
                touching.entry(j).or_default().push(x);
            }
        }

        let mut entry = None;
        let mut anchor = None;
        let mut targets = Vec::with_capacity(s);
        for (k, &j) in connected.iter().enumerate() {
            let last = k + 1 == s;
            if self.variant == Variant::Successor && last {
                let w_anchor = self.fragments[j]
                    .vertices
                    .iter()
                    .copied()
                    .filter(|&a| g.neighbours(a).iter().any(|y| in_comp.contains(y)))
                    .max_by_key(|&a| self.rank[a])
                    .expect("adjacent fragment touches the component");
                let w = *g
                    .neighbours(w_anchor)
                    .iter()
                    .find(|y| in_comp.contains(y))
                    .expect("anchor has a neighbour in the component");
                anchor = Some(w_anchor);
                entry = Some(w);
                targets.push(w);
            } else {
                let best = touching[&j].iter().copied().min_by_key(|&x| (depth[&x], x)).unwrap();
                targets.push(best);
            }
        }

        // union of root paths to the targets
        let mut in_tree: HashSet<usize> = HashSet::from([root]);
        for &t in &targets {
            let mut x = t;
            while in_tree.insert(x) {
                x = parent[&x];
            }
        }
        // prune leaves whose removal keeps every adjacent fragment covered
        let mut cover: HashMap<usize, usize> = HashMap::new();
        let mut children: HashMap<usize, usize> = HashMap::new();
        for &x in &in_tree {
            for j in adjacent_fragments(g, &self.owner, x) {
                *cover.entry(j).or_default() += 1;
            }
            if x != root {
                *children.entry(parent[&x]).or_default() += 1;
            }
        }
        let mut leaves: Vec<usize> =
            in_tree.iter().copied().filter(|x| *x != root && children.get(x).copied().unwrap_or(0) == 0).collect();
        leaves.sort_by_key(|&x| (std::cmp::Reverse(depth[&x]), std::cmp::Reverse(x)));
        let mut stack = leaves;
        stack.reverse();
        while let Some(x) = stack.pop() {
            if x == root || Some(x) == entry || !in_tree.contains(&x) {
                continue;
            }
            if children.get(&x).copied().unwrap_or(0) > 0 {
                continue;
            }
            let adj = adjacent_fragments(g, &self.owner, x);
            if adj.iter().all(|j| cover[j] >= 2) {
                in_tree.remove(&x);
                for j in adj {
                    *cover.get_mut(&j).unwrap() -= 1;
                }
                let p = parent[&x];
                *children.get_mut(&p).unwrap() -= 1;
                if children[&p] == 0 {
                    stack.push(p);
                }
            }
        }

        let mut vertices: Vec<usize> = discovery.iter().copied().filter(|x| in_tree.contains(x)).collect();
        if let Some(w) = entry {
            vertices.retain(|&x| x != w);
            vertices.insert(0, w);
        }
        let tree_edges: Vec<(usize, usize)> = discovery
            .iter()
            .copied()
            .filter(|x| *x != root && in_tree.contains(x))
            .map(|x| (parent[&x], x))
            .collect();

        let index = self.fragments.len();
        for &x in &vertices {
            self.owner[x] = index;
            self.rank[x] = self.assigned;
            self.assigned += 1;
        }
        self.fragments.push(Fragment { index, root, vertices, tree_edges, entry, anchor });
        self.steps.push(Step { component, connected, m_values, root_m });
    }
}

/// Runs the construction to completion and returns the order together
/// with its trace. The successor variant requires a connected graph.
pub fn build_uniform_order(g: &Graph, variant: Variant) -> Result<(LinearOrder, ConstructionTrace)> {
    if variant == Variant::Successor && !g.is_connected() {
        return Err(Error::Precondition("successor variant needs a connected graph".into()));
    }
    let mut b = Builder {
        g,
        variant,
        owner: vec![UNASSIGNED; g.n()],
        rank: vec![UNASSIGNED; g.n()],
        assigned: 0,
        next_unassigned: 0,
        fragments: Vec::new(),
        steps: Vec::new(),
    };
    while b.assigned < g.n() {
        b.step();
    }
    let trace = ConstructionTrace { variant, n: g.n(), fragments: b.fragments, steps: b.steps };
    Ok((trace.order()?, trace))
}

// ---------------------------------------------------------------------------
// verification

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub ok: bool,
    pub partition: bool,
    pub disjoint: bool,
    pub trees: bool,
    pub components: bool,
    pub bfs_isometry: bool,
    pub clique_minor: bool,
    pub successor_rules: bool,
    pub violation: Option<String>,
    pub stats: TraceStats,
}

struct Findings {
    flags: [bool; 7],
    violation: Option<String>,
}

impl Findings {
    fn fail(&mut self, flag: usize, msg: String) {
        self.flags[flag] = false;
        if self.violation.is_none() {
            self.violation = Some(msg);
        }
    }
}

const PARTITION: usize = 0;
const DISJOINT: usize = 1;
const TREES: usize = 2;
const COMPONENTS: usize = 3;
const ISOMETRY: usize = 4;
const CLIQUE: usize = 5;
const SUCCESSOR: usize = 6;

/// Checks a trace against the graph: fragments partition the vertex set,
/// each fragment tree is a tree of `G` that is a BFS subtree of its
/// component, and after every step the fragments adjacent to each residual
/// component are pairwise adjacent. Reports the first violation found.
pub fn verify_invariant(g: &Graph, trace: &ConstructionTrace) -> InvariantReport {
    let mut f = Findings { flags: [true; 7], violation: None };
    let n = g.n();
    let stats = trace.stats();
    let report = |f: Findings| InvariantReport {
        ok: f.flags.iter().all(|&b| b),
        partition: f.flags[PARTITION],
        disjoint: f.flags[DISJOINT],
        trees: f.flags[TREES],
        components: f.flags[COMPONENTS],
        bfs_isometry: f.flags[ISOMETRY],
        clique_minor: f.flags[CLIQUE],
        successor_rules: f.flags[SUCCESSOR],
        violation: f.violation,
        stats,
    };

    if trace.n != n {
        f.fail(PARTITION, format!("trace is for {} vertices, graph has {n}", trace.n));
        return report(f);
    }
    let mut owner = vec![UNASSIGNED; n];
    for (i, frag) in trace.fragments.iter().enumerate() {
        if frag.index != i {
            f.fail(PARTITION, format!("fragment at position {i} carries index {}", frag.index));
        }
        for &v in &frag.vertices {
            if v >= n {
                f.fail(PARTITION, format!("fragment {i} lists unknown vertex {v}"));
                return report(f);
            }
            if owner[v] != UNASSIGNED {
                f.fail(DISJOINT, format!("vertex {v} lies in fragments {} and {i}", owner[v]));
            }
            owner[v] = i;
        }
    }
    if !f.flags[DISJOINT] {
        return report(f);
    }
    if let Some(v) = owner.iter().position(|&o| o == UNASSIGNED) {
        f.fail(PARTITION, format!("vertex {v} is in no fragment"));
        return report(f);
    }

    // fragment trees
    let mut tree_depth: Vec<usize> = vec![UNASSIGNED; n];
    for (i, frag) in trace.fragments.iter().enumerate() {
        let members: HashSet<usize> = frag.vertices.iter().copied().collect();
        if !members.contains(&frag.root) {
            f.fail(TREES, format!("fragment {i}: root {} not among its vertices", frag.root));
            continue;
        }
        if frag.tree_edges.len() + 1 != frag.vertices.len() {
            f.fail(TREES, format!("fragment {i}: {} tree edges for {} vertices", frag.tree_edges.len(), frag.vertices.len()));
            continue;
        }
        let mut kids: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut bad = false;
        for &(a, b) in &frag.tree_edges {
            if !members.contains(&a) || !members.contains(&b) || !g.has_edge(a, b) {
                f.fail(TREES, format!("fragment {i}: tree edge {a}-{b} is not an edge of G inside the fragment"));
                bad = true;
                break;
            }
            kids.entry(a).or_default().push(b);
        }
        if bad {
            continue;
        }
        tree_depth[frag.root] = 0;
        let mut queue = vec![frag.root];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &y in kids.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if tree_depth[y] == UNASSIGNED {
                    tree_depth[y] = tree_depth[x] + 1;
                    queue.push(y);
                }
            }
        }
        if queue.len() != frag.vertices.len() {
            f.fail(TREES, format!("fragment {i}: tree edges do not connect the fragment from its root"));
        }
    }

    // steps: components, adjacency lists, BFS isometry, successor rules
    let rank: Vec<usize> = trace.order().map(|o| o.positions().to_vec()).unwrap_or_else(|_| vec![0; n]);
    if trace.steps.len() != trace.fragments.len() {
        f.fail(COMPONENTS, format!("{} steps for {} fragments", trace.steps.len(), trace.fragments.len()));
    }
    let mut bfs = Bfs::new(n);
    for (i, (step, frag)) in trace.steps.iter().zip(&trace.fragments).enumerate() {
        let comp: HashSet<usize> = step.component.iter().copied().collect();
        let Some(&start) = step.component.first() else {
            f.fail(COMPONENTS, format!("step {i}: empty component"));
            continue;
        };
        let reached: Vec<usize> = bfs.run(g, start, usize::MAX, |y| owner[y] >= i, |_| true).to_vec();
        if reached.len() != comp.len() || reached.iter().any(|v| !comp.contains(v)) {
            f.fail(COMPONENTS, format!("step {i}: recorded set is not a component of the residual graph"));
            continue;
        }
        if frag.vertices.iter().any(|v| !comp.contains(v)) {
            f.fail(COMPONENTS, format!("step {i}: fragment leaves its component"));
            continue;
        }
        let mut conn: Vec<usize> = step
            .component
            .iter()
            .flat_map(|&x| g.neighbours(x).iter().map(|&y| owner[y]).filter(|&o| o < i))
            .collect();
        conn.sort_unstable();
        conn.dedup();
        if conn != step.connected {
            f.fail(COMPONENTS, format!("step {i}: recorded adjacent fragments {:?}, actual {conn:?}", step.connected));
        }

        bfs.run(g, frag.root, usize::MAX, |y| comp.contains(&y), |_| true);
        if let Some(&w) = frag.vertices.iter().find(|&&w| bfs.dist(w) != tree_depth[w]) {
            f.fail(ISOMETRY, format!("fragment {i}: vertex {w} at tree depth {} but distance {}", tree_depth[w] as isize, bfs.dist(w)));
        }

        if trace.variant == Variant::Successor {
            match (frag.entry, frag.anchor, conn.last()) {
                (None, None, None) => {}
                (Some(w), Some(a), Some(&last)) => {
                    let best = trace.fragments[last]
                        .vertices
                        .iter()
                        .copied()
                        .filter(|&x| g.neighbours(x).iter().any(|y| comp.contains(y)))
                        .max_by_key(|&x| rank[x]);
                    if frag.vertices.first() != Some(&w) || !g.has_edge(a, w) || owner[a] != last || best != Some(a) {
                        f.fail(SUCCESSOR, format!("fragment {i}: entry {w} / anchor {a} break the successor rules"));
                    }
                }
                _ => f.fail(SUCCESSOR, format!("fragment {i}: entry/anchor inconsistent with adjacent fragments")),
            }
        }
    }

    // clique-minor invariant after every step
    let mut frag_adj: HashSet<(usize, usize)> = HashSet::new();
    for (u, v) in g.edges() {
        let (a, b) = (owner[u], owner[v]);
        if a != b {
            frag_adj.insert((a.min(b), a.max(b)));
        }
    }
    let l = trace.fragments.len();
    let mut seen = vec![usize::MAX; n];
    'steps: for i in 0..l.saturating_sub(1) {
        // residual after fragments 0..=i: owner > i
        for s in 0..n {
            if owner[s] <= i || seen[s] == i {
                continue;
            }
            let comp: Vec<usize> = bfs.run(g, s, usize::MAX, |y| owner[y] > i, |_| true).to_vec();
            let mut conn: Vec<usize> = comp
                .iter()
                .flat_map(|&x| g.neighbours(x).iter().map(|&y| owner[y]).filter(|&o| o <= i))
                .collect();
            for &x in &comp {
                seen[x] = i;
            }
            conn.sort_unstable();
            conn.dedup();
            for (a, &p) in conn.iter().enumerate() {
                for &q in &conn[a + 1..] {
                    if !frag_adj.contains(&(p, q)) {
                        f.fail(CLIQUE, format!("after step {i}: fragments {p} and {q} share a residual component but are not adjacent"));
                        break 'steps;
                    }
                }
            }
        }
    }

    report(f)
}

/// Largest number of internally disjoint paths from a vertex of `H_i` to
/// distinct vertices of an earlier-or-equal fragment `H_j`, with interiors
/// in the residual graph after `H_j`. Computed as a flow bound that ignores
/// path length inside the radius-`r` ball.
pub fn short_path_multiplicity(g: &Graph, trace: &ConstructionTrace, r: usize) -> usize {
    let owner = trace.owner();
    let mut bfs = Bfs::new(g.n());
    let mut best = 0;
    for v in g.vertices() {
        let i = owner[v];
        let ball: Vec<usize> = bfs.run(g, v, r, |_| true, |_| true).to_vec();
        let mut targets: Vec<usize> = ball.iter().map(|&x| owner[x]).filter(|&j| j <= i).collect();
        targets.sort_unstable();
        targets.dedup();
        for j in targets {
            let local: HashMap<usize, usize> = ball.iter().enumerate().map(|(k, &x)| (x, k)).collect();
            let sink = 2 * ball.len();
            let mut net = FlowNetwork::new(sink + 1);
            for (k, &x) in ball.iter().enumerate() {
                net.add_edge(2 * k, 2 * k + 1, 1);
                if x != v && owner[x] == j {
                    net.add_edge(2 * k + 1, sink, 1);
                    continue;
                }
                if x != v && owner[x] <= j {
                    continue;
                }
                for &y in g.neighbours(x) {
                    if let Some(&ly) = local.get(&y) {
                        if y != v {
                            net.add_edge(2 * k + 1, 2 * ly, 1);
                        }
                    }
                }
            }
            let flow = net.max_flow(2 * local[&v] + 1, sink, u32::MAX) as usize;
            best = best.max(flow);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::*;
    use crate::reach::{adm_under, AdmMode};

    #[test]
    fn single_vertex() {
        let (l, t) = build_uniform_order(&Graph::empty(1), Variant::Plain).unwrap();
        assert_eq!(l.sequence(), &[0]);
        assert_eq!(t.fragments.len(), 1);
        assert!(verify_invariant(&Graph::empty(1), &t).ok);
    }

    #[test]
    fn complete_graph_gives_singletons() {
        for n in 1..7 {
            let g = complete(n);
            let (l, t) = build_uniform_order(&g, Variant::Plain).unwrap();
            assert_eq!(l.sequence(), (0..n).collect::<Vec<_>>().as_slice());
            assert!(t.fragments.iter().all(|f| f.vertices.len() == 1));
            let adm = adm_under(&g, &l, 1, AdmMode::Bounds);
            assert_eq!(adm.iter().map(|a| a.upper).max().unwrap(), n);
        }
    }

    #[test]
    fn path_hand_trace() {
        let (l, t) = build_uniform_order(&path(4), Variant::Plain).unwrap();
        assert_eq!(l.sequence(), &[0, 1, 2, 3]);
        let sets: Vec<Vec<usize>> = t.fragments.iter().map(|f| f.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(t.steps[1].component, vec![1, 2, 3]);
        assert_eq!(t.steps[1].connected, vec![0]);
        assert!(t.steps[1].m_values.iter().all(|&(_, m)| m == 1));
    }

    #[test]
    fn k4_step_operations() {
        let g = complete(4);
        let frags = |sets: &[usize]| -> Vec<Fragment> {
            sets.iter()
                .enumerate()
                .map(|(i, &v)| Fragment { index: i, root: v, vertices: vec![v], tree_edges: vec![], entry: None, anchor: None })
                .collect()
        };
        let two = frags(&[0, 1]);
        assert_eq!(connected_fragments(&g, &two, &[2, 3]).unwrap(), vec![0, 1]);
        assert_eq!(compute_m(&g, &two, &[2, 3], 2).unwrap(), 2);
        assert!(connected_fragments(&g, &two, &[2]).is_err());
        assert!(connected_fragments(&g, &two, &[1, 2, 3]).is_err());
        let one = frags(&[0]);
        assert_eq!(connected_fragments(&g, &one, &[1, 2, 3]).unwrap(), vec![0]);
        // a component in another connected component of G sees no fragment
        let h = path(2).disjoint_union(&path(2));
        assert_eq!(connected_fragments(&h, &frags(&[0]), &[2, 3]).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn m_counts_paths_through_component() {
        // fragments {0} and {4}; component 1-2-3 where only 1 and 3 touch them
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let frags = vec![
            Fragment { index: 0, root: 0, vertices: vec![0], tree_edges: vec![], entry: None, anchor: None },
            Fragment { index: 1, root: 4, vertices: vec![4], tree_edges: vec![], entry: None, anchor: None },
        ];
        assert_eq!(compute_m(&g, &frags, &[1, 2, 3], 2).unwrap(), 2);
        assert_eq!(compute_m(&g, &frags, &[1, 2, 3], 1).unwrap(), 2);
        assert!(compute_m(&g, &frags, &[1, 2, 3], 0).is_err());
    }

    #[test]
    fn invariant_holds_on_trees_with_small_s() {
        for seed in 0..20 {
            let g = random_tree(40, seed);
            let (_, t) = build_uniform_order(&g, Variant::Plain).unwrap();
            let rep = verify_invariant(&g, &t);
            assert!(rep.ok, "{rep:?}");
            assert!(t.steps.iter().all(|s| s.connected.len() <= 2));
        }
    }

    #[test]
    fn invariant_holds_on_planar_both_variants() {
        for seed in 0..5 {
            let g = planar_triangulation(60, seed).graph;
            for variant in [Variant::Plain, Variant::Successor] {
                let (l, t) = build_uniform_order(&g, variant).unwrap();
                assert_eq!(l, t.order().unwrap());
                let rep = verify_invariant(&g, &t);
                assert!(rep.ok, "{variant:?} seed {seed}: {rep:?}");
            }
        }
    }

    #[test]
    fn corrupted_trace_is_rejected() {
        let g = grid(4, 4);
        let (_, t) = build_uniform_order(&g, Variant::Plain).unwrap();
        let big = t.fragments.iter().position(|f| f.vertices.len() >= 2).expect("grid has a non-trivial fragment");
        let mut bad = t.clone();
        // split one fragment: move its last vertex into a new fragment at the end
        let v = bad.fragments[big].vertices.pop().unwrap();
        bad.fragments[big].tree_edges.retain(|&(a, b)| a != v && b != v);
        let idx = bad.fragments.len();
        bad.fragments.push(Fragment { index: idx, root: v, vertices: vec![v], tree_edges: vec![], entry: None, anchor: None });
        bad.steps.push(bad.steps[big].clone());
        let rep = verify_invariant(&g, &bad);
        assert!(!rep.ok);
        assert!(rep.violation.is_some());

        let mut overlap = t.clone();
        let v0 = overlap.fragments[0].vertices[0];
        overlap.fragments[1].vertices.push(v0);
        assert!(!verify_invariant(&g, &overlap).disjoint);
    }

    #[test]
    fn successor_needs_connected_graph() {
        let g = path(2).disjoint_union(&path(3));
        assert!(build_uniform_order(&g, Variant::Successor).is_err());
        let (_, t) = build_uniform_order(&g, Variant::Plain).unwrap();
        assert!(verify_invariant(&g, &t).ok);
    }

    #[test]
    fn relabel_round_trip() {
        let g = grid(3, 3);
        let (_, t) = build_uniform_order(&g, Variant::Successor).unwrap();
        let id: Vec<usize> = (0..9).collect();
        assert_eq!(t.relabel(&id, 0, 9), t);
    }

    #[test]
    fn multiplicity_is_positive() {
        let g = grid(5, 5);
        let (_, t) = build_uniform_order(&g, Variant::Plain).unwrap();
        let b1 = short_path_multiplicity(&g, &t, 1);
        let b3 = short_path_multiplicity(&g, &t, 3);
        assert!(b1 >= 1 && b3 >= b1);
    }
}
