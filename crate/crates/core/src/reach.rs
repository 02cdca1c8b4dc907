//! Weak and strong reachability, admissibility, and the generalised
//! colouring numbers `wcol_r`, `col_r`, `adm_r` of a graph under an order.
//!
//! Internally every kernel works on a rank slice indexed by vertex. A
//! vertex whose rank is `n` counts as larger than every placed vertex,
//! which is what lets [`exact_optimum`] evaluate a vertex as soon as it is
//! placed in a partial order.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{Bfs, Graph, LinearOrder, VertexSet, UNREACHED};

/// Default vertex-count cap for [`exact_optimum`].
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// Hard ceiling on the enumeration cap.
pub const MAX_ENUMERATION_CAP: usize = 9;

/// Candidate-path budget for the exhaustive admissibility search.
const EXACT_PATH_BUDGET: usize = 200_000;

/// Two-sided bound on `adm_r[G, L, v]`. The count includes the length-0
/// path from `v` to itself, so an `L`-minimal vertex has admissibility 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub lower: usize,
    pub upper: usize,
}

impl Admissibility {
    pub fn exact(value: usize) -> Self {
        Admissibility { lower: value, upper: value }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, value: usize) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// How hard to work for admissibility at radius 3 and above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdmMode {
    /// Flow upper bound and greedy packing lower bound.
    #[default]
    Bounds,
    /// As `Bounds`, then close any gap by exhaustive packing when the
    /// instance is small enough.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Wcol,
    Col,
    Adm,
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "wcol" => Ok(Metric::Wcol),
            "col" => Ok(Metric::Col),
            "adm" => Ok(Metric::Adm),
            other => Err(format!("unknown metric `{other}` (expected wcol, col or adm)")),
        }
    }
}

// ---------------------------------------------------------------------------
// rank-slice kernels

/// `WReach_r[v]`: every `u` such that some path of length at most `r`
/// joins `v` and `u` with `u` minimal on it.
pub(crate) fn wreach_with(g: &Graph, rank: &[usize], v: usize, r: usize, bfs: &mut Bfs) -> Vec<usize> {
    let candidates: Vec<usize> = bfs
        .run(g, v, r, |_| true, |_| true)
        .iter()
        .copied()
        .filter(|&u| rank[u] <= rank[v])
        .collect();
    let mut out = Vec::with_capacity(candidates.len());
    for u in candidates {
        if u == v {
            out.push(u);
            continue;
        }
        let ru = rank[u];
        bfs.run(g, u, r, |x| rank[x] >= ru, |_| true);
        if bfs.dist(v) <= r {
            out.push(u);
        }
    }
    out.sort_unstable();
    out
}

/// `SReach_r[v]`: `v` plus every smaller `u` reachable by a path of length
/// at most `r` whose interior lies strictly above `v`.
pub(crate) fn sreach_with(g: &Graph, rank: &[usize], v: usize, r: usize, bfs: &mut Bfs) -> Vec<usize> {
    let rv = rank[v];
    let mut out: Vec<usize> = bfs
        .run(g, v, r, |_| true, |x| rank[x] > rv)
        .iter()
        .copied()
        .filter(|&u| rank[u] <= rv)
        .collect();
    out.sort_unstable();
    out
}

fn adm_radius_one(g: &Graph, rank: &[usize], v: usize) -> usize {
    1 + g.neighbours(v).iter().filter(|&&u| rank[u] < rank[v]).count()
}

/// Exact radius-2 admissibility via a layered split-vertex network.
fn adm_radius_two(g: &Graph, rank: &[usize], v: usize) -> usize {
    let rv = rank[v];
    let mut local: HashMap<usize, usize> = HashMap::new();
    let mut net = FlowNetwork::new(2);
    let (s, t) = (0, 1);
    let mut sink_node = |x: usize, net: &mut FlowNetwork| -> usize {
        *local.entry(x).or_insert_with(|| {
            let id = net.add_node();
            net.add_edge(id, t, 1);
            id
        })
    };
    for &x in g.neighbours(v) {
        if rank[x] < rv {
            let u = sink_node(x, &mut net);
            net.add_edge(s, u, 1);
        } else {
            let xin = net.add_node();
            let xout = net.add_node();
            net.add_edge(s, xin, 1);
            net.add_edge(xin, xout, 1);
            for &u in g.neighbours(x) {
                if rank[u] < rv {
                    let un = sink_node(u, &mut net);
                    net.add_edge(xout, un, 1);
                }
            }
        }
    }
    1 + net.max_flow(s, t, u32::MAX) as usize
}

/// Upper bound for `r >= 3`: disjoint paths of any length inside the region
/// a valid path could use. Interior vertices lie above `v` and within
/// interior distance `r - 1`; an interior step `x -> y` is only allowed
/// when `x` is at interior distance at most `r - 2`.
fn adm_flow_upper(g: &Graph, rank: &[usize], v: usize, r: usize, bfs: &mut Bfs) -> usize {
    let rv = rank[v];
    let interior: Vec<usize> = bfs
        .run(g, v, r - 1, |x| rank[x] > rv, |_| true)
        .iter()
        .copied()
        .filter(|&x| x != v)
        .collect();
    let depth: HashMap<usize, usize> = interior.iter().map(|&x| (x, bfs.dist(x))).collect();
    let mut net = FlowNetwork::new(2);
    let (s, t) = (0, 1);
    let mut node_of: HashMap<usize, usize> = HashMap::new();
    for &x in &interior {
        let xin = net.add_node();
        let xout = net.add_node();
        net.add_edge(xin, xout, 1);
        node_of.insert(x, xin);
    }
    let mut sinks: HashMap<usize, usize> = HashMap::new();
    let mut sink_node = |u: usize, net: &mut FlowNetwork| -> usize {
        *sinks.entry(u).or_insert_with(|| {
            let id = net.add_node();
            net.add_edge(id, t, 1);
            id
        })
    };
    for &y in g.neighbours(v) {
        if rank[y] < rv {
            let u = sink_node(y, &mut net);
            net.add_edge(s, u, 1);
        } else if let Some(&yin) = node_of.get(&y) {
            net.add_edge(s, yin, 1);
        }
    }
    for &x in &interior {
        let xout = node_of[&x] + 1;
        let dx = depth[&x];
        for &y in g.neighbours(x) {
            if rank[y] < rv {
                let u = sink_node(y, &mut net);
                net.add_edge(xout, u, 1);
            } else if dx + 2 <= r {
                if let Some(&yin) = node_of.get(&y) {
                    net.add_edge(xout, yin, 1);
                }
            }
        }
    }
    1 + net.max_flow(s, t, u32::MAX) as usize
}

/// Lower bound: repeatedly take a shortest admissible path through unused
/// vertices until none of length at most `r` remains.
fn adm_greedy_lower(g: &Graph, rank: &[usize], v: usize, r: usize) -> usize {
    let rv = rank[v];
    let n = g.n();
    let mut used = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![UNREACHED; n];
    let mut count = 1;
    loop {
        let mut touched = vec![v];
        dist[v] = 0;
        let mut head = 0;
        let mut found = None;
        'bfs: while head < touched.len() {
            let x = touched[head];
            head += 1;
            if dist[x] >= r || (x != v && rank[x] < rv) {
                continue;
            }
            for &y in g.neighbours(x) {
                if used[y] || dist[y] != UNREACHED || y == v {
                    continue;
                }
                dist[y] = dist[x] + 1;
                parent[y] = x;
                touched.push(y);
                if rank[y] < rv {
                    found = Some(y);
                    break 'bfs;
                }
            }
        }
        for &x in &touched {
            dist[x] = UNREACHED;
        }
        match found {
            Some(mut x) => {
                count += 1;
                while x != v {
                    used[x] = true;
                    x = parent[x];
                }
            }
            None => return count,
        }
    }
}

/// Exhaustive packing of admissible paths. Returns `None` when the local
/// instance is too large to search.
fn adm_exhaustive(g: &Graph, rank: &[usize], v: usize, r: usize, known: Admissibility) -> Option<usize> {
    let rv = rank[v];
    let mut bfs = Bfs::new(g.n());
    let region: Vec<usize> = bfs.run(g, v, r, |_| true, |x| rank[x] > rv).to_vec();
    if region.len() > 128 {
        return None;
    }
    let index: HashMap<usize, usize> = region.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    // endpoint -> list of vertex masks (interior + endpoint)
    let mut by_end: HashMap<usize, Vec<u128>> = HashMap::new();
    let mut total = 0usize;
    let mut stack: Vec<(usize, usize, u128)> = vec![(v, 0, 0)];
    while let Some((x, len, mask)) = stack.pop() {
        if len == r {
            continue;
        }
        for &y in g.neighbours(x) {
            if y == v {
                continue;
            }
            let Some(&iy) = index.get(&y) else { continue };
            let bit = 1u128 << iy;
            if mask & bit != 0 {
                continue;
            }
            if rank[y] < rv {
                by_end.entry(y).or_default().push(mask | bit);
                total += 1;
                if total > EXACT_PATH_BUDGET {
                    return None;
                }
            } else {
                stack.push((y, len + 1, mask | bit));
            }
        }
    }

    let mut groups: Vec<Vec<u128>> = by_end.into_values().collect();
    for grp in &mut groups {
        grp.sort_by_key(|m| m.count_ones());
        grp.dedup();
    }
    // fewest options first keeps the branching narrow near the root
    groups.sort_by_key(Vec::len);

    fn pack(groups: &[Vec<u128>], idx: usize, used: u128, count: usize, best: &mut usize, cap: usize) {
        if count > *best {
            *best = count;
        }
        if *best >= cap || idx == groups.len() || count + (groups.len() - idx) <= *best {
            return;
        }
        for &m in &groups[idx] {
            if m & used == 0 {
                pack(groups, idx + 1, used | m, count + 1, best, cap);
                if *best >= cap {
                    return;
                }
            }
        }
        pack(groups, idx + 1, used, count, best, cap);
    }

    let mut best = known.lower.saturating_sub(1);
    pack(&groups, 0, 0, 0, &mut best, known.upper.saturating_sub(1));
    Some(best + 1)
}

pub(crate) fn adm_with(g: &Graph, rank: &[usize], v: usize, r: usize, mode: AdmMode, bfs: &mut Bfs) -> Admissibility {
    match r {
        0 => Admissibility::exact(1),
        1 => Admissibility::exact(adm_radius_one(g, rank, v)),
        2 => Admissibility::exact(adm_radius_two(g, rank, v)),
        _ => {
            let upper = adm_flow_upper(g, rank, v, r, bfs);
            let lower = adm_greedy_lower(g, rank, v, r).min(upper);
            let bounds = Admissibility { lower, upper };
            if mode == AdmMode::Exact && !bounds.is_exact() {
                if let Some(value) = adm_exhaustive(g, rank, v, r, bounds) {
                    return Admissibility::exact(value);
                }
            }
            bounds
        }
    }
}

// ---------------------------------------------------------------------------
// public per-vertex operations

fn check(g: &Graph, order: &LinearOrder, v: usize) -> Result<()> {
    order.check_fits(g)?;
    g.check_vertex(v)
}

pub fn wreach(g: &Graph, order: &LinearOrder, v: usize, r: usize) -> Result<VertexSet> {
    check(g, order, v)?;
    let mut bfs = Bfs::new(g.n());
    Ok(VertexSet::from_unsorted(wreach_with(g, order.positions(), v, r, &mut bfs)))
}

pub fn sreach(g: &Graph, order: &LinearOrder, v: usize, r: usize) -> Result<VertexSet> {
    check(g, order, v)?;
    let mut bfs = Bfs::new(g.n());
    Ok(VertexSet::from_unsorted(sreach_with(g, order.positions(), v, r, &mut bfs)))
}

/// Admissibility of `v` under `order`. Exact for `r <= 2`; for larger radii
/// a flow upper bound and a greedy lower bound, tightened to the exact
/// value in [`AdmMode::Exact`] when the local search fits its budget.
pub fn vertex_admissibility(
    g: &Graph,
    order: &LinearOrder,
    v: usize,
    r: usize,
    mode: AdmMode,
) -> Result<Admissibility> {
    check(g, order, v)?;
    let mut bfs = Bfs::new(g.n());
    Ok(adm_with(g, order.positions(), v, r, mode, &mut bfs))
}

/// All weak reachability sets at once, indexed by vertex.
pub fn wreach_sets(g: &Graph, order: &LinearOrder, r: usize) -> Vec<Vec<usize>> {
    let rank = order.positions();
    let mut sets = vec![Vec::new(); g.n()];
    let mut bfs = Bfs::new(g.n());
    for u in g.vertices() {
        let ru = rank[u];
        for &v in bfs.run(g, u, r, |x| rank[x] >= ru, |_| true) {
            sets[v].push(u);
        }
    }
    for s in &mut sets {
        s.sort_unstable();
    }
    sets
}

/// `max_v |WReach_r[v]|` under `order`.
pub fn wcol_under(g: &Graph, order: &LinearOrder, r: usize) -> usize {
    let rank = order.positions();
    let mut counts = vec![0usize; g.n()];
    let mut bfs = Bfs::new(g.n());
    for u in g.vertices() {
        let ru = rank[u];
        for &v in bfs.run(g, u, r, |x| rank[x] >= ru, |_| true) {
            counts[v] += 1;
        }
    }
    counts.into_iter().max().unwrap_or(0)
}

/// `max_v |SReach_r[v]|` under `order`.
pub fn col_under(g: &Graph, order: &LinearOrder, r: usize) -> usize {
    let mut bfs = Bfs::new(g.n());
    g.vertices()
        .map(|v| sreach_with(g, order.positions(), v, r, &mut bfs).len())
        .max()
        .unwrap_or(0)
}

/// Per-vertex admissibility bounds under `order`.
pub fn adm_under(g: &Graph, order: &LinearOrder, r: usize, mode: AdmMode) -> Vec<Admissibility> {
    let mut bfs = Bfs::new(g.n());
    g.vertices().map(|v| adm_with(g, order.positions(), v, r, mode, &mut bfs)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMetrics {
    pub vertex: usize,
    pub wreach: usize,
    pub sreach: usize,
    pub adm_lower: usize,
    pub adm_upper: usize,
}

/// Per-vertex quantities and their maxima for one order and radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricProfile {
    pub r: usize,
    pub per_vertex: Vec<VertexMetrics>,
    pub wcol: usize,
    pub col: usize,
    pub adm_lower: usize,
    pub adm_upper: usize,
}

pub fn metric_profile(g: &Graph, order: &LinearOrder, r: usize) -> Result<MetricProfile> {
    metric_profile_with(g, order, r, AdmMode::Bounds)
}

pub fn metric_profile_with(g: &Graph, order: &LinearOrder, r: usize, mode: AdmMode) -> Result<MetricProfile> {
    order.check_fits(g)?;
    let rank = order.positions();
    let mut wcounts = vec![0usize; g.n()];
    let mut bfs = Bfs::new(g.n());
    for u in g.vertices() {
        let ru = rank[u];
        for &v in bfs.run(g, u, r, |x| rank[x] >= ru, |_| true) {
            wcounts[v] += 1;
        }
    }
    let per_vertex: Vec<VertexMetrics> = g
        .vertices()
        .map(|v| {
            let s = sreach_with(g, rank, v, r, &mut bfs).len();
            let a = adm_with(g, rank, v, r, mode, &mut bfs);
            VertexMetrics { vertex: v, wreach: wcounts[v], sreach: s, adm_lower: a.lower, adm_upper: a.upper }
        })
        .collect();
    let max = |f: fn(&VertexMetrics) -> usize| per_vertex.iter().map(f).max().unwrap_or(0);
    Ok(MetricProfile {
        r,
        wcol: max(|m| m.wreach),
        col: max(|m| m.sreach),
        adm_lower: max(|m| m.adm_lower),
        adm_upper: max(|m| m.adm_upper),
        per_vertex,
    })
}

// ---------------------------------------------------------------------------
// exact optimum by order enumeration

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: usize,
    pub order: LinearOrder,
}

struct Search<'a> {
    g: &'a Graph,
    r: usize,
    metric: Metric,
    rank: Vec<usize>,
    seq: Vec<usize>,
    best: usize,
    best_seq: Vec<usize>,
    memo: HashMap<(u32, usize), usize>,
    bfs: Bfs,
}

impl Search<'_> {
    fn value(&mut self, mask: u32, v: usize) -> usize {
        match self.metric {
            Metric::Wcol => wreach_with(self.g, &self.rank, v, self.r, &mut self.bfs).len(),
            Metric::Col | Metric::Adm => {
                if let Some(&x) = self.memo.get(&(mask, v)) {
                    return x;
                }
                let x = if self.metric == Metric::Col {
                    sreach_with(self.g, &self.rank, v, self.r, &mut self.bfs).len()
                } else {
                    let a = adm_with(self.g, &self.rank, v, self.r, AdmMode::Exact, &mut self.bfs);
                    debug_assert!(a.is_exact(), "exhaustive admissibility exceeded its budget");
                    a.upper
                };
                self.memo.insert((mask, v), x);
                x
            }
        }
    }

    fn run(&mut self, mask: u32, current: usize) {
        let n = self.g.n();
        if self.seq.len() == n {
            if current < self.best {
                self.best = current;
                self.best_seq = self.seq.clone();
            }
            return;
        }
        let depth = self.seq.len();
        for v in 0..n {
            if mask & (1 << v) != 0 {
                continue;
            }
            self.rank[v] = depth;
            let val = self.value(mask, v).max(current);
            if val < self.best {
                self.seq.push(v);
                self.run(mask | (1 << v), val);
                self.seq.pop();
            }
            self.rank[v] = n;
            if self.best <= 1 {
                return;
            }
        }
    }
}

/// Minimum over all orders of the profile maximum for `metric`, with one
/// optimal order. Prefixes whose running maximum already matches the best
/// complete order are abandoned.
pub fn exact_optimum(g: &Graph, r: usize, metric: Metric, cap: usize) -> Result<Optimum> {
    let cap = cap.min(MAX_ENUMERATION_CAP);
    if g.n() > cap {
        return Err(Error::CapExceeded { n: g.n(), cap });
    }
    let n = g.n();
    if n == 0 {
        return Ok(Optimum { value: 0, order: LinearOrder::identity(0) });
    }
    let mut s = Search {
        g,
        r,
        metric,
        rank: vec![n; n],
        seq: Vec::with_capacity(n),
        best: usize::MAX,
        best_seq: Vec::new(),
        memo: HashMap::new(),
        bfs: Bfs::new(n),
    };
    s.run(0, 0);
    Ok(Optimum { value: s.best, order: LinearOrder::from_sequence(s.best_seq)? })
}

// ---------------------------------------------------------------------------
// heuristic orders

/// Number of unplaced vertices `v` reaches by paths of length at most `r`
/// whose interior is already placed (i.e. will sit above `v`).
fn back_connections(g: &Graph, placed: &[bool], v: usize, r: usize, bfs: &mut Bfs) -> usize {
    bfs.run(g, v, r, |_| true, |x| placed[x]).iter().filter(|&&u| u != v && !placed[u]).count()
}

/// Distance-`r` degeneracy heuristic: repeatedly put last the vertex with
/// the fewest back-connections to the still unplaced vertices, ties by
/// smallest id.
pub fn greedy_order(g: &Graph, r: usize) -> LinearOrder {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut bfs = Bfs::new(n);
    let mut ball = Bfs::new(n);
    let mut count: Vec<usize> = g.vertices().map(|v| back_connections(g, &placed, v, r, &mut bfs)).collect();
    let mut queue: BTreeSet<(usize, usize)> = g.vertices().map(|v| (count[v], v)).collect();
    let mut seq = vec![0; n];
    for slot in (0..n).rev() {
        let (_, v) = queue.pop_first().expect("queue holds every unplaced vertex");
        seq[slot] = v;
        placed[v] = true;
        let affected: Vec<usize> = ball.run(g, v, r.max(1), |_| true, |_| true).to_vec();
        for y in affected {
            if placed[y] {
                continue;
            }
            let c = back_connections(g, &placed, y, r, &mut bfs);
            if c != count[y] {
                queue.remove(&(count[y], y));
                count[y] = c;
                queue.insert((c, y));
            }
        }
    }
    LinearOrder::from_sequence(seq).expect("every vertex placed once")
}

/// Classic degeneracy by min-degree peeling. Returns the degeneracy and an
/// order in which every vertex has at most that many smaller neighbours.
pub fn degeneracy(g: &Graph) -> (usize, LinearOrder) {
    let n = g.n();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let maxd = g.max_degree();
    let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); maxd + 1];
    for v in g.vertices() {
        buckets[deg[v]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut seq = vec![0; n];
    let mut k = 0;
    let mut low = 0;
    for slot in (0..n).rev() {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop_first().unwrap();
        k = k.max(low);
        removed[v] = true;
        seq[slot] = v;
        for &w in g.neighbours(v) {
            if !removed[w] {
                buckets[deg[w]].remove(&w);
                deg[w] -= 1;
                buckets[deg[w]].insert(w);
                low = low.min(deg[w]);
            }
        }
    }
    (k, LinearOrder::from_sequence(seq).expect("peeling visits every vertex"))
}
