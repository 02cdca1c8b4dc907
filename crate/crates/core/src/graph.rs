//! Graphs, vertex orders and distance primitives.
//!
//! Vertices are dense integers `0..n`. Every structure here is immutable
//! once built, so it can be shared freely between threads.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, simple, undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list. Duplicate edges and both
    /// orientations collapse to one edge; self-loops and out-of-range
    /// endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop { line: 0, id: u as u64 });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(Graph { adj, m: m / 2 })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// The graph with the extra edges inserted (duplicates ignored).
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<Graph> {
        Graph::from_edges(self.n(), self.edges().chain(extra.iter().copied()))
    }

    /// Induced subgraph on `vertices`. Returns the subgraph and the map
    /// from new ids to old ids (`vertices` sorted ascending).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut map: Vec<usize> = vertices.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let mut adj = vec![Vec::new(); map.len()];
        let mut m = 0;
        for (i, &v) in map.iter().enumerate() {
            for &w in &self.adj[v] {
                if local[w] != usize::MAX {
                    adj[i].push(local[w]);
                    m += 1;
                }
            }
            adj[i].sort_unstable();
        }
        (Graph { adj, m: m / 2 }, map)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let x = comp[head];
                head += 1;
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|l| l.iter().map(|&v| v + off).collect()));
        Graph { adj, m: self.m + other.m }
    }
}

/// A sorted set of vertex identifiers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_unsorted(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A linear order of `0..n`: `sequence[rank] = vertex` and
/// `position[vertex] = rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrder {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl LinearOrder {
    pub fn identity(n: usize) -> Self {
        LinearOrder { sequence: (0..n).collect(), position: (0..n).collect() }
    }

    /// Builds an order from its rank sequence (smallest first).
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (rank, &v) in sequence.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidOrder(format!("vertex {v} out of range for n = {n}")));
            }
            if position[v] != usize::MAX {
                return Err(Error::InvalidOrder(format!("vertex {v} listed twice")));
            }
            position[v] = rank;
        }
        Ok(LinearOrder { sequence, position })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// Rank of every vertex, indexed by vertex.
    pub fn positions(&self) -> &[usize] {
        &self.position
    }

    pub fn rank(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn less(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }

    pub fn check_fits(&self, g: &Graph) -> Result<()> {
        if self.len() == g.n() {
            Ok(())
        } else {
            Err(Error::InvalidOrder(format!(
                "order has {} vertices, graph has {}",
                self.len(),
                g.n()
            )))
        }
    }
}

/// Result of parsing an edge-list document.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    /// Original identifier of every dense vertex.
    pub labels: Vec<u64>,
    pub warnings: Vec<String>,
}

impl ParsedGraph {
    /// True when dense ids coincide with the file's ids.
    pub fn is_identity(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, &l)| l == i as u64)
    }
}

/// Parses the edge-list format: optional `p <n> <m>` header, one `<u> <v>`
/// edge per line, `#` comments.
///
/// With a header, ids must be below `n` and are kept as they are. Without
/// one, the distinct ids are remapped to `0..n` in ascending order.
pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw: Vec<(u64, u64, usize)> = Vec::new();
    let mut warnings = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens[0] == "p" {
            if header.is_some() {
                return Err(Error::Parse { line: lineno, msg: "duplicate header".into() });
            }
            if !raw.is_empty() {
                return Err(Error::Parse { line: lineno, msg: "header after edge lines".into() });
            }
            if tokens.len() != 3 {
                return Err(Error::Parse { line: lineno, msg: "header must be `p <n> <m>`".into() });
            }
            let n = parse_id(tokens[1], lineno)? as usize;
            let m = parse_id(tokens[2], lineno)? as usize;
            header = Some((n, m));
            continue;
        }
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected `<u> <v>`, found {} tokens", tokens.len()),
            });
        }
        let u = parse_id(tokens[0], lineno)?;
        let v = parse_id(tokens[1], lineno)?;
        if u == v {
            return Err(Error::SelfLoop { line: lineno, id: u });
        }
        if let Some((n, _)) = header {
            for id in [u, v] {
                if id >= n as u64 {
                    return Err(Error::VertexOutOfRange { line: lineno, id, n });
                }
            }
        }
        raw.push((u, v, lineno));
    }

    let (graph, labels) = match header {
        Some((n, _)) => {
            let g = Graph::from_edges(n, raw.iter().map(|&(u, v, _)| (u as usize, v as usize)))?;
            (g, (0..n as u64).collect())
        }
        None => {
            let mut ids: BTreeMap<u64, usize> = BTreeMap::new();
            for &(u, v, _) in &raw {
                ids.insert(u, 0);
                ids.insert(v, 0);
            }
            for (i, slot) in ids.values_mut().enumerate() {
                *slot = i;
            }
            let g = Graph::from_edges(ids.len(), raw.iter().map(|&(u, v, _)| (ids[&u], ids[&v])))?;
            (g, ids.keys().copied().collect())
        }
    };

    if let Some((_, m)) = header {
        if m != graph.m() {
            warnings.push(format!(
                "header declares {m} edges, found {} after removing duplicates",
                graph.m()
            ));
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(ParsedGraph { graph, labels, warnings })
}

fn parse_id(token: &str, line: usize) -> Result<u64> {
    token
        .parse::<u64>()
        .map_err(|_| Error::Parse { line, msg: format!("`{token}` is not a non-negative integer") })
}

/// Canonical edge-list serialisation: header, then edges `u < v` sorted.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses an order file (one id per line, smallest first) against the
/// labels of a parsed graph.
pub fn parse_order(text: &str, labels: &[u64]) -> Result<LinearOrder> {
    let index: BTreeMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut seq = Vec::with_capacity(labels.len());
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let id = parse_id(t, idx + 1)?;
        let v = *index
            .get(&id)
            .ok_or_else(|| Error::InvalidOrder(format!("line {}: unknown vertex id {id}", idx + 1)))?;
        seq.push(v);
    }
    if seq.len() != labels.len() {
        return Err(Error::InvalidOrder(format!(
            "order lists {} vertices, graph has {}",
            seq.len(),
            labels.len()
        )));
    }
    LinearOrder::from_sequence(seq)
}

pub fn write_order(order: &LinearOrder, labels: &[u64]) -> String {
    let mut out = String::new();
    for &v in order.sequence() {
        let _ = writeln!(out, "{}", labels[v]);
    }
    out
}

/// Reusable breadth-first search buffers. Only touched entries are reset
/// between runs, so repeated local searches stay proportional to the
/// explored region.
#[derive(Debug, Clone)]
pub(crate) struct Bfs {
    dist: Vec<usize>,
    visited: Vec<usize>,
}

pub(crate) const UNREACHED: usize = usize::MAX;

impl Bfs {
    pub(crate) fn new(n: usize) -> Self {
        Bfs { dist: vec![UNREACHED; n], visited: Vec::new() }
    }

    /// BFS from `source` up to depth `max_depth`. A vertex other than the
    /// source is entered only if `enter` accepts it; it is expanded only if
    /// `expand` accepts it (the source is always expanded).
    pub(crate) fn run<E, X>(
        &mut self,
        g: &Graph,
        source: usize,
        max_depth: usize,
        enter: E,
        expand: X,
    ) -> &[usize]
    where
        E: Fn(usize) -> bool,
        X: Fn(usize) -> bool,
    {
        for &v in &self.visited {
            self.dist[v] = UNREACHED;
        }
        self.visited.clear();
        self.dist[source] = 0;
        self.visited.push(source);
        let mut head = 0;
        while head < self.visited.len() {
            let x = self.visited[head];
            head += 1;
            let d = self.dist[x];
            if d >= max_depth || (x != source && !expand(x)) {
                continue;
            }
            for &y in g.neighbours(x) {
                if self.dist[y] == UNREACHED && enter(y) {
                    self.dist[y] = d + 1;
                    self.visited.push(y);
                }
            }
        }
        &self.visited
    }

    pub(crate) fn dist(&self, v: usize) -> usize {
        self.dist[v]
    }

}

/// BFS distances from `source` avoiding `blocked` vertices (the source is
/// never blocked). `None` marks unreachable vertices.
pub fn distances_avoiding(g: &Graph, source: usize, blocked: &[bool]) -> Vec<Option<usize>> {
    let mut bfs = Bfs::new(g.n());
    bfs.run(g, source, usize::MAX, |y| !blocked[y], |_| true);
    g.vertices().map(|v| Some(bfs.dist(v)).filter(|&d| d != UNREACHED)).collect()
}

/// The closed ball of radius `r` around `v`, including `v` itself.
pub fn r_ball(g: &Graph, v: usize, r: usize) -> Result<VertexSet> {
    g.check_vertex(v)?;
    let mut bfs = Bfs::new(g.n());
    Ok(VertexSet::from_unsorted(bfs.run(g, v, r, |_| true, |_| true).to_vec()))
}

/// Shortest-path length between `u` and `v`; `None` when they lie in
/// different components.
pub fn distance(g: &Graph, u: usize, v: usize) -> Result<Option<usize>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let mut bfs = Bfs::new(g.n());
    bfs.run(g, u, usize::MAX, |_| true, |_| true);
    let d = bfs.dist(v);
    Ok((d != UNREACHED).then_some(d))
}
