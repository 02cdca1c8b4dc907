//! Deterministic graph generators for the experiment corpus.
//!
//! Randomised generators take an explicit seed and use ChaCha8, so a
//! given `(family, size, seed)` triple yields the same graph on every
//! platform.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

fn build(n: usize, edges: Vec<(usize, usize)>) -> Graph {
    Graph::from_edges(n, edges).expect("generator produced an invalid edge")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i - 1, i)).collect())
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    build(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect())
}

/// `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves).map(|l| (0, l)).collect())
}

/// `rows × cols` grid; vertex `(i, j)` is `i * cols + j`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let v = i * cols + j;
            if j + 1 < cols {
                edges.push((v, v + 1));
            }
            if i + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    build(rows * cols, edges)
}

/// Uniform random recursive tree with shuffled labels.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let edges = (1..n).map(|i| (labels[rng.gen_range(0..i)], labels[i])).collect();
    build(n, edges)
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// Random tree plus `extra` random chords: connected and sparse.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    let tree = random_tree(n, seed);
    let mut rng = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut edges: Vec<(usize, usize)> = tree.edges().collect();
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// A plane triangulation together with its oriented faces.
#[derive(Debug, Clone)]
pub struct PlanarInstance {
    pub graph: Graph,
    /// Faces as vertex triples in a consistent rotational orientation.
    pub faces: Vec<[usize; 3]>,
}

/// Random plane triangulation on `n` vertices.
///
/// Each new vertex is inserted into a uniformly random face and joined to
/// its three corners; afterwards `n` random edge flips are attempted, each
/// kept only if it creates no parallel edge. Both operations act on the
/// embedding, so the result stays planar. For `n < 3` the graph is a
/// path and there are no faces.
pub fn planar_triangulation(n: usize, seed: u64) -> PlanarInstance {
    if n < 3 {
        return PlanarInstance { graph: path(n), faces: Vec::new() };
    }
    let mut rng = rng(seed);
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    for x in 3..n {
        let f = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[f];
        faces[f] = [a, b, x];
        faces.push([b, c, x]);
        faces.push([c, a, x]);
    }

    // dart (u, v) -> face containing u -> v
    let mut darts: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for k in 0..3 {
            darts.insert((f[k], f[(k + 1) % 3]), i);
        }
    }
    let mut degree = vec![0usize; n];
    for &(u, _) in darts.keys() {
        degree[u] += 1;
    }
    for _ in 0..n {
        let f1 = rng.gen_range(0..faces.len());
        let k = rng.gen_range(0..3);
        let (a, b) = (faces[f1][k], faces[f1][(k + 1) % 3]);
        let c = faces[f1][(k + 2) % 3];
        let f2 = darts[&(b, a)];
        let d = *faces[f2].iter().find(|&&x| x != a && x != b).unwrap();
        if c == d || darts.contains_key(&(c, d)) || degree[a] <= 3 || degree[b] <= 3 {
            continue;
        }
        for f in [f1, f2] {
            for k in 0..3 {
                darts.remove(&(faces[f][k], faces[f][(k + 1) % 3]));
            }
        }
        faces[f1] = [a, d, c];
        faces[f2] = [d, b, c];
        for f in [f1, f2] {
            for k in 0..3 {
                darts.insert((faces[f][k], faces[f][(k + 1) % 3]), f);
            }
        }
        degree[a] -= 1;
        degree[b] -= 1;
        degree[c] += 1;
        degree[d] += 1;
    }
    let edges = darts.keys().filter(|(u, v)| u < v).copied().collect();
    PlanarInstance { graph: build(n, edges), faces }
}

/// Graph families available to corpus generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Star,
    Grid,
    Tree,
    Planar,
    ErdosRenyi,
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "complete" => Family::Complete,
            "star" => Family::Star,
            "grid" => Family::Grid,
            "tree" => Family::Tree,
            "planar" => Family::Planar,
            "erdos-renyi" | "er" => Family::ErdosRenyi,
            other => return Err(format!("unknown family `{other}`")),
        })
    }
}

/// One corpus entry request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphSpec {
    pub family: Family,
    /// Vertex count, except: grid side length, star leaf count.
    pub size: usize,
    pub seed: u64,
}

impl GraphSpec {
    pub fn new(family: Family, size: usize, seed: u64) -> Self {
        GraphSpec { family, size, seed }
    }

    pub fn name(&self) -> String {
        let fam = serde_json::to_value(self.family).unwrap();
        format!("{}-{}-s{}", fam.as_str().unwrap(), self.size, self.seed)
    }

    pub fn build(&self) -> Graph {
        match self.family {
            Family::Path => path(self.size),
            Family::Cycle => cycle(self.size),
            Family::Complete => complete(self.size),
            Family::Star => star(self.size),
            Family::Grid => grid(self.size, self.size),
            Family::Tree => random_tree(self.size, self.seed),
            Family::Planar => planar_triangulation(self.size, self.seed).graph,
            Family::ErdosRenyi => erdos_renyi(self.size, 3.0 / self.size.max(4) as f64, self.seed),
        }
    }
}

/// Builds every requested graph, in request order.
pub fn generate_corpus(specs: &[GraphSpec]) -> Vec<(GraphSpec, Graph)> {
    specs.iter().map(|s| (s.clone(), s.build())).collect()
}

fn default_radii() -> Vec<usize> {
    vec![1, 2]
}

fn default_cap() -> usize {
    crate::reach::DEFAULT_ENUMERATION_CAP
}

/// Corpus and run parameters read from a JSON file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub corpus: Vec<GraphSpec>,
    #[serde(default = "default_radii")]
    pub radii: Vec<usize>,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default)]
    pub output: Option<std::path::PathBuf>,
    /// Worker threads; `None` defers to the environment.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.cap > crate::reach::MAX_ENUMERATION_CAP {
            return Err(crate::Error::Precondition(format!(
                "enumeration cap {} exceeds {}",
                self.cap,
                crate::reach::MAX_ENUMERATION_CAP
            )));
        }
        if self.threads == Some(0) {
            return Err(crate::Error::Precondition("threads must be positive".into()));
        }
        Ok(())
    }
}
