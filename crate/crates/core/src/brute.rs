//! Reference implementations by exhaustive enumeration.
//!
//! Nothing here shares code with the fast kernels: reachability is read off
//! an explicit list of all simple paths, admissibility is a set packing over
//! those paths with unrestricted interiors, and optima enumerate every
//! permutation. Only usable on very small graphs.

use std::collections::HashSet;

use crate::graph::{Graph, LinearOrder};
use crate::reach::Metric;

/// Every simple path starting at `v` with length `0..=r`.
pub fn simple_paths(g: &Graph, v: usize, r: usize) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, path: &mut Vec<usize>, r: usize, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        if path.len() > r {
            return;
        }
        let last = *path.last().unwrap();
        for &w in g.neighbours(last) {
            if !path.contains(&w) {
                path.push(w);
                extend(g, path, r, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(g, &mut vec![v], r, &mut out);
    out
}

pub fn wreach(g: &Graph, order: &LinearOrder, v: usize, r: usize) -> Vec<usize> {
    let mut out: Vec<usize> = simple_paths(g, v, r)
        .into_iter()
        .filter(|p| {
            let end = *p.last().unwrap();
            p.iter().all(|&x| order.rank(end) <= order.rank(x))
        })
        .map(|p| *p.last().unwrap())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn sreach(g: &Graph, order: &LinearOrder, v: usize, r: usize) -> Vec<usize> {
    let mut out: Vec<usize> = simple_paths(g, v, r)
        .into_iter()
        .filter(|p| {
            let end = *p.last().unwrap();
            let inner = if p.len() > 2 { &p[1..p.len() - 1] } else { &[][..] };
            order.rank(end) <= order.rank(v) && inner.iter().all(|&x| order.less(v, x))
        })
        .map(|p| *p.last().unwrap())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Largest family of paths of length at most `r` from `v` to vertices
/// `<= v`, pairwise meeting only in `v`. The length-0 path counts.
pub fn admissibility(g: &Graph, order: &LinearOrder, v: usize, r: usize) -> usize {
    // group candidate paths by endpoint; paths sharing an endpoint conflict
    let mut groups: Vec<Vec<u64>> = vec![Vec::new(); g.n()];
    for p in simple_paths(g, v, r) {
        let end = *p.last().unwrap();
        if p.len() > 1 && order.less(end, v) {
            groups[end].push(p[1..].iter().fold(0u64, |m, &x| m | (1 << x)));
        }
    }
    groups.retain(|grp| !grp.is_empty());
    for grp in &mut groups {
        grp.sort_by_key(|m| m.count_ones());
    }

    fn search(groups: &[Vec<u64>], used: u64, count: usize, best: &mut usize) {
        if count > *best {
            *best = count;
        }
        let Some((first, rest)) = groups.split_first() else { return };
        if count + groups.len() <= *best {
            return;
        }
        for &p in first {
            if p & used == 0 {
                search(rest, used | p, count + 1, best);
            }
        }
        search(rest, used, count, best);
    }

    let mut best = 0;
    search(&groups, 0, 0, &mut best);
    1 + best
}

pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    // Heap's algorithm
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Value of `metric` under `order`, by enumeration.
pub fn value_under(g: &Graph, order: &LinearOrder, r: usize, metric: Metric) -> usize {
    g.vertices()
        .map(|v| match metric {
            Metric::Wcol => wreach(g, order, v, r).len(),
            Metric::Col => sreach(g, order, v, r).len(),
            Metric::Adm => admissibility(g, order, v, r),
        })
        .max()
        .unwrap_or(0)
}

/// Minimum of `metric` over all `n!` orders.
pub fn optimum(g: &Graph, r: usize, metric: Metric) -> usize {
    let mut best = usize::MAX;
    for_each_permutation(g.n(), |seq| {
        let order = LinearOrder::from_sequence(seq.to_vec()).unwrap();
        best = best.min(value_under(g, &order, r, metric));
    });
    if g.n() == 0 {
        0
    } else {
        best
    }
}

/// All-pairs distances by Floyd–Warshall; `None` for unreachable pairs.
pub fn distance_matrix(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.n();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    #[allow(clippy::needless_range_loop)]
    for v in 0..n {
        d[v][v] = 0;
        for &w in g.neighbours(v) {
            d[v][w] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d.into_iter().map(|row| row.into_iter().map(|x| (x < inf).then_some(x)).collect()).collect()
}

fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    b * (b - 1) / 2 + a
}

/// Canonical code of a graph on at most 8 vertices: the smallest edge
/// bitmask over relabellings that sort vertices by degree.
fn canonical_code(n: usize, adj: &[u8]) -> u64 {
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| deg[v]);
    let slot_degree: Vec<u32> = by_degree.iter().map(|&v| deg[v]).collect();

    #[allow(clippy::too_many_arguments)]
    fn assign(
        pos: usize,
        n: usize,
        adj: &[u8],
        deg: &[u32],
        slot_degree: &[u32],
        label: &mut Vec<usize>,
        used: &mut u8,
        best: &mut u64,
    ) {
        if pos == n {
            let mut code = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    if adj[label[i]] & (1 << label[j]) != 0 {
                        code |= 1 << pair_index(i, j);
                    }
                }
            }
            *best = (*best).min(code);
            return;
        }
        for v in 0..n {
            if *used & (1 << v) == 0 && deg[v] == slot_degree[pos] {
                *used |= 1 << v;
                label.push(v);
                assign(pos + 1, n, adj, deg, slot_degree, label, used, best);
                label.pop();
                *used &= !(1 << v);
            }
        }
    }

    let mut best = u64::MAX;
    assign(0, n, adj, &deg, &slot_degree, &mut Vec::new(), &mut 0, &mut best);
    best
}

/// One representative of every isomorphism class of graphs on exactly `n`
/// vertices, for every `n` in `1..=max_n` (`max_n <= 8`). Each class on
/// `n` vertices arises from a class on `n - 1` vertices plus one vertex.
pub fn all_graphs_up_to(max_n: usize) -> Vec<Vec<Graph>> {
    assert!(max_n <= 8, "canonical codes use 64-bit edge masks");
    let mut levels: Vec<Vec<Vec<u8>>> = vec![vec![vec![0u8]]];
    for n in 2..=max_n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for prev in &levels[n - 2] {
            for subset in 0..(1u16 << (n - 1)) {
                let subset = subset as u8;
                let mut adj = prev.clone();
                adj.push(subset);
                for (v, row) in adj.iter_mut().enumerate().take(n - 1) {
                    if subset & (1 << v) != 0 {
                        *row |= 1 << (n - 1);
                    }
                }
                if seen.insert(canonical_code(n, &adj)) {
                    next.push(adj);
                }
            }
        }
        levels.push(next);
    }
    levels
        .into_iter()
        .take(max_n)
        .enumerate()
        .map(|(i, graphs)| {
            let n = i + 1;
            graphs
                .into_iter()
                .map(|adj| {
                    let edges = (0..n)
                        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                        .filter(|&(u, v)| adj[u] & (1 << v) != 0);
                    Graph::from_edges(n, edges).unwrap()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::*;

    #[test]
    fn path_counts() {
        // C5 from one vertex: 1 + 2 + 2 + 2 paths of length 0..3
        assert_eq!(simple_paths(&cycle(5), 0, 3).len(), 7);
        assert_eq!(simple_paths(&complete(4), 0, 3).len(), 1 + 3 + 6 + 6);
    }

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = all_graphs_up_to(7).iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156, 1044]);
    }

    #[test]
    fn floyd_warshall_on_grid() {
        let d = distance_matrix(&grid(3, 3));
        assert_eq!(d[0][8], Some(4));
        let two = path(2).disjoint_union(&path(2));
        assert_eq!(distance_matrix(&two)[0][2], None);
    }
}
