//! Scattered-set extraction from an order of bounded weak colouring number.
//!
//! Given `A` and an order `L` with `c = wcol_r(G, L)`, finds a deletion set
//! `S` with `|S| <= c(c-1)` and `B ⊆ A` of size at least `m` whose members
//! are pairwise at distance `> r` in `G - S`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bfs, Graph, LinearOrder, VertexSet};
use crate::reach::{degeneracy, wreach_sets};

/// `H`: `uv` is an edge iff one of `u`, `v` weakly `r`-reaches the other.
pub fn wreach_intersection_graph(g: &Graph, order: &LinearOrder, r: usize) -> Graph {
    let sets = wreach_sets(g, order, r);
    let edges = sets.iter().enumerate().flat_map(|(v, s)| s.iter().filter(move |&&u| u != v).map(move |&u| (u, v)));
    Graph::from_edges(g.n(), edges).expect("wreach sets only hold vertices of G")
}

/// Degeneracy facts about `H` under the order it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    /// Largest number of `L`-smaller `H`-neighbours of a vertex.
    pub back_degree: usize,
    /// Degeneracy of `H` itself.
    pub degeneracy: usize,
}

pub fn h_degeneracy(h: &Graph, order: &LinearOrder) -> DegeneracyReport {
    let back_degree = h
        .vertices()
        .map(|v| h.neighbours(v).iter().filter(|&&u| order.less(u, v)).count())
        .max()
        .unwrap_or(0);
    DegeneracyReport { back_degree, degeneracy: degeneracy(h).0 }
}

/// Greedy `H`-independent subset of `A` with `k` members.
///
/// `A` is scanned from the `L`-largest vertex down; a vertex is kept iff no
/// kept vertex is adjacent to it. Since a vertex has at most `c - 1`
/// smaller `H`-neighbours, at least `|A| / c` vertices survive.
pub fn greedy_independent(h: &Graph, order: &LinearOrder, a: &VertexSet, k: usize) -> Result<VertexSet> {
    let mut scan: Vec<usize> = a.iter().collect();
    scan.sort_by_key(|&v| std::cmp::Reverse(order.rank(v)));
    let mut blocked = vec![false; h.n()];
    let mut kept = Vec::with_capacity(k);
    for v in scan {
        if kept.len() == k {
            break;
        }
        if blocked[v] {
            continue;
        }
        kept.push(v);
        for &u in h.neighbours(v) {
            blocked[u] = true;
        }
    }
    if kept.len() < k {
        return Err(Error::TargetUnreachable { target: k, found: kept.len() });
    }
    Ok(VertexSet::from_unsorted(kept))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSizes {
    /// `|I_i|`
    pub independent: usize,
    /// `|I_{i+1}|`
    pub next: usize,
    /// `|B_{i+1}|`
    pub scattered: usize,
    /// `|S_{i+1}|`
    pub deleted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Iteration {
    pub pivot: usize,
    /// 1: the pivot reaches at most half of `I_i`; 2: deletion step.
    pub case: u8,
    /// `I_i`, sorted.
    pub independent: Vec<usize>,
    /// Vertices added to `S` in this step.
    pub added: Vec<usize>,
    pub sizes: StepSizes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatterResult {
    /// Measured `max_v |WReach_r[v]|`.
    pub c: usize,
    pub m: usize,
    pub r: usize,
    #[serde(rename = "S")]
    pub deleted: VertexSet,
    #[serde(rename = "B")]
    pub scattered: VertexSet,
    pub iterations: Vec<Iteration>,
}

impl ScatterResult {
    pub fn case_two_count(&self) -> usize {
        self.iterations.iter().filter(|it| it.case == 2).count()
    }
}

/// Largest `m` with `(c + 1) * 2^m <= size`, if any.
pub fn largest_m(size: usize, c: usize) -> Option<usize> {
    let mut m = None;
    let mut need = c + 1;
    let mut k = 0;
    while need <= size {
        m = Some(k);
        k += 1;
        need = match need.checked_mul(2) {
            Some(x) => x,
            None => break,
        };
    }
    m
}

pub fn scatter_extract(g: &Graph, order: &LinearOrder, r: usize, a: &VertexSet, m: usize) -> Result<ScatterResult> {
    order.check_fits(g)?;
    for v in a.iter() {
        g.check_vertex(v)?;
    }
    let sets = wreach_sets(g, order, r);
    let c = sets.iter().map(Vec::len).max().unwrap_or(0);
    let k = u32::try_from(m).ok().and_then(|m| 1usize.checked_shl(m)).filter(|&k| k.checked_mul(c + 1).is_some());
    let Some(k) = k.filter(|&k| k * (c + 1) <= a.len()) else {
        return Err(Error::Precondition(format!("|A| = {} is below (c+1)*2^m with c = {c}, m = {m}", a.len())));
    };
    let h = wreach_intersection_graph(g, order, r);
    let mut independent: Vec<usize> = greedy_independent(&h, order, a, k)?.into_vec();

    let mut deleted = vec![false; g.n()];
    let mut s = Vec::new();
    let mut b = Vec::new();
    let mut iterations = Vec::new();
    let mut bfs = Bfs::new(g.n());
    while let Some(&pivot) = independent.iter().max_by_key(|&&v| order.rank(v)) {
        bfs.run(g, pivot, r, |y| !deleted[y], |_| true);
        let (reached, rest): (Vec<usize>, Vec<usize>) = independent.iter().partition(|&&v| bfs.dist(v) <= r);
        // a lone pivot reaches only itself; removing it is the case-1 move
        let (case, next, added) = if 2 * reached.len() <= independent.len() || independent.len() == 1 {
            (1, rest, Vec::new())
        } else {
            let added: Vec<usize> = sets[pivot].iter().copied().filter(|&u| u != pivot && !deleted[u]).collect();
            for &u in &added {
                deleted[u] = true;
            }
            s.extend_from_slice(&added);
            (2, reached.into_iter().filter(|&v| v != pivot).collect(), added)
        };
        b.push(pivot);
        iterations.push(Iteration {
            pivot,
            case,
            independent: std::mem::take(&mut independent),
            added,
            sizes: StepSizes { independent: 0, next: next.len(), scattered: b.len(), deleted: s.len() },
        });
        let it = iterations.last_mut().unwrap();
        it.independent.sort_unstable();
        it.sizes.independent = it.independent.len();
        independent = next;
    }
    Ok(ScatterResult {
        c,
        m,
        r,
        deleted: VertexSet::from_unsorted(s),
        scattered: VertexSet::from_unsorted(b),
        iterations,
    })
}

/// Outcome of re-checking a [`ScatterResult`] from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatterAudit {
    pub ok: bool,
    pub subset: bool,
    pub disjoint: bool,
    /// Pairwise distance `> r` in `G - S`.
    pub r_independent: bool,
    /// Pairwise distance `> 2r` in `G - S`; informational only.
    pub scattered_2r: bool,
    pub deletion_bound: bool,
    pub size_bound: bool,
    pub case_two_bound: bool,
    pub shrinkage: bool,
    pub pivot_separation: bool,
    pub min_distance: Option<usize>,
}

/// Independent verification by BFS in `G - S`.
pub fn audit(g: &Graph, a: &VertexSet, res: &ScatterResult) -> ScatterAudit {
    let n = g.n();
    let mut blocked = vec![false; n];
    for v in res.deleted.iter() {
        blocked[v] = true;
    }
    let mut min_distance: Option<usize> = None;
    let mut bfs = Bfs::new(n);
    for x in res.scattered.iter() {
        bfs.run(g, x, usize::MAX, |y| !blocked[y], |_| true);
        for y in res.scattered.iter().filter(|&y| y != x) {
            let d = bfs.dist(y);
            if d != crate::graph::UNREACHED {
                min_distance = Some(min_distance.map_or(d, |m| m.min(d)));
            }
        }
    }
    let r = res.r;
    let r_independent = min_distance.is_none_or(|d| d > r);
    let scattered_2r = min_distance.is_none_or(|d| d > 2 * r);

    let shrinkage = res.iterations.iter().all(|it| it.sizes.next >= it.sizes.independent / 2);

    // after each deletion step the pivot is far from the rest of I_i
    let mut del = vec![false; n];
    let mut pivot_separation = true;
    for it in &res.iterations {
        for &u in &it.added {
            del[u] = true;
        }
        if it.case == 2 {
            bfs.run(g, it.pivot, r, |y| !del[y], |_| true);
            if it.independent.iter().any(|&v| v != it.pivot && bfs.dist(v) <= r) {
                pivot_separation = false;
            }
        }
    }

    let subset = res.scattered.is_subset(a);
    let disjoint = res.scattered.iter().all(|v| !blocked[v]);
    let deletion_bound = res.deleted.len() <= res.c * res.c.saturating_sub(1);
    let size_bound = res.scattered.len() >= res.m;
    let case_two_bound = res.case_two_count() <= res.c;
    ScatterAudit {
        ok: subset && disjoint && r_independent && deletion_bound && size_bound && case_two_bound && shrinkage && pivot_separation,
        subset,
        disjoint,
        r_independent,
        scattered_2r,
        deletion_bound,
        size_bound,
        case_two_bound,
        shrinkage,
        pivot_separation,
        min_distance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::*;
    use crate::reach::{greedy_order, wcol_under};

    fn all(n: usize) -> VertexSet {
        (0..n).collect()
    }

    #[test]
    fn radius_zero_and_cliques() {
        let g = grid(3, 3);
        assert_eq!(wreach_intersection_graph(&g, &LinearOrder::identity(9), 0).m(), 0);
        let k = complete(5);
        assert_eq!(wreach_intersection_graph(&k, &LinearOrder::identity(5), 1), k);
    }

    #[test]
    fn star_h_is_the_star() {
        let s = star(6);
        let h = wreach_intersection_graph(&s, &LinearOrder::identity(7), 2);
        assert_eq!(h, s);
        let rep = h_degeneracy(&h, &LinearOrder::identity(7));
        assert_eq!(rep, DegeneracyReport { back_degree: 1, degeneracy: 1 });
    }

    #[test]
    fn greedy_on_edgeless_and_complete() {
        let order = LinearOrder::identity(6);
        let i = greedy_independent(&Graph::empty(6), &order, &all(6), 3).unwrap();
        assert_eq!(i.as_slice(), &[3, 4, 5]);
        let k = complete(6);
        assert_eq!(greedy_independent(&k, &order, &all(6), 1).unwrap().as_slice(), &[5]);
        assert!(matches!(
            greedy_independent(&k, &order, &all(6), 2),
            Err(Error::TargetUnreachable { target: 2, found: 1 })
        ));
    }

    #[test]
    fn greedy_star_matches_exhaustive_maximum() {
        // leaves come last in the scan direction, so all of them survive
        let s = star(8);
        let i = greedy_independent(&s, &LinearOrder::identity(9), &all(9), 8).unwrap();
        assert_eq!(i.as_slice(), &[1, 2, 3, 4, 5, 6, 7, 8]);
        let best = (0u32..1 << 9)
            .filter(|mask| s.edges().all(|(u, v)| mask & (1 << u) == 0 || mask & (1 << v) == 0))
            .map(u32::count_ones)
            .max()
            .unwrap();
        assert_eq!(best, 8);
    }

    #[test]
    fn edgeless_graph() {
        let g = Graph::empty(8);
        let res = scatter_extract(&g, &LinearOrder::identity(8), 3, &all(8), 2).unwrap();
        assert!(res.deleted.is_empty());
        assert_eq!(res.scattered.len(), 4);
        assert!(audit(&g, &all(8), &res).ok);
    }

    #[test]
    fn star_hand_trace() {
        let s = star(16);
        let order = LinearOrder::identity(17);
        let leaves: VertexSet = (1..17).collect();
        let res = scatter_extract(&s, &order, 2, &leaves, 2).unwrap();
        assert_eq!(res.c, 2);
        assert_eq!(res.deleted.as_slice(), &[0]);
        assert_eq!(res.case_two_count(), 1);
        assert!(res.scattered.len() >= 2);
        let rep = audit(&s, &leaves, &res);
        assert!(rep.ok, "{rep:?}");
        assert_eq!(rep.min_distance, None);
    }

    #[test]
    fn grid_is_audited() {
        let g = grid(4, 4);
        let order = greedy_order(&g, 1);
        let c = wcol_under(&g, &order, 1);
        let m = largest_m(16, c).unwrap();
        let res = scatter_extract(&g, &order, 1, &all(16), m).unwrap();
        assert_eq!(res.c, c);
        assert!(audit(&g, &all(16), &res).ok);
        assert!(scatter_extract(&g, &order, 1, &all(16), m + 1).is_err());
    }

    #[test]
    fn largest_m_values() {
        assert_eq!(largest_m(16, 2), Some(2));
        assert_eq!(largest_m(2, 2), None);
        assert_eq!(largest_m(3, 2), Some(0));
        assert_eq!(largest_m(usize::MAX, 1), Some(62));
    }

    #[test]
    fn audit_catches_tampering() {
        let g = path(10);
        let order = LinearOrder::identity(10);
        let res = scatter_extract(&g, &order, 1, &all(10), 1).unwrap();
        let mut bad = res.clone();
        bad.scattered = VertexSet::from_unsorted(vec![3, 4]);
        bad.deleted = VertexSet::new();
        assert!(!audit(&g, &all(10), &bad).r_independent);
    }
}
