//! Dinic max-flow on small integer-capacity networks.
//!
//! Vertex-disjoint path questions are reduced to this by splitting each
//! vertex `x` into `x_in -> x_out` with capacity 1.

#[derive(Debug, Clone, Default)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    initial: Vec<u32>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); nodes], ..Default::default() }
    }

    pub(crate) fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize, cap: u32) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(cap);
        self.initial.push(cap);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
        self.initial.push(0);
    }

    /// Restores all capacities so the network can be reused for another
    /// source/sink pair.
    pub(crate) fn reset(&mut self) {
        self.cap.copy_from_slice(&self.initial);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.clear();
        self.level.resize(self.adj.len(), -1);
        self.level[s] = 0;
        let mut queue = vec![s];
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: u32) -> u32 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.adj[u].len() {
            let e = self.adj[u][self.iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let d = self.dfs(v, t, pushed.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    /// Maximum flow from `s` to `t`, stopping early once `limit` is reached.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let mut flow = 0;
        while flow < limit && self.bfs(s, t) {
            self.iter.clear();
            self.iter.resize(self.adj.len(), 0);
            loop {
                let f = self.dfs(s, t, limit - flow);
                if f == 0 {
                    break;
                }
                flow += f;
                if flow >= limit {
                    break;
                }
            }
        }
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_networks() {
        // two disjoint s-t routes plus a shared bottleneck edge
        let mut f = FlowNetwork::new(4);
        f.add_edge(0, 1, 1);
        f.add_edge(0, 2, 1);
        f.add_edge(1, 3, 1);
        f.add_edge(2, 3, 1);
        f.add_edge(1, 2, 5);
        assert_eq!(f.max_flow(0, 3, u32::MAX), 2);
        f.reset();
        assert_eq!(f.max_flow(0, 3, 1), 1);
        f.reset();
        assert_eq!(f.max_flow(3, 0, u32::MAX), 0);
    }

    #[test]
    fn needs_residual_edges() {
        // classic instance where a greedy path blocks the optimum
        let mut f = FlowNetwork::new(6);
        f.add_edge(0, 1, 1);
        f.add_edge(0, 2, 1);
        f.add_edge(1, 3, 1);
        f.add_edge(1, 4, 1);
        f.add_edge(2, 3, 1);
        f.add_edge(3, 5, 1);
        f.add_edge(4, 5, 1);
        assert_eq!(f.max_flow(0, 5, u32::MAX), 2);
    }
}
