//! Backtracking enumeration of Hamilton paths and cycles on small graphs.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search budget of {0} node expansions exhausted")]
pub struct BudgetExhausted(pub u64);

/// Adjacency lists of a small undirected graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGraph {
    adj: Vec<Vec<usize>>,
}

impl LocalGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a != b && !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Self { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}

struct Frame {
    node: usize,
    next: usize,
}

/// Lazily enumerates Hamilton paths (or cycles) of a connected graph.
///
/// Paths are reported once per undirected path; cycles once per undirected
/// cycle, starting at node 0. Every pushed search node counts against the
/// budget; when it runs out the iterator yields one `Err` and stops.
pub struct HamiltonSearch<'g> {
    g: &'g LocalGraph,
    closed: bool,
    starts: Vec<usize>,
    start_idx: usize,
    /// When the only start is a forced endpoint, every path from it is canonical.
    fixed_end: bool,
    stack: Vec<Frame>,
    on_path: Vec<bool>,
    budget: u64,
    used: u64,
    done: bool,
}

impl<'g> HamiltonSearch<'g> {
    pub fn paths(g: &'g LocalGraph, budget: u64) -> Self {
        let n = g.len();
        let leaves: Vec<usize> = (0..n).filter(|&v| g.neighbors(v).len() <= 1).collect();
        let (starts, fixed_end, done) = if n <= 1 {
            ((0..n).collect(), true, false)
        } else if leaves.len() > 2 || !g.is_connected() {
            (Vec::new(), false, true)
        } else if leaves.is_empty() {
            ((0..n).collect(), false, false)
        } else {
            (vec![leaves[0]], true, false)
        };
        Self::with_starts(g, false, starts, fixed_end, done, budget)
    }

    pub fn cycles(g: &'g LocalGraph, budget: u64) -> Self {
        let n = g.len();
        let done = n < 3 || (0..n).any(|v| g.neighbors(v).len() < 2) || !g.is_connected();
        Self::with_starts(g, true, vec![0], false, done, budget)
    }

    fn with_starts(
        g: &'g LocalGraph,
        closed: bool,
        starts: Vec<usize>,
        fixed_end: bool,
        done: bool,
        budget: u64,
    ) -> Self {
        Self {
            g,
            closed,
            starts,
            start_idx: 0,
            fixed_end,
            stack: Vec::new(),
            on_path: vec![false; g.len()],
            budget,
            used: 0,
            done,
        }
    }

    pub fn expansions(&self) -> u64 {
        self.used
    }

    fn path(&self) -> Vec<usize> {
        self.stack.iter().map(|f| f.node).collect()
    }

    fn canonical(&self) -> bool {
        let n = self.stack.len();
        if self.closed {
            n < 3 || self.stack[1].node < self.stack[n - 1].node
        } else {
            self.fixed_end || n == 1 || self.stack[0].node < self.stack[n - 1].node
        }
    }

    fn complete(&self) -> bool {
        let n = self.g.len();
        if self.stack.len() != n {
            return false;
        }
        !self.closed || self.g.has_edge(self.stack[n - 1].node, self.stack[0].node)
    }

    /// False when the unvisited nodes can no longer all be appended.
    fn viable(&self) -> bool {
        let n = self.g.len();
        let remaining = n - self.stack.len();
        if remaining == 0 {
            return true;
        }
        let cur = self.stack.last().expect("nonempty").node;
        let start = self.stack[0].node;
        let mut forced_ends = 0;
        for v in 0..n {
            if self.on_path[v] {
                continue;
            }
            let free = self.g.neighbors(v).iter().filter(|&&w| !self.on_path[w]).count();
            let near_cur = self.g.has_edge(v, cur);
            if self.closed {
                let near_start = self.g.has_edge(v, start);
                let avail = free + near_cur as usize + (near_start && start != cur) as usize;
                if avail < 2 && !(remaining == 1 && near_cur && near_start) {
                    return false;
                }
                continue;
            }
            if free == 0 && remaining > 1 {
                return false;
            }
            if free == 1 && !near_cur {
                forced_ends += 1;
                if forced_ends > 1 {
                    return false;
                }
            }
        }
        // Unvisited nodes must be reachable from the current end.
        let mut seen = vec![false; n];
        let mut stack = vec![cur];
        seen[cur] = true;
        let mut reached = 0;
        while let Some(v) = stack.pop() {
            for &w in self.g.neighbors(v) {
                if !seen[w] && !self.on_path[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == remaining
    }

    fn push(&mut self, v: usize) -> Result<(), BudgetExhausted> {
        if self.used >= self.budget {
            return Err(BudgetExhausted(self.budget));
        }
        self.used += 1;
        self.on_path[v] = true;
        self.stack.push(Frame { node: v, next: 0 });
        Ok(())
    }

    fn pop(&mut self) {
        if let Some(f) = self.stack.pop() {
            self.on_path[f.node] = false;
        }
    }
}

impl Iterator for HamiltonSearch<'_> {
    type Item = Result<Vec<usize>, BudgetExhausted>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            if self.stack.is_empty() {
                let Some(&s) = self.starts.get(self.start_idx) else {
                    self.done = true;
                    return None;
                };
                self.start_idx += 1;
                if let Err(e) = self.push(s) {
                    self.done = true;
                    return Some(Err(e));
                }
                if !self.viable() {
                    self.pop();
                    continue;
                }
                if self.complete() && self.canonical() {
                    return Some(Ok(self.path()));
                }
            }
            let top = self.stack.len() - 1;
            let cur = self.stack[top].node;
            let k = self.stack[top].next;
            if let Some(&w) = self.g.neighbors(cur).get(k) {
                self.stack[top].next += 1;
                if self.on_path[w] {
                    continue;
                }
                if let Err(e) = self.push(w) {
                    self.done = true;
                    return Some(Err(e));
                }
                if !self.viable() {
                    self.pop();
                    continue;
                }
                if self.complete() {
                    let found = self.canonical().then(|| self.path());
                    self.pop();
                    if let Some(p) = found {
                        return Some(Ok(p));
                    }
                }
            } else {
                self.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> LocalGraph {
        let mut edges = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let v = y * w + x;
                if x + 1 < w {
                    edges.push((v, v + 1));
                }
                if y + 1 < h {
                    edges.push((v, v + w));
                }
            }
        }
        LocalGraph::new(w * h, edges)
    }

    fn all(search: HamiltonSearch) -> Vec<Vec<usize>> {
        search.map(|r| r.unwrap()).collect()
    }

    #[test]
    fn path_graph_has_one_path() {
        let g = LocalGraph::new(5, (0..4).map(|i| (i, i + 1)));
        assert_eq!(all(HamiltonSearch::paths(&g, 1000)), vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn star_has_none() {
        let g = LocalGraph::new(4, [(0, 1), (0, 2), (0, 3)]);
        assert!(all(HamiltonSearch::paths(&g, 1000)).is_empty());
    }

    #[test]
    fn single_node_and_pair() {
        let g = LocalGraph::new(1, []);
        assert_eq!(all(HamiltonSearch::paths(&g, 10)), vec![vec![0]]);
        let g = LocalGraph::new(2, [(0, 1)]);
        assert_eq!(all(HamiltonSearch::paths(&g, 10)), vec![vec![0, 1]]);
    }

    #[test]
    fn grid_3x3_corner_paths() {
        let g = grid(3, 3);
        let paths = all(HamiltonSearch::paths(&g, 1_000_000));
        // Each undirected path counted once; those with an end at corner 0.
        let from_corner = paths.iter().filter(|p| p[0] == 0 || *p.last().unwrap() == 0).count();
        assert_eq!(from_corner, 8);
        for p in &paths {
            for w in p.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
        }
    }

    #[test]
    fn four_cycle_has_one_cycle() {
        let g = LocalGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(all(HamiltonSearch::cycles(&g, 1000)), vec![vec![0, 1, 2, 3]]);
        assert!(all(HamiltonSearch::cycles(&grid(3, 3), 100_000)).is_empty());
        assert_eq!(all(HamiltonSearch::cycles(&grid(4, 2), 100_000)).len(), 1);
    }

    #[test]
    fn budget_is_reported() {
        let g = grid(6, 6);
        let mut s = HamiltonSearch::paths(&g, 50);
        let results: Vec<_> = s.by_ref().collect();
        assert!(matches!(results.last(), Some(Err(BudgetExhausted(50)))));
        assert_eq!(s.expansions(), 50);
    }
}
