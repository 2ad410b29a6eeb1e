//! Plain adjacency-list graphs plus the breadth-first utilities (shells,
//! balls, components) that every other module leans on.

use std::collections::VecDeque;

/// An undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

pub const UNREACHED: usize = usize::MAX;

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list; duplicate edges are merged and loops ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Builds a graph from (possibly unsorted) neighbor lists.
    pub fn from_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let mut g = Graph::new(adj.len());
        for (u, nbrs) in adj.iter().enumerate() {
            for &v in nbrs {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
        }
        if let Err(pos) = self.adj[v].binary_search(&u) {
            self.adj[v].insert(pos, u);
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Breadth-first distances from a set of sources; unreachable vertices get [`UNREACHED`].
    pub fn distances_from(&self, sources: &[usize]) -> Vec<usize> {
        let mut dist = vec![UNREACHED; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == UNREACHED {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == UNREACHED {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Distances restricted to the vertices with `allowed[v]`.
    pub fn distances_within(&self, sources: &[usize], allowed: &[bool]) -> Vec<usize> {
        let mut dist = vec![UNREACHED; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if allowed[s] && dist[s] == UNREACHED {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if allowed[v] && dist[v] == UNREACHED {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Distance between two vertex sets (`UNREACHED` if disconnected or either is empty).
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> usize {
        if a.is_empty() || b.is_empty() {
            return UNREACHED;
        }
        let dist = self.distances_from(a);
        b.iter().map(|&v| dist[v]).min().unwrap_or(UNREACHED)
    }

    /// `D_j(X)`: vertices at distance exactly `j` from `X`, sorted.
    pub fn shell(&self, x: &[usize], j: usize) -> Vec<usize> {
        let dist = self.distances_from(x);
        (0..self.n()).filter(|&v| dist[v] == j).collect()
    }

    /// `B_r(X)`: vertices at distance at most `r` from `X`, sorted.
    pub fn ball(&self, x: &[usize], r: usize) -> Vec<usize> {
        let dist = self.distances_from(x);
        (0..self.n()).filter(|&v| dist[v] <= r).collect()
    }

    /// Vertices outside `set` with a neighbor inside it (that is, `D_1(set)`), sorted.
    pub fn boundary(&self, set: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n()];
        for &v in set {
            inside[v] = true;
        }
        self.boundary_of_mask(&inside)
    }

    pub fn boundary_of_mask(&self, inside: &[bool]) -> Vec<usize> {
        let mut out = vec![false; self.n()];
        for u in 0..self.n() {
            if inside[u] {
                for &v in &self.adj[u] {
                    if !inside[v] {
                        out[v] = true;
                    }
                }
            }
        }
        (0..self.n()).filter(|&v| out[v]).collect()
    }

    /// Connected components of the subgraph induced by `mask`, each sorted.
    pub fn components_of(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for s in 0..self.n() {
            if !mask[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &v in &self.adj[u] {
                    if mask[v] && !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.components_of(&vec![true; self.n()]).len() == 1
    }

    /// Induced subgraph on `verts`; returns the graph with vertices renumbered in the given order.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut index = vec![UNREACHED; self.n()];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.adj[v] {
                if index[w] != UNREACHED && i < index[w] {
                    g.add_edge(i, index[w]);
                }
            }
        }
        g
    }

    /// A shortest path from `s` to `t` (inclusive), if any.
    pub fn shortest_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut parent = vec![UNREACHED; self.n()];
        let mut queue = VecDeque::from([s]);
        parent[s] = s;
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &v in &self.adj[u] {
                if parent[v] == UNREACHED {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == UNREACHED {
            return None;
        }
        let mut path = vec![t];
        let mut cur = t;
        while cur != s {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// True when `walk` is a path (distinct, consecutive adjacent) and a shortest one.
    pub fn is_shortest_path(&self, walk: &[usize]) -> bool {
        if walk.is_empty() {
            return false;
        }
        if !self.is_path(walk) {
            return false;
        }
        let dist = self.distances_from(&walk[..1]);
        dist[*walk.last().unwrap()] == walk.len() - 1
    }

    pub fn is_path(&self, walk: &[usize]) -> bool {
        let mut seen = std::collections::HashSet::new();
        walk.iter().all(|&v| v < self.n() && seen.insert(v))
            && walk.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    pub fn is_cycle(&self, walk: &[usize]) -> bool {
        walk.len() >= 3 && self.is_path(walk) && self.has_edge(walk[0], walk[walk.len() - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn shells_and_balls() {
        let g = path(6);
        assert_eq!(g.shell(&[0], 0), vec![0]);
        assert_eq!(g.shell(&[0], 2), vec![2]);
        assert_eq!(g.ball(&[0, 5], 1), vec![0, 1, 4, 5]);
        assert_eq!(g.boundary(&[2, 3]), vec![1, 4]);
    }

    #[test]
    fn components_and_paths() {
        let g = path(5);
        let mask = vec![true, true, false, true, true];
        assert_eq!(g.components_of(&mask), vec![vec![0, 1], vec![3, 4]]);
        assert_eq!(g.shortest_path(0, 4), Some(vec![0, 1, 2, 3, 4]));
        assert!(g.is_shortest_path(&[1, 2, 3]));
        assert!(!g.is_cycle(&[0, 1, 2]));
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(tri.is_cycle(&[0, 1, 2]));
        assert_eq!(tri.num_edges(), 3);
    }
}
