use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// Undirected simple graph on the vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

/// Result of iterated removal of vertices of degree at most one.
#[derive(Clone, Debug)]
pub struct PeelResult {
    pub reduced: Graph,
    /// `kept[i]` is the original id of reduced vertex `i`.
    pub kept: Vec<usize>,
    /// Original ids of removed vertices, in removal order.
    pub removed: Vec<usize>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list. Duplicates and both orientations
    /// collapse into one edge; self-loops and out-of-range ids are rejected.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m2 = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        Ok(Graph { adj, m: m2 / 2 })
    }

    /// Builds from adjacency lists that are already symmetric; used internally
    /// where the invariants hold by construction.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        debug_assert!(adj.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        Graph { adj, m }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
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

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of vertices of degree at least three.
    pub fn count_high_degree(&self) -> usize {
        self.adj.iter().filter(|l| l.len() >= 3).count()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True iff the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        let mut uf = UnionFind::new(self.n());
        self.edges().all(|(u, v)| uf.union(u, v))
    }

    /// Whether `self - removed` is a forest.
    pub fn is_forest_without(&self, removed: &[usize]) -> bool {
        let mut gone = vec![false; self.n()];
        for &v in removed {
            gone[v] = true;
        }
        let mut uf = UnionFind::new(self.n());
        self.edges().filter(|&(u, v)| !gone[u] && !gone[v]).all(|(u, v)| uf.union(u, v))
    }

    /// Subgraph induced by `s`. Returns the graph together with the
    /// new-to-old id map (`s` sorted and deduplicated) and the old-to-new map.
    pub fn induced_subgraph(&self, s: &[usize]) -> (Graph, Vec<usize>, Vec<Option<usize>>) {
        let mut to_old = s.to_vec();
        to_old.sort_unstable();
        to_old.dedup();
        let mut to_new = vec![None; self.n()];
        for (i, &v) in to_old.iter().enumerate() {
            to_new[v] = Some(i);
        }
        let adj = to_old
            .iter()
            .map(|&v| self.adj[v].iter().filter_map(|&w| to_new[w]).collect::<Vec<_>>())
            .collect();
        (Graph::from_sorted_adjacency(adj), to_old, to_new)
    }

    /// Removes vertices of degree at most one until none remain.
    pub fn peel_degree_one(&self) -> PeelResult {
        let n = self.n();
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut removed_flag = vec![false; n];
        let mut removed = Vec::new();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        while let Some(v) = queue.pop_front() {
            if removed_flag[v] {
                continue;
            }
            removed_flag[v] = true;
            removed.push(v);
            for &w in &self.adj[v] {
                if !removed_flag[w] {
                    deg[w] -= 1;
                    // a vertex reaching degree zero was queued when it hit one
                    if deg[w] == 1 {
                        queue.push_back(w);
                    }
                }
            }
        }
        let survivors: Vec<usize> = (0..n).filter(|&v| !removed_flag[v]).collect();
        let (reduced, kept, _) = self.induced_subgraph(&survivors);
        PeelResult { reduced, kept, removed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edge_list(n, &edges).unwrap()
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        let c4 = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4, cycle(4));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(Graph::from_edge_list(2, &[(0, 0)]), Err(Error::Input(_))));
        assert!(matches!(Graph::from_edge_list(2, &[(0, 2)]), Err(Error::Input(_))));
    }

    #[test]
    fn peel_examples() {
        let p3 = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        let r = p3.peel_degree_one();
        assert!(r.reduced.is_empty());
        assert_eq!(r.removed.len(), 3);

        let r = cycle(4).peel_degree_one();
        assert_eq!(r.reduced, cycle(4));
        assert!(r.removed.is_empty());
        assert_eq!(r.kept, vec![0, 1, 2, 3]);

        let star = Graph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = star.peel_degree_one();
        assert!(r.reduced.is_empty());
        assert_eq!(*r.removed.last().unwrap(), 0);
    }

    #[test]
    fn peel_keeps_ids_explicit() {
        // triangle 2-3-4 with a pendant path 0-1-2 and isolated 5
        let g = Graph::from_edge_list(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)]).unwrap();
        let r = g.peel_degree_one();
        assert_eq!(r.kept, vec![2, 3, 4]);
        assert_eq!(r.reduced, cycle(3));
        let mut removed = r.removed.clone();
        removed.sort();
        assert_eq!(removed, vec![0, 1, 5]);
    }

    #[test]
    fn forest_and_high_degree() {
        let tree = Graph::from_edge_list(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert!(tree.is_forest());
        assert!(!cycle(3).is_forest());
        assert!(Graph::empty(0).is_forest());
        assert_eq!(cycle(6).count_high_degree(), 0);
        assert_eq!(complete(4).count_high_degree(), 4);
        let star = Graph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.count_high_degree(), 1);
    }

    #[test]
    fn induced_examples() {
        let (h, to_old, _) = complete(4).induced_subgraph(&[3, 0, 2]);
        assert_eq!(h, complete(3));
        assert_eq!(to_old, vec![0, 2, 3]);
        let (h, _, _) = cycle(4).induced_subgraph(&[1, 2]);
        assert_eq!(h.m(), 1);
        let (h, _, _) = cycle(4).induced_subgraph(&[]);
        assert!(h.is_empty());
        let (h, to_old, _) = cycle(5).induced_subgraph(&[0, 1, 2, 3, 4]);
        assert_eq!(h, cycle(5));
        assert_eq!(to_old, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn components_sorted() {
        let g = Graph::from_edge_list(5, &[(3, 4), (0, 2)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 2], vec![1], vec![3, 4]]);
    }
}
