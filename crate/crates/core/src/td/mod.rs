//! Tree decompositions: representation, validation, elimination-order
//! construction, the blowup route for weighted graphs and the nice form used
//! by the dynamic program.

mod blowup;
mod elimination;
mod nice;

pub use blowup::{blowup, project, BlowupGraph};
pub use elimination::{
    decompose_unweighted, decomposition_from_order, elimination_order, exact_elimination, Effort,
    Heuristic,
};
pub use nice::{make_nice, NiceDecomposition, NiceKind, NiceNode};

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A tree of bags. Bags are sorted; the tree is stored as adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree: Vec<Vec<usize>>,
    pub root: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TdViolation {
    NotATree,
    VertexOutOfRange { vertex: usize },
    UncoveredVertex { vertex: usize },
    UncoveredEdge { u: usize, v: usize },
    DisconnectedOccurrence { vertex: usize },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TdReport {
    pub violations: Vec<TdViolation>,
}

impl TdReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TreeDecomposition {
    /// Decomposition with no bags (only meaningful for the empty graph).
    pub fn empty() -> Self {
        TreeDecomposition { bags: Vec::new(), tree: Vec::new(), root: 0 }
    }

    /// Builds from bags and tree edges, rooted at node 0.
    pub fn new(bags: Vec<Vec<usize>>, edges: &[(usize, usize)]) -> Result<Self> {
        let k = bags.len();
        let mut tree = vec![Vec::new(); k];
        for &(a, b) in edges {
            if a >= k || b >= k || a == b {
                return Err(Error::Input(format!("bad tree edge ({a},{b}) for {k} bags")));
            }
            tree[a].push(b);
            tree[b].push(a);
        }
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        for list in &mut tree {
            list.sort_unstable();
        }
        let td = TreeDecomposition { bags, tree, root: 0 };
        if !td.is_tree() {
            return Err(Error::Input("decomposition edges do not form a tree".into()));
        }
        Ok(td)
    }

    /// Single bag holding every vertex of a graph on `n` vertices.
    pub fn trivial(n: usize) -> Self {
        TreeDecomposition { bags: vec![(0..n).collect()], tree: vec![Vec::new()], root: 0 }
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest bag size minus one; zero for a decomposition without vertices.
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    /// Largest bag weight.
    pub fn weighted_width(&self, weight: &[usize]) -> usize {
        self.bags.iter().map(|b| b.iter().map(|&v| weight[v]).sum()).max().unwrap_or(0)
    }

    /// Tree edges `(a, b)`, `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, list) in self.tree.iter().enumerate() {
            out.extend(list.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    fn is_tree(&self) -> bool {
        let k = self.len();
        if k == 0 {
            return true;
        }
        let edge_count: usize = self.tree.iter().map(Vec::len).sum::<usize>() / 2;
        if edge_count != k - 1 || self.root >= k {
            return false;
        }
        let mut seen = vec![false; k];
        let mut queue = VecDeque::from([self.root]);
        seen[self.root] = true;
        let mut count = 1;
        while let Some(a) = queue.pop_front() {
            for &b in &self.tree[a] {
                if !seen[b] {
                    seen[b] = true;
                    count += 1;
                    queue.push_back(b);
                }
            }
        }
        count == k
    }

    /// Parent of every node when rooted at `root` (root maps to itself), and
    /// a BFS order starting at the root.
    pub fn rooted(&self) -> (Vec<usize>, Vec<usize>) {
        let k = self.len();
        let mut parent = vec![usize::MAX; k];
        let mut order = Vec::with_capacity(k);
        if k == 0 {
            return (parent, order);
        }
        parent[self.root] = self.root;
        order.push(self.root);
        let mut i = 0;
        while i < order.len() {
            let a = order[i];
            i += 1;
            for &b in &self.tree[a] {
                if parent[b] == usize::MAX {
                    parent[b] = a;
                    order.push(b);
                }
            }
        }
        (parent, order)
    }

    /// Checks vertex coverage, edge coverage and the connected-occurrence
    /// property against `g`, listing every witness of failure.
    pub fn validate(&self, g: &Graph) -> TdReport {
        let mut violations = Vec::new();
        if !self.is_tree() {
            violations.push(TdViolation::NotATree);
            return TdReport { violations };
        }
        let n = g.n();
        let mut occurrences = vec![Vec::new(); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    violations.push(TdViolation::VertexOutOfRange { vertex: v });
                } else {
                    occurrences[v].push(i);
                }
            }
        }
        for (v, occ) in occurrences.iter().enumerate() {
            if occ.is_empty() {
                violations.push(TdViolation::UncoveredVertex { vertex: v });
            }
        }
        for (u, v) in g.edges() {
            // both occurrence lists are sorted node ids
            let (a, b) = (&occurrences[u], &occurrences[v]);
            let (mut i, mut j) = (0, 0);
            let mut shared = false;
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        shared = true;
                        break;
                    }
                }
            }
            if !shared {
                violations.push(TdViolation::UncoveredEdge { u, v });
            }
        }
        // occurrence set of v is connected iff it has exactly one node whose
        // parent does not contain v
        let (parent, _) = self.rooted();
        let mut tops = vec![0usize; n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v < n && (parent[i] == i || self.bags[parent[i]].binary_search(&v).is_err()) {
                    tops[v] += 1;
                }
            }
        }
        for (v, &t) in tops.iter().enumerate() {
            if t > 1 {
                violations.push(TdViolation::DisconnectedOccurrence { vertex: v });
            }
        }
        TdReport { violations }
    }
}
