use std::collections::{BTreeSet, HashMap, VecDeque};

use super::TreeDecomposition;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heuristic {
    MinDegree,
    MinFill,
}

/// How hard `decompose_unweighted` tries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Effort {
    MinDegree,
    MinFill,
    /// Better of both heuristics, refined by exact branch and bound on at most
    /// [`EXACT_LIMIT`] vertices.
    Best,
}

pub const EXACT_LIMIT: usize = 30;
const EXACT_NODE_BUDGET: usize = 200_000;

/// Dense bitset adjacency with in-place elimination.
struct EliminationGraph {
    words: usize,
    adj: Vec<Vec<u64>>,
    alive: Vec<u64>,
}

impl EliminationGraph {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![vec![0u64; words]; n];
        for (u, v) in g.edges() {
            adj[u][v / 64] |= 1 << (v % 64);
            adj[v][u / 64] |= 1 << (u % 64);
        }
        let mut alive = vec![0u64; words];
        for v in 0..n {
            alive[v / 64] |= 1 << (v % 64);
        }
        EliminationGraph { words, adj, alive }
    }

    fn live_neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for w in 0..self.words {
            let mut bits = self.adj[v][w] & self.alive[w];
            while bits != 0 {
                out.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    fn degree(&self, v: usize) -> usize {
        (0..self.words).map(|w| (self.adj[v][w] & self.alive[w]).count_ones() as usize).sum()
    }

    fn fill(&self, v: usize) -> usize {
        let nbrs = self.live_neighbors(v);
        let mut missing = 0;
        for &u in &nbrs {
            // neighbors of v that u does not see, u itself excluded
            let c: u32 = (0..self.words)
                .map(|w| (self.adj[v][w] & self.alive[w] & !self.adj[u][w]).count_ones())
                .sum();
            missing += c as usize - 1;
        }
        missing / 2
    }

    /// Eliminates `v`, returning its live neighborhood before removal.
    fn eliminate(&mut self, v: usize) -> Vec<usize> {
        let nbrs = self.live_neighbors(v);
        for &a in &nbrs {
            for &b in &nbrs {
                if a != b {
                    self.adj[a][b / 64] |= 1 << (b % 64);
                }
            }
        }
        self.alive[v / 64] &= !(1 << (v % 64));
        nbrs
    }
}

/// Greedy elimination order; ties go to the smallest id.
pub fn elimination_order(g: &Graph, heuristic: Heuristic) -> Vec<usize> {
    let n = g.n();
    let mut eg = EliminationGraph::new(g);
    let mut key: Vec<usize> = match heuristic {
        Heuristic::MinDegree => (0..n).map(|v| g.degree(v)).collect(),
        Heuristic::MinFill => (0..n).map(|v| eg.fill(v)).collect(),
    };
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut stamp = vec![usize::MAX; n];
    for step in 0..n {
        let v = (0..n).filter(|&v| !done[v]).min_by_key(|&v| (key[v], v)).unwrap();
        done[v] = true;
        order.push(v);
        let nbrs = eg.eliminate(v);
        match heuristic {
            Heuristic::MinDegree => {
                for &u in &nbrs {
                    key[u] = eg.degree(u);
                }
            }
            Heuristic::MinFill => {
                // fill can change for the neighborhood and its neighbors
                let mut dirty = Vec::new();
                for &u in &nbrs {
                    if stamp[u] != step {
                        stamp[u] = step;
                        dirty.push(u);
                    }
                    for x in eg.live_neighbors(u) {
                        if stamp[x] != step {
                            stamp[x] = step;
                            dirty.push(x);
                        }
                    }
                }
                for u in dirty {
                    key[u] = eg.fill(u);
                }
            }
        }
    }
    order
}

/// Decomposition induced by an elimination order: one bag per vertex holding
/// it and its later neighbors in the filled graph. Neighboring bags that are
/// nested get merged; the result is rooted at node 0.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::empty();
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut eg = EliminationGraph::new(g);
    // node i belongs to order[i]
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        let nbrs = eg.eliminate(v);
        if let Some(&p) = nbrs.iter().min_by_key(|&&u| pos[u]) {
            parent[i] = pos[p];
        }
        let mut bag = nbrs;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    // join the roots of the elimination forest into one tree
    let roots: Vec<usize> = (0..n).filter(|&i| parent[i] == usize::MAX).collect();
    for w in roots.windows(2) {
        parent[w[0]] = w[1];
    }
    let root = *roots.last().unwrap();

    let mut tree: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        if parent[i] != usize::MAX {
            tree[i].insert(parent[i]);
            tree[parent[i]].insert(i);
        }
    }
    contract_nested(bags, tree, root)
}

/// Contracts every tree edge whose bags are nested, keeping the larger bag,
/// then renumbers so the root is node 0 and the rest follow in BFS order.
fn contract_nested(bags: Vec<Vec<usize>>, mut tree: Vec<BTreeSet<usize>>, mut root: usize) -> TreeDecomposition {
    let k = bags.len();
    let mut alive = vec![true; k];
    let subset = |a: &[usize], b: &[usize]| a.iter().all(|v| b.binary_search(v).is_ok());
    let mut queue: VecDeque<(usize, usize)> =
        (0..k).flat_map(|a| tree[a].iter().filter(move |&&b| b > a).map(move |&b| (a, b))).collect();
    while let Some((a, b)) = queue.pop_front() {
        if !alive[a] || !alive[b] || !tree[a].contains(&b) {
            continue;
        }
        let (small, large) = if subset(&bags[a], &bags[b]) {
            (a, b)
        } else if subset(&bags[b], &bags[a]) {
            (b, a)
        } else {
            continue;
        };
        alive[small] = false;
        let nbrs = std::mem::take(&mut tree[small]);
        tree[large].remove(&small);
        for x in nbrs {
            if x != large {
                tree[x].remove(&small);
                tree[x].insert(large);
                tree[large].insert(x);
                queue.push_back((x, large));
            }
        }
        if root == small {
            root = large;
        }
    }
    let mut new_id = vec![usize::MAX; k];
    let mut order = vec![root];
    new_id[root] = 0;
    let mut i = 0;
    while i < order.len() {
        let a = order[i];
        i += 1;
        for &b in &tree[a] {
            if new_id[b] == usize::MAX {
                new_id[b] = order.len();
                order.push(b);
            }
        }
    }
    debug_assert_eq!(order.len(), alive.iter().filter(|&&x| x).count());
    let new_bags = order.iter().map(|&a| bags[a].clone()).collect();
    let new_tree = order.iter().map(|&a| tree[a].iter().map(|&b| new_id[b]).collect::<BTreeSet<_>>().into_iter().collect()).collect();
    TreeDecomposition { bags: new_bags, tree: new_tree, root: 0 }
}

/// Width of the decomposition induced by an elimination order.
fn order_width(g: &Graph, order: &[usize]) -> usize {
    let mut eg = EliminationGraph::new(g);
    order.iter().map(|&v| eg.eliminate(v).len()).max().unwrap_or(0)
}

/// Exact treewidth by depth-first branch and bound over elimination orders,
/// for graphs with at most 64 vertices. Returns `None` when the node budget
/// runs out before optimality is proven.
pub fn exact_elimination(g: &Graph, node_budget: usize) -> Option<(usize, Vec<usize>)> {
    let n = g.n();
    assert!(n <= 64, "exact elimination supports at most 64 vertices");
    if n == 0 {
        return Some((0, Vec::new()));
    }
    let adj: Vec<u64> =
        (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u))).collect();
    let start = elimination_order(g, Heuristic::MinFill);
    let ub = order_width(g, &start);
    let mut search = BranchAndBound {
        n,
        best: ub,
        best_order: start,
        seen: HashMap::new(),
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut prefix = Vec::with_capacity(n);
    search.dfs(&adj, full, 0, &mut prefix);
    if search.exhausted {
        None
    } else {
        Some((search.best, search.best_order))
    }
}

struct BranchAndBound {
    n: usize,
    best: usize,
    best_order: Vec<usize>,
    /// remaining-set -> smallest width with which it was reached
    seen: HashMap<u64, usize>,
    nodes: usize,
    budget: usize,
    exhausted: bool,
}

impl BranchAndBound {
    fn dfs(&mut self, adj: &[u64], remaining: u64, width: usize, prefix: &mut Vec<usize>) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let left = remaining.count_ones() as usize;
        if left == 0 || left <= width + 1 {
            // any order finishes within the current width
            let w = width.max(left.saturating_sub(1));
            if w < self.best {
                self.best = w;
                let mut order = prefix.clone();
                let mut rest = remaining;
                while rest != 0 {
                    order.push(rest.trailing_zeros() as usize);
                    rest &= rest - 1;
                }
                self.best_order = order;
            }
            return;
        }
        match self.seen.get(&remaining) {
            Some(&w) if w <= width => return,
            _ => {
                self.seen.insert(remaining, width);
            }
        }
        let live = |v: usize| adj[v] & remaining;
        let mut min_deg = usize::MAX;
        let mut simplicial = None;
        let mut bits = remaining;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let nv = live(v);
            let d = nv.count_ones() as usize;
            min_deg = min_deg.min(d);
            if simplicial.is_none() {
                let mut nb = nv;
                let mut clique = true;
                while nb != 0 {
                    let u = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    if (nv & !(1 << u)) & !adj[u] != 0 {
                        clique = false;
                        break;
                    }
                }
                if clique {
                    simplicial = Some(v);
                }
            }
        }
        if width.max(min_deg) >= self.best {
            return;
        }
        let candidates: Vec<usize> = match simplicial {
            Some(v) => vec![v],
            None => {
                let mut c = Vec::with_capacity(self.n);
                let mut bits = remaining;
                while bits != 0 {
                    c.push(bits.trailing_zeros() as usize);
                    bits &= bits - 1;
                }
                c.sort_by_key(|&v| (live(v).count_ones(), v));
                c
            }
        };
        for v in candidates {
            let nv = live(v);
            let d = nv.count_ones() as usize;
            let w = width.max(d);
            if w >= self.best {
                continue;
            }
            let mut next = adj.to_vec();
            let mut nb = nv;
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                next[u] |= nv & !(1 << u);
            }
            prefix.push(v);
            self.dfs(&next, remaining & !(1 << v), w, prefix);
            prefix.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

/// Tree decomposition of an unweighted graph.
pub fn decompose_unweighted(g: &Graph, effort: Effort) -> TreeDecomposition {
    let order = match effort {
        Effort::MinDegree => elimination_order(g, Heuristic::MinDegree),
        Effort::MinFill => elimination_order(g, Heuristic::MinFill),
        Effort::Best => {
            let a = elimination_order(g, Heuristic::MinDegree);
            let b = elimination_order(g, Heuristic::MinFill);
            let (wa, wb) = (order_width(g, &a), order_width(g, &b));
            let (mut order, mut w) = if wb <= wa { (b, wb) } else { (a, wa) };
            if g.n() <= EXACT_LIMIT {
                if let Some((we, oe)) = exact_elimination(g, EXACT_NODE_BUDGET) {
                    if we < w {
                        order = oe;
                        w = we;
                    }
                }
            }
            debug_assert_eq!(order_width(g, &order), w);
            order
        }
    };
    decomposition_from_order(g, &order)
}
