//! Brute-force ground truth for tiny graphs. Deliberately simple: these are
//! the references every solver path is checked against.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug)]
pub struct OracleBudget {
    pub max_n_subsets: usize,
    pub max_n_treewidth: usize,
    pub time_cap: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_n_subsets: 20, max_n_treewidth: 12, time_cap: None }
    }
}

fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u))).collect()
}

/// Whether the subgraph induced by `keep` is acyclic, via union-find.
fn induces_forest(adj: &[u64], keep: u64) -> bool {
    let n = adj.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for u in 0..n {
        if keep & (1 << u) == 0 {
            continue;
        }
        // edges to larger kept neighbors
        let mut up = adj[u] & keep & !((1u64 << u) | ((1u64 << u) - 1));
        while up != 0 {
            let v = up.trailing_zeros() as usize;
            up &= up - 1;
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
    }
    true
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum feedback vertex set by trying deletion sets of growing size. The
/// witness is the lexicographically first minimum set.
pub fn min_fvs_bruteforce(g: &Graph, budget: &OracleBudget) -> Result<(usize, Vec<usize>)> {
    let n = g.n();
    if n > budget.max_n_subsets || n > 63 {
        return Err(Error::Resource(format!(
            "oracle refuses n={n} (limit {})",
            budget.max_n_subsets.min(63)
        )));
    }
    let adj = masks(g);
    let all = (1u64 << n) - 1;
    let start = Instant::now();
    let mut checked = 0u64;
    for s in 0..=n {
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let del = idx.iter().fold(0u64, |m, &v| m | (1 << v));
            if induces_forest(&adj, all & !del) {
                return Ok((s, idx));
            }
            checked += 1;
            if checked % 4096 == 0 {
                if let Some(cap) = budget.time_cap {
                    if start.elapsed() > cap {
                        return Err(Error::Resource("oracle time cap exceeded".into()));
                    }
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    unreachable!("deleting every vertex leaves a forest")
}

pub fn decide_fvs(g: &Graph, k: usize, budget: &OracleBudget) -> Result<bool> {
    Ok(min_fvs_bruteforce(g, budget)?.0 <= k)
}

/// Exact treewidth by dynamic programming over vertex subsets:
/// `TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|)` where `Q(S, v)`
/// are the vertices outside `S + v` reachable from `v` through `S`.
pub fn exact_treewidth(g: &Graph, budget: &OracleBudget) -> Result<usize> {
    let n = g.n();
    if n > budget.max_n_treewidth || n > 24 {
        return Err(Error::Resource(format!(
            "treewidth oracle refuses n={n} (limit {})",
            budget.max_n_treewidth.min(24)
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    let adj = masks(g);
    let full = (1u64 << n) - 1;
    let q = |s: u64, v: usize| -> u32 {
        let mut reach = 1u64 << v;
        let mut frontier = reach;
        let mut outside = 0u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let x = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[x];
            }
            next &= !reach;
            outside |= next & !s;
            let inner = next & s;
            reach |= next;
            frontier = inner;
        }
        (outside & !(1u64 << v)).count_ones()
    };
    let mut tw = vec![i32::MAX; 1usize << n];
    tw[0] = -1;
    for s in 1..=full {
        let mut best = i32::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let cand = tw[rest as usize].max(q(rest, v) as i32);
            best = best.min(cand);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize].max(0) as usize)
}
