use std::ops::Range;

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::ContractedGraph;

/// Unweighted graph in which every contracted vertex `v` became a clique of
/// `weight(v)` vertices joined completely to the cliques of its neighbors.
#[derive(Clone, Debug)]
pub struct BlowupGraph {
    pub graph: Graph,
    pub member_of: Vec<usize>,
    /// Blown vertices of each contracted vertex, as a contiguous id range.
    pub blocks: Vec<Range<usize>>,
}

pub fn blowup(cg: &ContractedGraph) -> BlowupGraph {
    let t = cg.base.n();
    let mut blocks = Vec::with_capacity(t);
    let mut member_of = Vec::new();
    for v in 0..t {
        let start = member_of.len();
        member_of.extend(std::iter::repeat(v).take(cg.weight[v]));
        blocks.push(start..member_of.len());
    }
    let adj = (0..member_of.len())
        .map(|b| {
            let v = member_of[b];
            // neighbor blocks and own block, already in increasing id order
            let mut list: Vec<usize> = Vec::new();
            let mut own_done = false;
            for &u in cg.base.neighbors(v) {
                if !own_done && u > v {
                    list.extend(blocks[v].clone().filter(|&x| x != b));
                    own_done = true;
                }
                list.extend(blocks[u].clone());
            }
            if !own_done {
                list.extend(blocks[v].clone().filter(|&x| x != b));
            }
            list
        })
        .collect();
    BlowupGraph { graph: Graph::from_sorted_adjacency(adj), member_of, blocks }
}

/// Carries a decomposition of the blowup back to the contracted graph: a
/// contracted vertex enters a bag iff the bag holds its entire clique.
pub fn project(td_b: &TreeDecomposition, bg: &BlowupGraph, cg: &ContractedGraph) -> Result<TreeDecomposition> {
    let t = bg.blocks.len();
    let mut count = vec![0usize; t];
    let bags = td_b
        .bags
        .iter()
        .map(|bag| {
            for &b in bag {
                count[bg.member_of[b]] += 1;
            }
            let mut out: Vec<usize> =
                bag.iter().map(|&b| bg.member_of[b]).filter(|&v| count[v] == bg.blocks[v].len()).collect();
            out.dedup();
            for &b in bag {
                count[bg.member_of[b]] = 0;
            }
            out
        })
        .collect();
    let td = TreeDecomposition { bags, tree: td_b.tree.clone(), root: td_b.root };
    let report = td.validate(&cg.base);
    if !report.is_valid() {
        return Err(Error::Internal(format!(
            "projected decomposition is invalid: {:?}",
            report.violations
        )));
    }
    Ok(td)
}
