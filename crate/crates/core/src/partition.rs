//! Greedy partition into connected classes covered by few cliques, and the
//! weighted contraction of the classes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Partition of the vertex set into connected classes, each with a clique cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaPartition {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Seed vertex of each class.
    pub center_of: Vec<usize>,
    pub clique_cover: Vec<Vec<Vec<usize>>>,
}

/// Class-level graph with vertex weights `ceil(log2 |class|) + 1`.
#[derive(Clone, Debug)]
pub struct ContractedGraph {
    pub base: Graph,
    pub weight: Vec<usize>,
    pub class_size: Vec<usize>,
    /// For every contracted edge `(i, j)`, `i < j`, one original edge crossing it.
    pub witness: BTreeMap<(usize, usize), (usize, usize)>,
}

/// Configured bounds for partition validation.
#[derive(Clone, Copy, Debug)]
pub struct PartitionBounds {
    pub kappa: usize,
    pub delta: usize,
}

impl Default for PartitionBounds {
    fn default() -> Self {
        PartitionBounds { kappa: 6, delta: 40 }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PartitionReport {
    pub violations: Vec<String>,
    pub kappa_observed: usize,
    pub max_contraction_degree: usize,
    pub class_count: usize,
}

impl PartitionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn ceil_log2(x: usize) -> usize {
    assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// Vertex weight of a class with `size` members.
pub fn class_weight(size: usize) -> usize {
    ceil_log2(size) + 1
}

impl KappaPartition {
    /// Wraps explicit classes; the center of a class is its smallest member.
    /// No validation happens here, see [`validate_partition`].
    pub fn from_classes(g: &Graph, classes: Vec<Vec<usize>>) -> Self {
        let mut class_of = vec![usize::MAX; g.n()];
        let mut classes = classes;
        for (i, c) in classes.iter_mut().enumerate() {
            c.sort_unstable();
            for &v in c.iter() {
                if v < class_of.len() {
                    class_of[v] = i;
                }
            }
        }
        let center_of = classes.iter().map(|c| c.first().copied().unwrap_or(usize::MAX)).collect();
        let clique_cover = classes.iter().map(|c| cover_class_cliques(g, c)).collect();
        KappaPartition { classes, class_of, center_of, clique_cover }
    }

    /// Every vertex in its own class.
    pub fn singletons(g: &Graph) -> Self {
        Self::from_classes(g, (0..g.n()).map(|v| vec![v]).collect())
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Largest number of cliques used to cover one class.
    pub fn kappa_observed(&self) -> usize {
        self.clique_cover.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Star partition around a greedily chosen independent dominating set.
///
/// Vertices are processed by non-increasing degree (ties by smaller id). A
/// vertex becomes a seed iff none of its neighbors is a seed yet; every other
/// vertex joins its earliest-processed seed neighbor.
pub fn greedy_partition(g: &Graph) -> KappaPartition {
    let n = g.n();
    // bucket sort by degree, descending, stable in id
    let maxd = g.max_degree();
    let mut buckets = vec![Vec::new(); maxd + 1];
    for v in 0..n {
        buckets[g.degree(v)].push(v);
    }
    let order: Vec<usize> = buckets.into_iter().rev().flatten().collect();
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }

    let mut seed_class = vec![usize::MAX; n];
    let mut center_of = Vec::new();
    for &v in &order {
        if g.neighbors(v).iter().all(|&w| seed_class[w] == usize::MAX) {
            seed_class[v] = center_of.len();
            center_of.push(v);
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes = vec![Vec::new(); center_of.len()];
    for v in 0..n {
        let c = if seed_class[v] != usize::MAX {
            seed_class[v]
        } else {
            let s = g
                .neighbors(v)
                .iter()
                .filter(|&&w| seed_class[w] != usize::MAX)
                .min_by_key(|&&w| rank[w])
                .expect("non-seed vertex has a seed neighbor");
            seed_class[*s]
        };
        class_of[v] = c;
        classes[c].push(v);
    }
    let clique_cover = classes.iter().map(|c| cover_class_cliques(g, c)).collect();
    KappaPartition { classes, class_of, center_of, clique_cover }
}

/// Greedy clique cover: grow a maximal clique from the smallest uncovered
/// vertex, adding uncovered candidates in id order.
pub fn cover_class_cliques(g: &Graph, class: &[usize]) -> Vec<Vec<usize>> {
    let mut rest: Vec<usize> = class.to_vec();
    rest.sort_unstable();
    rest.dedup();
    let mut cover = Vec::new();
    while !rest.is_empty() {
        let mut clique = vec![rest[0]];
        for &c in &rest[1..] {
            if clique.iter().all(|&u| g.has_edge(u, c)) {
                clique.push(c);
            }
        }
        rest.retain(|v| !clique.contains(v));
        cover.push(clique);
    }
    cover
}

fn structural_violations(g: &Graph, p: &KappaPartition) -> Vec<String> {
    let mut out = Vec::new();
    let n = g.n();
    let mut owner = vec![usize::MAX; n];
    for (i, class) in p.classes.iter().enumerate() {
        if class.is_empty() {
            out.push(format!("class {i} is empty"));
        }
        for &v in class {
            if v >= n {
                out.push(format!("class {i} holds out-of-range vertex {v}"));
            } else if owner[v] != usize::MAX {
                out.push(format!("vertex {v} lies in classes {} and {i}", owner[v]));
            } else {
                owner[v] = i;
            }
        }
    }
    for v in 0..n {
        if owner[v] == usize::MAX {
            out.push(format!("vertex {v} is not covered"));
        } else if p.class_of.get(v) != Some(&owner[v]) {
            out.push(format!("class_of[{v}] disagrees with the class lists"));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (i, class) in p.classes.iter().enumerate() {
        let (sub, _, _) = g.induced_subgraph(class);
        if sub.components().len() > 1 {
            out.push(format!("class {i} is disconnected"));
        }
    }
    out
}

/// Contracts every class to one vertex, dropping loops and parallel edges.
pub fn contract(g: &Graph, p: &KappaPartition) -> Result<ContractedGraph> {
    let bad = structural_violations(g, p);
    if !bad.is_empty() {
        return Err(Error::Validation(bad.join("; ")));
    }
    let t = p.len();
    let mut witness = BTreeMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (p.class_of[u], p.class_of[v]);
        if a != b {
            let key = (a.min(b), a.max(b));
            let w = if a < b { (u, v) } else { (v, u) };
            witness.entry(key).or_insert(w);
        }
    }
    let edges: Vec<(usize, usize)> = witness.keys().copied().collect();
    let base = Graph::from_edge_list(t, &edges)?;
    let class_size: Vec<usize> = p.classes.iter().map(Vec::len).collect();
    let weight = class_size.iter().map(|&s| class_weight(s)).collect();
    Ok(ContractedGraph { base, weight, class_size, witness })
}

/// Checks every structural property of a partition and its contraction.
pub fn validate_partition(g: &Graph, p: &KappaPartition, bounds: PartitionBounds) -> PartitionReport {
    let mut violations = structural_violations(g, p);
    let structural_ok = violations.is_empty();
    let kappa_observed = p.kappa_observed();
    let mut max_contraction_degree = 0;
    if p.clique_cover.len() != p.len() {
        violations.push("clique cover count differs from class count".into());
    }
    for (i, (class, cover)) in p.classes.iter().zip(&p.clique_cover).enumerate() {
        let mut seen: Vec<usize> = cover.iter().flatten().copied().collect();
        seen.sort_unstable();
        let mut members = class.clone();
        members.sort_unstable();
        if seen != members {
            violations.push(format!("clique cover of class {i} does not partition it"));
        }
        for (j, clique) in cover.iter().enumerate() {
            for (a, &u) in clique.iter().enumerate() {
                if clique[a + 1..].iter().any(|&v| u >= g.n() || v >= g.n() || !g.has_edge(u, v)) {
                    violations.push(format!("clique {j} of class {i} is not a clique"));
                    break;
                }
            }
        }
    }
    if kappa_observed > bounds.kappa {
        violations.push(format!("kappa observed {kappa_observed} exceeds bound {}", bounds.kappa));
    }
    if structural_ok {
        match contract(g, p) {
            Ok(cg) => {
                max_contraction_degree = cg.base.max_degree();
                if max_contraction_degree > bounds.delta {
                    violations.push(format!(
                        "contraction degree {max_contraction_degree} exceeds bound {}",
                        bounds.delta
                    ));
                }
                for (i, class) in p.classes.iter().enumerate() {
                    // smallest w with 2^(w-1) >= |class|
                    let mut w = 1;
                    while (1usize << (w - 1)) < class.len() {
                        w += 1;
                    }
                    if cg.weight[i] != w {
                        violations.push(format!("class {i} weight {} should be {w}", cg.weight[i]));
                    }
                }
                for (&(a, b), &(u, v)) in &cg.witness {
                    if !g.has_edge(u, v) || p.class_of[u] != a || p.class_of[v] != b {
                        violations.push(format!("bad witness for contracted edge ({a},{b})"));
                    }
                }
            }
            Err(e) => violations.push(e.to_string()),
        }
    }
    PartitionReport { violations, kappa_observed, max_contraction_degree, class_count: p.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(class_weight(1), 1);
        assert_eq!(class_weight(2), 2);
        assert_eq!(class_weight(3), 3);
        assert_eq!(class_weight(4), 3);
        assert_eq!(class_weight(5), 4);
        assert_eq!(class_weight(8), 4);
        assert_eq!(class_weight(9), 5);
    }

    #[test]
    fn greedy_on_clique_and_edgeless() {
        let p = greedy_partition(&complete(5));
        assert_eq!(p.classes, vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(p.center_of, vec![0]);
        assert_eq!(p.clique_cover, vec![vec![vec![0, 1, 2, 3, 4]]]);
        let p = greedy_partition(&Graph::empty(4));
        assert_eq!(p.classes, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn greedy_on_c6() {
        // seeds 0, 2, 4; vertex 5 sees seeds 4 and 0 and joins 0, which was processed first
        let g = cycle(6);
        let p = greedy_partition(&g);
        assert_eq!(p.center_of, vec![0, 2, 4]);
        assert_eq!(p.classes, vec![vec![0, 1, 5], vec![2, 3], vec![4]]);
        let cg = contract(&g, &p).unwrap();
        assert_eq!(cg.base, cycle(3));
        assert_eq!(cg.weight, vec![3, 2, 1]);
    }

    #[test]
    fn clique_covers() {
        let k4 = complete(4);
        assert_eq!(cover_class_cliques(&k4, &[3, 1, 0, 2]), vec![vec![0, 1, 2, 3]]);
        let p3 = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(cover_class_cliques(&p3, &[0, 1, 2]), vec![vec![0, 1], vec![2]]);
        assert_eq!(cover_class_cliques(&p3, &[1]), vec![vec![1]]);
    }

    #[test]
    fn contract_examples() {
        let g = cycle(6);
        let single = KappaPartition::singletons(&g);
        let cg = contract(&g, &single).unwrap();
        assert_eq!(cg.base, g);
        assert!(cg.weight.iter().all(|&w| w == 1));

        let p = KappaPartition::from_classes(&g, vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        let cg = contract(&g, &p).unwrap();
        assert_eq!(cg.base, cycle(3));
        assert_eq!(cg.weight, vec![2, 2, 2]);
        assert_eq!(cg.witness[&(0, 1)], (1, 2));
        assert_eq!(cg.witness[&(0, 2)], (0, 5));

        let k5 = complete(5);
        let cg = contract(&k5, &greedy_partition(&k5)).unwrap();
        assert_eq!(cg.weight, vec![4]);
    }

    #[test]
    fn contract_rejects_bad_partitions() {
        let g = cycle(6);
        let overlap = KappaPartition::from_classes(&g, vec![vec![0, 1, 2], vec![2, 3, 4, 5]]);
        assert!(matches!(contract(&g, &overlap), Err(Error::Validation(_))));
        let missing = KappaPartition::from_classes(&g, vec![vec![0, 1, 2]]);
        assert!(contract(&g, &missing).is_err());
        let split = KappaPartition::from_classes(&g, vec![vec![0, 3], vec![1, 2], vec![4, 5]]);
        assert!(contract(&g, &split).is_err());
    }

    #[test]
    fn validation_reports() {
        let g = cycle(6);
        let split = KappaPartition::from_classes(&g, vec![vec![0, 3], vec![1, 2], vec![4, 5]]);
        let r = validate_partition(&g, &split, PartitionBounds::default());
        assert!(r.violations.iter().any(|v| v.contains("disconnected")));

        let r = validate_partition(&g, &KappaPartition::singletons(&g), PartitionBounds::default());
        assert!(r.is_valid());
        assert_eq!(r.kappa_observed, 1);
        assert_eq!(r.class_count, 6);
        assert_eq!(r.max_contraction_degree, 2);

        let mut broken = greedy_partition(&g);
        broken.clique_cover[0] = vec![vec![0, 1, 5]];
        let r = validate_partition(&g, &broken, PartitionBounds::default());
        assert!(r.violations.iter().any(|v| v.contains("not a clique")));

        let r = validate_partition(&g, &greedy_partition(&g), PartitionBounds { kappa: 1, delta: 1 });
        assert_eq!(r.violations.len(), 2);
    }
}
