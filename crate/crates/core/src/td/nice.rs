use super::TreeDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition. Children always have smaller indices than
/// their parent, so iterating `nodes` in order is a post-order traversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceDecomposition {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_bag_size(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0)
    }

    /// Plain decomposition with the same bags and tree, for validation.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let mut tree = vec![Vec::new(); self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                tree[i].push(c);
                tree[c].push(i);
            }
        }
        for list in &mut tree {
            list.sort_unstable();
        }
        TreeDecomposition {
            bags: self.nodes.iter().map(|n| n.bag.clone()).collect(),
            tree,
            root: self.root,
        }
    }

    /// Checks the local shape rules of every node and that every vertex is
    /// forgotten exactly once. Returns a description of the first problem.
    pub fn check_shape(&self) -> Result<(), String> {
        if self.nodes.is_empty() || self.root != self.nodes.len() - 1 {
            return Err("root must be the last node".into());
        }
        if !self.nodes[self.root].bag.is_empty() {
            return Err("root bag must be empty".into());
        }
        let mut forgotten = std::collections::BTreeMap::<usize, usize>::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.iter().any(|&c| c >= i) {
                return Err(format!("node {i} has a child with a larger index"));
            }
            let child_bag = |j: usize| &self.nodes[node.children[j]].bag;
            match node.kind {
                NiceKind::Leaf => {
                    if !node.children.is_empty() || !node.bag.is_empty() {
                        return Err(format!("leaf {i} must be empty and childless"));
                    }
                }
                NiceKind::Introduce(v) => {
                    if node.children.len() != 1 {
                        return Err(format!("introduce {i} needs one child"));
                    }
                    let mut expect = child_bag(0).clone();
                    if expect.contains(&v) {
                        return Err(format!("introduce {i} re-adds {v}"));
                    }
                    expect.push(v);
                    expect.sort_unstable();
                    if expect != node.bag {
                        return Err(format!("introduce {i} bag mismatch"));
                    }
                }
                NiceKind::Forget(v) => {
                    if node.children.len() != 1 {
                        return Err(format!("forget {i} needs one child"));
                    }
                    let mut expect = child_bag(0).clone();
                    let before = expect.len();
                    expect.retain(|&x| x != v);
                    if expect.len() + 1 != before || expect != node.bag {
                        return Err(format!("forget {i} bag mismatch"));
                    }
                    *forgotten.entry(v).or_default() += 1;
                }
                NiceKind::Join => {
                    if node.children.len() != 2 || child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return Err(format!("join {i} needs two children with its bag"));
                    }
                }
            }
        }
        let mut introduced: Vec<usize> = self
            .nodes
            .iter()
            .filter_map(|n| if let NiceKind::Introduce(v) = n.kind { Some(v) } else { None })
            .collect();
        introduced.sort_unstable();
        introduced.dedup();
        if introduced != forgotten.keys().copied().collect::<Vec<_>>() {
            return Err("introduced and forgotten vertex sets differ".into());
        }
        if let Some((v, _)) = forgotten.iter().find(|(_, &c)| c != 1) {
            return Err(format!("vertex {v} forgotten more than once"));
        }
        Ok(())
    }
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Extends the chain ending at `top` (bag `from`) until its bag is `to`:
    /// forgets first, then introduces, both in increasing id order.
    fn transition(&mut self, mut top: usize, to: &[usize]) -> usize {
        let from = self.nodes[top].bag.clone();
        let mut bag = from.clone();
        for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            bag.retain(|&x| x != v);
            top = self.push(NiceKind::Forget(v), bag.clone(), vec![top]);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            let at = bag.binary_search(&v).unwrap_err();
            bag.insert(at, v);
            top = self.push(NiceKind::Introduce(v), bag.clone(), vec![top]);
        }
        top
    }
}

/// Converts a decomposition into nice form rooted at an empty bag.
pub fn make_nice(td: &TreeDecomposition) -> NiceDecomposition {
    let mut b = Builder { nodes: Vec::new() };
    if td.is_empty() {
        let root = b.push(NiceKind::Leaf, Vec::new(), Vec::new());
        return NiceDecomposition { nodes: b.nodes, root };
    }
    let (parent, order) = td.rooted();
    let mut children = vec![Vec::new(); td.len()];
    for &a in order.iter().skip(1) {
        children[parent[a]].push(a);
    }
    // top nice node whose bag equals the bag of each processed td node
    let mut top = vec![usize::MAX; td.len()];
    for &a in order.iter().rev() {
        let bag = &td.bags[a];
        let mut chains = children[a].iter().map(|&c| top[c]).collect::<Vec<_>>().into_iter();
        let first = match chains.next() {
            Some(c) => b.transition(c, bag),
            None => {
                let leaf = b.push(NiceKind::Leaf, Vec::new(), Vec::new());
                b.transition(leaf, bag)
            }
        };
        let mut acc = first;
        for c in chains {
            let other = b.transition(c, bag);
            acc = b.push(NiceKind::Join, bag.clone(), vec![acc, other]);
        }
        top[a] = acc;
    }
    let root = b.transition(top[td.root], &[]);
    NiceDecomposition { nodes: b.nodes, root }
}
