//! Maximum induced forest over a nice decomposition of the class graph.
//!
//! A row fixes, for every class in the bag, which local selection survives
//! (the signature), a partition of the surviving bag vertices into the
//! components of the partial forest, and a cost. Edges are added when the
//! first of their two endpoint classes is forgotten; at that moment the other
//! class is still in the bag, so every edge is handled exactly once.
//!
//! Naive mode rejects any edge or join that closes a cycle and keeps every
//! distinct partition.
//!
//! Rank mode adds a root element to every universe. At forget time each
//! dropped vertex may take a marker edge to the root, and a component may
//! only leave the bag once it reaches another bag vertex or the root. A
//! forest plus one marker per component is exactly a tree through the root,
//! so the final condition is connectivity, and tables are shrunk with
//! [`super::rank::representative_indices`] after every node. The cost tracks
//! `edges + markers - kept vertices` ahead of deletions; for an acyclic row
//! that equals one minus its block count, which is what makes the cheapest
//! representative also the one that keeps the combined graph a tree.

use std::collections::{BTreeMap, HashMap};

use indexmap::map::Entry;
use indexmap::IndexMap;

use super::rank::{representative_indices, Cost, Partition};
use super::selections::local_selections;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::KappaPartition;
use crate::td::{NiceDecomposition, NiceKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpMode {
    Naive,
    Rank,
}

#[derive(Clone, Copy, Debug)]
pub struct DpLimits {
    /// Abort with a resource error once a single node holds more rows.
    pub max_rows: usize,
}

impl Default for DpLimits {
    fn default() -> Self {
        DpLimits { max_rows: 4_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Back {
    Leaf,
    Introduce(u32),
    Forget(u32),
    Join(u32, u32),
}

#[derive(Clone, Debug)]
struct Row {
    sig: Vec<u16>,
    part: Partition,
    cost: Cost,
    back: Back,
}

/// Tables of a finished run, kept for reconstruction.
#[derive(Clone, Debug)]
pub struct DpRun {
    tables: Vec<Vec<Row>>,
    best: usize,
    pub mode: DpMode,
    /// Size of a maximum induced forest.
    pub max_forest: usize,
    pub min_deleted: usize,
    pub peak_rows: usize,
    pub total_rows: usize,
}

struct Ctx<'a> {
    g: &'a Graph,
    p: &'a KappaPartition,
    selections: Vec<Vec<Vec<usize>>>,
    offset: usize,
    mode: DpMode,
    /// scratch: universe index of a kept vertex, or u32::MAX
    slot: Vec<u32>,
}

impl Ctx<'_> {
    fn kept(&self, bag: &[usize], sig: &[u16]) -> Vec<usize> {
        bag.iter().zip(sig).flat_map(|(&c, &s)| self.selections[c][s as usize].iter().copied()).collect()
    }

    /// Range of the universe occupied by the selection of `bag[pos]`.
    fn range_of(&self, bag: &[usize], sig: &[u16], pos: usize) -> std::ops::Range<usize> {
        let start = self.offset
            + bag[..pos].iter().zip(sig).map(|(&c, &s)| self.selections[c][s as usize].len()).sum::<usize>();
        start..start + self.selections[bag[pos]][sig[pos] as usize].len()
    }

    fn bag_cost(&self, bag: &[usize], sig: &[u16]) -> Cost {
        let mut kept = 0usize;
        let mut deleted = 0usize;
        for (&c, &s) in bag.iter().zip(sig) {
            let k = self.selections[c][s as usize].len();
            kept += k;
            deleted += self.p.classes[c].len() - k;
        }
        Cost { excess: self.excess(-(kept as i32)), deleted: deleted as u32 }
    }

    fn excess(&self, x: i32) -> i32 {
        match self.mode {
            DpMode::Naive => 0,
            DpMode::Rank => x,
        }
    }
}

/// Accumulates rows keeping the cheapest per (signature, partition), in
/// first-insertion order.
#[derive(Default)]
struct TableBuilder {
    rows: IndexMap<(Vec<u16>, Partition), (Cost, Back)>,
}

impl TableBuilder {
    fn offer(&mut self, sig: Vec<u16>, part: Partition, cost: Cost, back: Back) {
        match self.rows.entry((sig, part)) {
            Entry::Occupied(mut e) => {
                if cost < e.get().0 {
                    *e.get_mut() = (cost, back);
                }
            }
            Entry::Vacant(e) => {
                e.insert((cost, back));
            }
        }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    fn finish(self) -> Vec<Row> {
        self.rows.into_iter().map(|((sig, part), (cost, back))| Row { sig, part, cost, back }).collect()
    }
}

fn reduce(rows: Vec<Row>) -> Vec<Row> {
    let mut groups: BTreeMap<&[u16], Vec<usize>> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        groups.entry(&r.sig).or_default().push(i);
    }
    let mut keep = Vec::with_capacity(rows.len());
    for idx in groups.values() {
        let view: Vec<(&Partition, Cost)> = idx.iter().map(|&i| (&rows[i].part, rows[i].cost)).collect();
        keep.extend(representative_indices(&view).into_iter().map(|k| idx[k]));
    }
    keep.sort_unstable();
    let mut flags = vec![false; rows.len()];
    for i in keep {
        flags[i] = true;
    }
    rows.into_iter().zip(flags).filter_map(|(r, f)| f.then_some(r)).collect()
}

/// Number of edges of `g` handled at the forget nodes of `nd`. Equals `m`
/// exactly when the decomposition accounts for every edge once.
pub fn edge_accounting(nd: &NiceDecomposition, g: &Graph, p: &KappaPartition) -> usize {
    let mut total = 0;
    for node in &nd.nodes {
        if let NiceKind::Forget(v) = node.kind {
            let child = &nd.nodes[node.children[0]].bag;
            for &x in &p.classes[v] {
                for &y in g.neighbors(x) {
                    let cy = p.class_of[y];
                    if cy == v {
                        total += usize::from(x < y);
                    } else if child.binary_search(&cy).is_ok() {
                        total += 1;
                    }
                }
            }
        }
    }
    total
}

fn check_consistency(nd: &NiceDecomposition, g: &Graph, p: &KappaPartition) -> Result<()> {
    nd.check_shape().map_err(|e| Error::Internal(format!("nice decomposition: {e}")))?;
    let mut forgotten = vec![false; p.len()];
    for node in &nd.nodes {
        if node.bag.iter().any(|&c| c >= p.len()) {
            return Err(Error::Internal("decomposition mentions an unknown class".into()));
        }
        if let NiceKind::Forget(v) = node.kind {
            forgotten[v] = true;
        }
    }
    if let Some(c) = forgotten.iter().position(|f| !f) {
        return Err(Error::Internal(format!("class {c} never appears in the decomposition")));
    }
    let handled = edge_accounting(nd, g, p);
    if handled != g.m() {
        return Err(Error::Internal(format!("decomposition accounts for {handled} of {} edges", g.m())));
    }
    Ok(())
}

/// Runs the dynamic program. `nd` must be a nice decomposition of the
/// contraction of `g` by `p`.
pub fn dp_run(nd: &NiceDecomposition, g: &Graph, p: &KappaPartition, mode: DpMode, limits: DpLimits) -> Result<DpRun> {
    check_consistency(nd, g, p)?;
    let selections: Vec<Vec<Vec<usize>>> = p.clique_cover.iter().map(|c| local_selections(c)).collect();
    if selections.iter().any(|s| s.len() > u16::MAX as usize) {
        return Err(Error::Resource("a class has too many local selections".into()));
    }
    let mut ctx = Ctx {
        g,
        p,
        selections,
        offset: usize::from(mode == DpMode::Rank),
        mode,
        slot: vec![u32::MAX; g.n()],
    };
    let mut tables: Vec<Vec<Row>> = Vec::with_capacity(nd.len());
    let mut peak_rows = 0;
    let mut total_rows = 0;
    for (t, node) in nd.nodes.iter().enumerate() {
        let mut out = TableBuilder::default();
        match node.kind {
            NiceKind::Leaf => out.offer(Vec::new(), Partition::discrete(ctx.offset), Cost::default(), Back::Leaf),
            NiceKind::Introduce(v) => introduce(&ctx, nd, t, v, &tables, &mut out)?,
            NiceKind::Forget(v) => forget(&mut ctx, nd, t, v, &tables, &mut out),
            NiceKind::Join => join(&ctx, nd, t, &tables, &mut out),
        }
        if out.len() > limits.max_rows {
            return Err(Error::Resource(format!("DP node {t} exceeds {} rows", limits.max_rows)));
        }
        let rows = match mode {
            DpMode::Naive => out.finish(),
            DpMode::Rank => reduce(out.finish()),
        };
        #[cfg(debug_assertions)]
        if mode == DpMode::Rank {
            for r in &rows {
                debug_assert_eq!(r.cost.excess, 1 - r.part.block_count() as i32);
            }
        }
        peak_rows = peak_rows.max(rows.len());
        total_rows += rows.len();
        tables.push(rows);
    }
    let root_rows = &tables[nd.root];
    let best = (0..root_rows.len())
        .min_by_key(|&i| root_rows[i].cost)
        .ok_or_else(|| Error::Internal("root table is empty".into()))?;
    let cost = root_rows[best].cost;
    if cost.excess != 0 {
        return Err(Error::Internal(format!("best root row has excess {}", cost.excess)));
    }
    let min_deleted = cost.deleted as usize;
    Ok(DpRun {
        tables,
        best,
        mode,
        max_forest: g.n() - min_deleted,
        min_deleted,
        peak_rows,
        total_rows,
    })
}

fn introduce(ctx: &Ctx, nd: &NiceDecomposition, t: usize, v: usize, tables: &[Vec<Row>], out: &mut TableBuilder) -> Result<()> {
    let node = &nd.nodes[t];
    let child = node.children[0];
    let child_bag = &nd.nodes[child].bag;
    let pos = node.bag.binary_search(&v).unwrap();
    let size_v = ctx.p.classes[v].len();
    for (ci, row) in tables[child].iter().enumerate() {
        let at = ctx.offset
            + child_bag[..pos]
                .iter()
                .zip(&row.sig)
                .map(|(&c, &s)| ctx.selections[c][s as usize].len())
                .sum::<usize>();
        for (s, sel) in ctx.selections[v].iter().enumerate() {
            let len = row.part.len() + sel.len();
            if len > u8::MAX as usize {
                return Err(Error::Resource("bag universe exceeds 255 kept vertices".into()));
            }
            let mut labels: Vec<u16> = Vec::with_capacity(len);
            labels.extend(row.part.labels()[..at].iter().map(|&l| l as u16));
            labels.extend((0..sel.len()).map(|i| 256 + i as u16));
            labels.extend(row.part.labels()[at..].iter().map(|&l| l as u16));
            let mut sig = row.sig.clone();
            sig.insert(pos, s as u16);
            let delta = Cost { excess: ctx.excess(-(sel.len() as i32)), deleted: (size_v - sel.len()) as u32 };
            out.offer(sig, Partition::from_labels(&labels), row.cost + delta, Back::Introduce(ci as u32));
        }
    }
    Ok(())
}

fn forget(ctx: &mut Ctx, nd: &NiceDecomposition, t: usize, v: usize, tables: &[Vec<Row>], out: &mut TableBuilder) {
    let node = &nd.nodes[t];
    let child = node.children[0];
    let child_bag = &nd.nodes[child].bag;
    let pos = child_bag.binary_search(&v).unwrap();
    for (ci, row) in tables[child].iter().enumerate() {
        let kept = ctx.kept(child_bag, &row.sig);
        for (i, &x) in kept.iter().enumerate() {
            ctx.slot[x] = (ctx.offset + i) as u32;
        }
        let range = ctx.range_of(child_bag, &row.sig, pos);
        let mut uf = row.part.union_find();
        let mut edges = 0i32;
        let mut acyclic = true;
        'edges: for i in range.clone() {
            let x = kept[i - ctx.offset];
            for &y in ctx.g.neighbors(x) {
                let j = ctx.slot[y];
                if j == u32::MAX {
                    continue;
                }
                let j = j as usize;
                if range.contains(&j) && y < x {
                    continue;
                }
                if !uf.union(i, j) {
                    acyclic = false;
                    break 'edges;
                }
                edges += 1;
            }
        }
        for &x in &kept {
            ctx.slot[x] = u32::MAX;
        }
        if !acyclic {
            continue;
        }
        let universe = row.part.len();
        let rest: Vec<usize> = (0..range.start).chain(range.end..universe).collect();
        let mut sig = row.sig.clone();
        sig.remove(pos);
        match ctx.mode {
            DpMode::Naive => {
                let labels: Vec<usize> = rest.iter().map(|&i| uf.find(i)).collect();
                out.offer(sig, Partition::from_labels(&labels), row.cost, Back::Forget(ci as u32));
            }
            DpMode::Rank => {
                let k = range.len();
                'markers: for mask in 0u32..(1 << k) {
                    let mut uf = uf.clone();
                    for b in 0..k {
                        if mask >> b & 1 == 1 && !uf.union(0, range.start + b) {
                            continue 'markers;
                        }
                    }
                    let labels: Vec<usize> = rest.iter().map(|&i| uf.find(i)).collect();
                    // a component may not leave the bag unless it reaches the root
                    // or another bag vertex
                    for i in range.clone() {
                        let r = uf.find(i);
                        if !labels.contains(&r) {
                            continue 'markers;
                        }
                    }
                    let delta = Cost { excess: edges + mask.count_ones() as i32, deleted: 0 };
                    out.offer(sig.clone(), Partition::from_labels(&labels), row.cost + delta, Back::Forget(ci as u32));
                }
            }
        }
    }
}

fn join(ctx: &Ctx, nd: &NiceDecomposition, t: usize, tables: &[Vec<Row>], out: &mut TableBuilder) {
    let node = &nd.nodes[t];
    let (left, right) = (node.children[0], node.children[1]);
    let mut by_sig: HashMap<&[u16], Vec<usize>> = HashMap::new();
    for (i, r) in tables[right].iter().enumerate() {
        by_sig.entry(&r.sig).or_default().push(i);
    }
    for (li, lrow) in tables[left].iter().enumerate() {
        let Some(partners) = by_sig.get(lrow.sig.as_slice()) else { continue };
        let shared = ctx.bag_cost(&node.bag, &lrow.sig);
        for &ri in partners {
            let rrow = &tables[right][ri];
            if let Some(part) = lrow.part.acyclic_join(&rrow.part) {
                out.offer(lrow.sig.clone(), part, lrow.cost + rrow.cost - shared, Back::Join(li as u32, ri as u32));
            }
        }
    }
}

/// Vertices of a minimum feedback vertex set, traced back from the best root
/// row and verified before returning.
pub fn reconstruct(run: &DpRun, nd: &NiceDecomposition, g: &Graph, p: &KappaPartition) -> Result<Vec<usize>> {
    let mut keep = vec![false; g.n()];
    let mut stack = vec![(nd.root, run.best)];
    while let Some((t, r)) = stack.pop() {
        let node = &nd.nodes[t];
        let row = &run.tables[t][r];
        match (node.kind, row.back) {
            (NiceKind::Leaf, Back::Leaf) => {}
            (NiceKind::Introduce(v), Back::Introduce(c)) => {
                let pos = node.bag.binary_search(&v).unwrap();
                let sel = &local_selections(&p.clique_cover[v])[row.sig[pos] as usize];
                for &x in sel {
                    keep[x] = true;
                }
                stack.push((node.children[0], c as usize));
            }
            (NiceKind::Forget(_), Back::Forget(c)) => stack.push((node.children[0], c as usize)),
            (NiceKind::Join, Back::Join(a, b)) => {
                stack.push((node.children[0], a as usize));
                stack.push((node.children[1], b as usize));
            }
            _ => return Err(Error::Internal(format!("back-pointer kind mismatch at node {t}"))),
        }
    }
    let fvs: Vec<usize> = (0..g.n()).filter(|&v| !keep[v]).collect();
    if fvs.len() != run.min_deleted {
        return Err(Error::Internal(format!(
            "reconstructed {} deletions, table says {}",
            fvs.len(),
            run.min_deleted
        )));
    }
    if !g.is_forest_without(&fvs) {
        return Err(Error::Internal("reconstructed deletion set leaves a cycle".into()));
    }
    Ok(fvs)
}
