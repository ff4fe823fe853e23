//! Connectivity partitions and their rank-based reduction.
//!
//! A row of a representative table is a partition of a small universe (the
//! kept bag vertices, plus a global root in the rank-based DP) with a cost.
//! Reduction keeps a subset of rows such that for every complement
//! partition `q`, the cheapest row `p` whose join with `q` is a single block
//! is still present. It builds the matrix of rows against cuts of the
//! universe (element 0 fixed on one side), with entry 1 when every block of
//! the row lies on one side of the cut, and keeps a minimum-cost row basis
//! over GF(2).

use std::collections::BTreeMap;

use crate::unionfind::UnionFind;

/// Cost of a partial solution, compared lexicographically.
///
/// `excess` counts edges plus root markers minus kept vertices; it only
/// moves in the rank-based DP, where a zero total certifies a forest.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost {
    pub excess: i32,
    pub deleted: u32,
}

impl Cost {
    pub fn deleted(deleted: u32) -> Self {
        Cost { excess: 0, deleted }
    }
}

impl std::ops::Add for Cost {
    type Output = Cost;
    fn add(self, o: Cost) -> Cost {
        Cost { excess: self.excess + o.excess, deleted: self.deleted + o.deleted }
    }
}

impl std::ops::Sub for Cost {
    type Output = Cost;
    fn sub(self, o: Cost) -> Cost {
        Cost { excess: self.excess - o.excess, deleted: self.deleted - o.deleted }
    }
}

/// Set partition of `0..len` as block labels in first-appearance order, so
/// equal partitions are equal vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u8>);

impl Partition {
    /// Canonicalizes arbitrary labels.
    pub fn from_labels<L: Copy + Eq>(labels: &[L]) -> Self {
        // universes are small, a linear scan beats hashing
        let mut seen: Vec<L> = Vec::new();
        let out = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(i) => i as u8,
                None => {
                    seen.push(*l);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        Partition(out)
    }

    /// Every element in its own block.
    pub fn discrete(len: usize) -> Self {
        Partition((0..len as u8).collect())
    }

    pub fn labels(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.0.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (i, &l) in self.0.iter().enumerate() {
            out[l as usize].push(i);
        }
        out
    }

    pub(crate) fn union_find(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.len());
        let mut first = vec![usize::MAX; self.block_count()];
        for (i, &l) in self.0.iter().enumerate() {
            let f = &mut first[l as usize];
            if *f == usize::MAX {
                *f = i;
            } else {
                uf.union(*f, i);
            }
        }
        uf
    }

    pub(crate) fn from_union_find(uf: &mut UnionFind, len: usize) -> Self {
        let roots: Vec<usize> = (0..len).map(|i| uf.find(i)).collect();
        Partition::from_labels(&roots)
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len());
        let mut uf = self.union_find();
        for block in other.blocks() {
            for w in block.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        Partition::from_union_find(&mut uf, self.len())
    }

    /// Join of two partitions read as spanning forests over the universe;
    /// `None` when their union contains a cycle.
    pub fn acyclic_join(&self, other: &Partition) -> Option<Partition> {
        assert_eq!(self.len(), other.len());
        let mut uf = self.union_find();
        for block in other.blocks() {
            for w in block.windows(2) {
                if !uf.union(w[0], w[1]) {
                    return None;
                }
            }
        }
        Some(Partition::from_union_find(&mut uf, self.len()))
    }

    /// Row of the cut matrix: bit `c` is set iff every block lies on one side
    /// of the cut whose side-1 set is `{i + 1 : bit i of c}`. The consistent
    /// cuts are exactly the unions of blocks avoiding element 0.
    fn cut_vector(&self) -> Vec<u64> {
        let u = self.len();
        debug_assert!(u >= 1);
        let words = (1usize << (u - 1)).div_ceil(64);
        let mut masks = vec![0u64; self.block_count()];
        for (i, &l) in self.0.iter().enumerate().skip(1) {
            masks[l as usize] |= 1 << (i - 1);
        }
        masks.remove(self.0[0] as usize);
        let mut out = vec![0u64; words];
        for pick in 0u64..1 << masks.len() {
            let mut c = 0u64;
            let mut bits = pick;
            while bits != 0 {
                c |= masks[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            out[(c / 64) as usize] |= 1 << (c % 64);
        }
        out
    }
}

/// Largest universe the reduction handles; beyond it rows are only deduplicated.
pub const MAX_RANK_UNIVERSE: usize = 17;

/// Indices of a representative subset of `rows` (all over one universe).
/// Duplicate partitions keep their cheapest copy; ties keep the earlier row.
pub(crate) fn representative_indices(rows: &[(&Partition, Cost)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].1.cmp(&rows[b].1).then(rows[a].0.cmp(rows[b].0)).then(a.cmp(&b)));
    let mut seen = std::collections::HashSet::new();
    order.retain(|&i| seen.insert(rows[i].0));
    let Some(&(first, _)) = rows.first() else { return Vec::new() };
    let u = first.len();
    if u == 0 {
        return order.into_iter().take(1).collect();
    }
    if u > MAX_RANK_UNIVERSE {
        return order;
    }
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut keep = Vec::new();
    for i in order {
        let mut v = rows[i].0.cut_vector();
        for (pivot, b) in &basis {
            if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        if let Some(w) = v.iter().position(|&x| x != 0) {
            let pivot = w * 64 + v[w].trailing_zeros() as usize;
            basis.push((pivot, v));
            keep.push(i);
        }
    }
    keep
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub signature: Vec<u16>,
    pub partition: Partition,
    pub cost: Cost,
}

/// Rows grouped by kept-signature; partitions of one signature share a universe.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepresentativeTable {
    pub rows: Vec<TableRow>,
    pub reduced: bool,
}

impl RepresentativeTable {
    pub fn new(rows: Vec<TableRow>) -> Self {
        RepresentativeTable { rows, reduced: false }
    }

    /// Cheapest row of `signature` whose join with `complement` is one block.
    pub fn optimum_against(&self, signature: &[u16], complement: &Partition) -> Option<Cost> {
        self.rows
            .iter()
            .filter(|r| r.signature == signature && r.partition.join(complement).block_count() <= 1)
            .map(|r| r.cost)
            .min()
    }
}

/// Keeps, per signature, a representative subset of at most
/// `2^(universe - 1)` rows.
pub fn rank_reduce(table: &RepresentativeTable) -> RepresentativeTable {
    let mut groups: BTreeMap<&[u16], Vec<usize>> = BTreeMap::new();
    for (i, r) in table.rows.iter().enumerate() {
        groups.entry(&r.signature).or_default().push(i);
    }
    let mut rows = Vec::new();
    for idx in groups.values() {
        let view: Vec<(&Partition, Cost)> =
            idx.iter().map(|&i| (&table.rows[i].partition, table.rows[i].cost)).collect();
        for k in representative_indices(&view) {
            rows.push(table.rows[idx[k]].clone());
        }
    }
    RepresentativeTable { rows, reduced: true }
}

/// All set partitions of `0..n` (restricted growth strings).
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut labels = vec![0u8; n];
    fn rec(i: usize, max: u8, labels: &mut Vec<u8>, out: &mut Vec<Partition>) {
        if i == labels.len() {
            out.push(Partition(labels.clone()));
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            rec(i + 1, if l == max { max + 1 } else { max }, labels, out);
        }
    }
    if n == 0 {
        return vec![Partition(Vec::new())];
    }
    rec(1, 1, &mut labels, &mut out);
    out
}
