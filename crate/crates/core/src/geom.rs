//! Similarly sized fat objects in the plane, their intersection graphs and
//! instance generators.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so an
//! instance is a pure function of its parameters and seed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{seq::index, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Disk,
    /// Axis-aligned square; `inner_radius` is half the side length.
    Square,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Disk => "disk",
            Shape::Square => "square",
        })
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => Ok(Shape::Disk),
            "square" => Ok(Shape::Square),
            other => Err(Error::Input(format!("unsupported shape `{other}`"))),
        }
    }
}

/// An object sandwiched between two concentric disks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FatObject {
    pub center: (f64, f64),
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub shape: Shape,
}

impl FatObject {
    pub fn disk(x: f64, y: f64, radius: f64) -> Self {
        FatObject { center: (x, y), inner_radius: radius, outer_radius: radius, shape: Shape::Disk }
    }

    pub fn square(x: f64, y: f64, half_side: f64) -> Self {
        FatObject {
            center: (x, y),
            inner_radius: half_side,
            outer_radius: half_side * std::f64::consts::SQRT_2,
            shape: Shape::Square,
        }
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.outer_radius
    }

    pub fn fatness(&self) -> f64 {
        self.inner_radius / self.outer_radius
    }

    fn check(&self) -> Result<()> {
        let (x, y) = self.center;
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::Input("non-finite center".into()));
        }
        if !(self.inner_radius > 0.0 && self.inner_radius <= self.outer_radius) {
            return Err(Error::Input(format!(
                "radii must satisfy 0 < inner <= outer, got {} and {}",
                self.inner_radius, self.outer_radius
            )));
        }
        let ok = match self.shape {
            Shape::Disk => self.inner_radius == self.outer_radius,
            Shape::Square => {
                (self.outer_radius - self.inner_radius * std::f64::consts::SQRT_2).abs()
                    <= EPS * self.outer_radius
            }
        };
        if !ok {
            return Err(Error::Input(format!("radii inconsistent with shape {}", self.shape)));
        }
        Ok(())
    }

    /// Closed-set intersection test; touching boundaries intersect.
    pub fn intersects(&self, other: &FatObject) -> bool {
        let dx = (self.center.0 - other.center.0).abs();
        let dy = (self.center.1 - other.center.1).abs();
        match (self.shape, other.shape) {
            (Shape::Disk, Shape::Disk) => {
                let r = self.inner_radius + other.inner_radius;
                dx * dx + dy * dy <= r * r
            }
            (Shape::Square, Shape::Square) => {
                let h = self.inner_radius + other.inner_radius;
                dx <= h && dy <= h
            }
            (Shape::Disk, Shape::Square) | (Shape::Square, Shape::Disk) => {
                let (r, h) = if self.shape == Shape::Disk {
                    (self.inner_radius, other.inner_radius)
                } else {
                    (other.inner_radius, self.inner_radius)
                };
                let ex = (dx - h).max(0.0);
                let ey = (dy - h).max(0.0);
                ex * ex + ey * ey <= r * r
            }
        }
    }
}

/// A similarly sized set of fat objects, normalized so the smallest diameter is one.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectSet {
    objects: Vec<FatObject>,
    alpha: f64,
    gamma: f64,
}

impl ObjectSet {
    pub fn new(objects: Vec<FatObject>, alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Input(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::Input(format!("gamma must be >= 1, got {gamma}")));
        }
        for (i, o) in objects.iter().enumerate() {
            o.check().map_err(|e| Error::Input(format!("object {i}: {e}")))?;
            if o.fatness() + EPS < alpha {
                return Err(Error::Input(format!("object {i} is thinner than alpha={alpha}")));
            }
        }
        if !objects.is_empty() {
            let min_d = objects.iter().map(FatObject::diameter).fold(f64::INFINITY, f64::min);
            let max_d = objects.iter().map(FatObject::diameter).fold(0.0, f64::max);
            if (min_d - 1.0).abs() > EPS {
                return Err(Error::Input(format!("smallest diameter must be 1, got {min_d}")));
            }
            if max_d > gamma + EPS {
                return Err(Error::Input(format!("diameter ratio {max_d} exceeds gamma={gamma}")));
            }
        }
        Ok(ObjectSet { objects, alpha, gamma })
    }

    /// Unit disks (radius 1/2) at the given centers.
    pub fn unit_disks(centers: &[(f64, f64)]) -> Self {
        let objects = centers.iter().map(|&(x, y)| FatObject::disk(x, y, 0.5)).collect();
        ObjectSet { objects, alpha: 1.0, gamma: 1.0 }
    }

    pub fn objects(&self) -> &[FatObject] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Intersection graph, using a bucket grid whose cell side is the largest
    /// diameter so only the 3x3 neighborhood of a cell needs probing.
    pub fn intersection_graph(&self) -> Graph {
        let n = self.objects.len();
        if n == 0 {
            return Graph::empty(0);
        }
        let cell = self.objects.iter().map(FatObject::diameter).fold(0.0, f64::max);
        let key = |o: &FatObject| ((o.center.0 / cell).floor() as i64, (o.center.1 / cell).floor() as i64);
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            buckets.entry(key(o)).or_default().push(i);
        }
        let mut adj = vec![Vec::new(); n];
        for (i, o) in self.objects.iter().enumerate() {
            let (cx, cy) = key(o);
            for bx in cx - 1..=cx + 1 {
                for by in cy - 1..=cy + 1 {
                    let Some(members) = buckets.get(&(bx, by)) else { continue };
                    for &j in members {
                        if j != i && o.intersects(&self.objects[j]) {
                            adj[i].push(j);
                        }
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph::from_sorted_adjacency(adj)
    }

    /// Assigns each center to the grid cell `(floor(2x), floor(2y))` of side 1/2.
    pub fn classify_grid(&self) -> GridClassification {
        let cell_of: Vec<(i64, i64)> = self
            .objects
            .iter()
            .map(|o| ((2.0 * o.center.0).floor() as i64, (2.0 * o.center.1).floor() as i64))
            .collect();
        let mut counts: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for &c in &cell_of {
            *counts.entry(c).or_default() += 1;
        }
        let mut heavy_cells = BTreeSet::new();
        let mut light_cells = BTreeSet::new();
        for (c, cnt) in counts {
            if cnt >= 3 {
                heavy_cells.insert(c);
            } else {
                light_cells.insert(c);
            }
        }
        GridClassification { cell_of, heavy_cells, light_cells }
    }
}

/// Grid of axis-parallel cells with diameter 1/sqrt(2). Centers sharing a
/// cell are pairwise adjacent in the intersection graph.
#[derive(Clone, Debug)]
pub struct GridClassification {
    pub cell_of: Vec<(i64, i64)>,
    /// Cells holding at least three centers.
    pub heavy_cells: BTreeSet<(i64, i64)>,
    pub light_cells: BTreeSet<(i64, i64)>,
}

impl GridClassification {
    /// Vertices lying in heavy cells.
    pub fn heavy_vertices(&self) -> Vec<usize> {
        (0..self.cell_of.len()).filter(|&v| self.heavy_cells.contains(&self.cell_of[v])).collect()
    }
}

/// `n` unit-diameter disks placed uniformly in a square of side `sqrt(n / density)`.
pub fn random_udg(n: usize, density: f64, seed: u64) -> Result<ObjectSet> {
    if n == 0 || !(density > 0.0 && density.is_finite()) {
        return Err(Error::Input(format!("random_udg needs n >= 1 and density > 0 (n={n}, density={density})")));
    }
    let side = (n as f64 / density).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<(f64, f64)> =
        (0..n).map(|_| (rng.gen::<f64>() * side, rng.gen::<f64>() * side)).collect();
    Ok(ObjectSet::unit_disks(&centers))
}

const STEP: f64 = 0.9;
const ROW_GAP: f64 = 1.6;

/// Row length used when the caller does not pick one: twice as many hub
/// slots as hubs per gap.
pub fn default_path_len(k: usize) -> usize {
    let (_, per_gap) = planted_shape(k);
    6 * per_gap + 2
}

fn planted_shape(k: usize) -> (usize, usize) {
    if k == 0 {
        return (0, 0);
    }
    let mut gaps = (k as f64).sqrt().ceil() as usize;
    while gaps * gaps < k {
        gaps += 1;
    }
    (gaps, k.div_ceil(gaps))
}

/// A planted instance with minimum feedback vertex set exactly `k`.
///
/// Unit disks form a snake-shaped path: rows of `row_len` disks spaced 0.9
/// apart, rows 1.6 apart, consecutive rows joined by one turn disk at
/// alternating ends. Row length is `max(path_len, 3q + 1)` where `q` is the
/// number of hubs per gap. Each of the `k` hubs sits between two rows and
/// touches two consecutive disks in each, which closes a triangle per hub
/// while deleting all hubs leaves a path. Hubs are the last `k` objects.
pub fn planted_yes_instance(k: usize, path_len: usize, seed: u64) -> Result<(ObjectSet, usize)> {
    if path_len < 2 {
        return Err(Error::Input(format!("path_len must be >= 2, got {path_len}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (gaps, per_gap) = planted_shape(k);
    let rows = gaps + 1;
    let row_len = path_len.max(3 * per_gap + 1);
    let last_x = STEP * (row_len - 1) as f64;
    let turn_dx = (STEP * STEP - (ROW_GAP / 2.0) * (ROW_GAP / 2.0)).sqrt();

    let mut centers = Vec::with_capacity(rows * (row_len + 1) + k);
    for r in 0..rows {
        let y = ROW_GAP * r as f64;
        let xs = (0..row_len).map(|i| STEP * i as f64);
        if r % 2 == 0 {
            centers.extend(xs.map(|x| (x, y)));
        } else {
            centers.extend(xs.rev().map(|x| (x, y)));
        }
        if r + 1 < rows {
            let x = if r % 2 == 0 { last_x + turn_dx } else { -turn_dx };
            centers.push((x, y + ROW_GAP / 2.0));
        }
    }

    // slot j touches disks 3j+1 and 3j+2 of both adjacent rows and stays
    // clear of the turn disk
    let slots = (row_len - 1) / 3;
    let mut remaining = k;
    for g in 0..gaps {
        let here = remaining.div_ceil(gaps - g);
        remaining -= here;
        let mut chosen = index::sample(&mut rng, slots, here).into_vec();
        chosen.sort_unstable();
        let y = ROW_GAP * g as f64 + ROW_GAP / 2.0;
        for j in chosen {
            let jitter = rng.gen_range(-0.1..=0.1);
            centers.push((STEP * (3 * j) as f64 + 1.5 * STEP + jitter, y));
        }
    }
    debug_assert_eq!(remaining, 0);
    Ok((ObjectSet::unit_disks(&centers), k))
}
