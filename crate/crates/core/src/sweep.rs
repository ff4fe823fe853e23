//! Benchmark sweeps over generated instances and the report they produce.
//!
//! CSV columns, in order: `family, k, seed, n, m, reduced_n, heavy_cells,
//! class_count, weighted_width, high_degree_count, mode, verdict, optimum,
//! error`. Only deterministic quantities go into the CSV; wall-clock times
//! are in the JSON report only.

use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{default_path_len, planted_yes_instance};
use crate::graph::Graph;
use crate::solver::{build_pipeline, solve, DpLimits, Mode, SolveConfig};
use crate::td::Effort;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Planted yes-instances with minimum feedback vertex set `k`.
    Planted,
    /// Random recursive trees on `10k + 1` vertices, solved at `k = 0`.
    Forest,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSpec {
    pub family: Family,
    pub ks: Vec<usize>,
    pub seeds_per_k: usize,
    pub base_seed: u64,
    /// Row length of planted instances; `None` picks the default for each `k`.
    pub path_len: Option<usize>,
    pub mode: Mode,
    /// Also run the solver at the planted `k`.
    pub solve: bool,
    pub max_dp_rows: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            family: Family::Planted,
            ks: vec![4, 9, 16, 25, 36],
            seeds_per_k: 20,
            base_seed: 0,
            path_len: None,
            mode: Mode::DpRank,
            solve: false,
            max_dp_rows: DpLimits::default().max_rows,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub k: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub reduced_n: usize,
    pub heavy_cells: usize,
    pub class_count: usize,
    pub weighted_width: usize,
    pub high_degree_count: usize,
    pub mode: String,
    pub verdict: String,
    pub optimum: Option<usize>,
    pub error: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TimedRow {
    #[serde(flatten)]
    pub row: SweepRow,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Aggregate {
    pub instances: usize,
    pub errors: usize,
    /// Least-squares slope of `ln(width)` against `ln(k)`.
    pub width_slope: Option<f64>,
    /// Smallest `c` with `width <= c * sqrt(k)` on every row.
    pub width_coeff: Option<f64>,
    /// Smallest `c1` with `high_degree_count <= c1 * k` on every row.
    pub highdeg_coeff: Option<f64>,
    pub max_width: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub schema: u32,
    pub spec: SweepSpec,
    pub rows: Vec<TimedRow>,
    pub aggregate: Aggregate,
}

impl BenchReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(&r.row).map_err(|e| Error::Internal(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    Graph::from_edge_list(n, &edges).expect("tree edges are valid")
}

fn run_instance(spec: &SweepSpec, k: usize, seed: u64) -> SweepRow {
    let mut row = SweepRow {
        family: format!("{:?}", spec.family).to_lowercase(),
        k,
        seed,
        mode: spec.mode.to_string(),
        ..SweepRow::default()
    };
    if let Err(e) = fill_row(spec, k, seed, &mut row) {
        row.error = e.to_string();
    }
    row
}

fn fill_row(spec: &SweepSpec, k: usize, seed: u64, row: &mut SweepRow) -> Result<()> {
    let (g, target) = match spec.family {
        Family::Planted => {
            let (set, planted) = planted_yes_instance(k, spec.path_len.unwrap_or_else(|| default_path_len(k)), seed)?;
            row.heavy_cells = set.classify_grid().heavy_cells.len();
            (set.intersection_graph(), planted)
        }
        Family::Forest => (random_tree(10 * k + 1, seed), 0),
    };
    row.n = g.n();
    row.m = g.m();
    let pipe = build_pipeline(&g, Effort::Best)?;
    row.reduced_n = pipe.peel.reduced.n();
    row.high_degree_count = pipe.peel.reduced.count_high_degree();
    row.class_count = pipe.class_count();
    row.weighted_width = pipe.weighted_width();
    if spec.solve {
        let mut cfg = SolveConfig::new(target, spec.mode);
        cfg.dp_limits.max_rows = spec.max_dp_rows;
        let sol = solve(&g, &cfg)?;
        row.verdict = sol.verdict.to_string();
        row.optimum = sol.optimum;
    }
    Ok(())
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn aggregate(rows: &[SweepRow]) -> Aggregate {
    let ok: Vec<&SweepRow> = rows.iter().filter(|r| r.error.is_empty()).collect();
    let positive: Vec<&&SweepRow> = ok.iter().filter(|r| r.k > 0).collect();
    let pts: Vec<(f64, f64)> = positive
        .iter()
        .filter(|r| r.weighted_width > 0)
        .map(|r| ((r.k as f64).ln(), (r.weighted_width as f64).ln()))
        .collect();
    let max_ratio = |f: &dyn Fn(&SweepRow) -> f64| positive.iter().map(|r| f(r)).reduce(f64::max);
    Aggregate {
        instances: rows.len(),
        errors: rows.len() - ok.len(),
        width_slope: ols_slope(&pts),
        width_coeff: max_ratio(&|r| r.weighted_width as f64 / (r.k as f64).sqrt()),
        highdeg_coeff: max_ratio(&|r| r.high_degree_count as f64 / r.k as f64),
        max_width: ok.iter().map(|r| r.weighted_width).max().unwrap_or(0),
    }
}

/// Runs every instance of the sweep. Failing instances become error rows.
pub fn run_sweep(spec: &SweepSpec) -> BenchReport {
    let mut rows = Vec::with_capacity(spec.ks.len() * spec.seeds_per_k);
    for &k in &spec.ks {
        for i in 0..spec.seeds_per_k {
            let seed = spec.base_seed.wrapping_add(i as u64);
            let start = Instant::now();
            let row = run_instance(spec, k, seed);
            rows.push(TimedRow { row, wall_time_ms: start.elapsed().as_secs_f64() * 1e3 });
        }
    }
    rows.sort_by_key(|r| (r.row.k, r.row.seed));
    let plain: Vec<SweepRow> = rows.iter().map(|r| r.row.clone()).collect();
    BenchReport { schema: SCHEMA_VERSION, spec: spec.clone(), aggregate: aggregate(&plain), rows }
}
