//! Decision procedure: peel, partition, decompose, optional threshold
//! certificates, dynamic program, reconstruction and verification.

pub mod dp;
pub mod rank;
pub mod selections;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, PeelResult};
use crate::oracle::{min_fvs_bruteforce, OracleBudget};
use crate::partition::{contract, greedy_partition, ContractedGraph, KappaPartition};
use crate::td::{blowup, decompose_unweighted, make_nice, project, BlowupGraph, Effort, NiceDecomposition, TreeDecomposition};

pub use dp::{dp_run, reconstruct, DpLimits, DpMode, DpRun};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Auto,
    DpNaive,
    DpRank,
    Oracle,
}

impl Mode {
    fn dp_mode(self) -> Option<DpMode> {
        match self {
            Mode::Auto | Mode::DpRank => Some(DpMode::Rank),
            Mode::DpNaive => Some(DpMode::Naive),
            Mode::Oracle => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Auto => "auto",
            Mode::DpNaive => "dp-naive",
            Mode::DpRank => "dp-rank",
            Mode::Oracle => "oracle",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Mode::Auto),
            "dp-naive" => Ok(Mode::DpNaive),
            "dp-rank" => Ok(Mode::DpRank),
            "oracle" => Ok(Mode::Oracle),
            _ => Err(Error::Input(format!("unknown mode {s:?}"))),
        }
    }
}

/// Default `c` in the width threshold `c * sqrt(k)`.
pub const DEFAULT_WIDTH_COEFF: f64 = 8.0;
/// Default `c1` in the high-degree threshold `c1 * k`.
pub const DEFAULT_HIGHDEG_COEFF: f64 = 8.0;
pub const DEFAULT_WIDTH_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub k: usize,
    pub mode: Mode,
    pub width_threshold_coeff: f64,
    pub highdeg_threshold_coeff: f64,
    /// Threshold certificates are only valid for geometric inputs.
    pub enable_thresholds: bool,
    /// Components whose weighted width exceeds this go to the oracle or fail.
    pub width_cap: usize,
    pub effort: Effort,
    pub oracle: OracleBudget,
    pub dp_limits: DpLimits,
}

impl SolveConfig {
    pub fn new(k: usize, mode: Mode) -> Self {
        SolveConfig {
            k,
            mode,
            width_threshold_coeff: DEFAULT_WIDTH_COEFF,
            highdeg_threshold_coeff: DEFAULT_HIGHDEG_COEFF,
            enable_thresholds: false,
            width_cap: DEFAULT_WIDTH_CAP,
            effort: Effort::Best,
            oracle: OracleBudget::default(),
            dp_limits: DpLimits::default(),
        }
    }

    pub fn with_thresholds(mut self, on: bool) -> Self {
        self.enable_thresholds = on;
        self
    }

    fn check(&self) -> Result<()> {
        for (name, c) in [("width", self.width_threshold_coeff), ("high-degree", self.highdeg_threshold_coeff)] {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::Input(format!("{name} threshold coefficient must be positive, got {c}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    Dp,
    WidthThreshold,
    HighdegThreshold,
    Oracle,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub peel_ms: f64,
    pub decompose_ms: f64,
    pub dp_ms: f64,
    pub total_ms: f64,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub verdict: Verdict,
    /// Present iff the verdict is yes.
    pub fvs: Option<Vec<usize>>,
    pub certificate: Certificate,
    /// Minimum deletion count when it was computed exactly.
    pub optimum: Option<usize>,
    pub weighted_width: Option<usize>,
    pub high_degree_count: usize,
    pub class_count: Option<usize>,
    pub components: usize,
    pub peeled: usize,
    pub dp_rows: usize,
    pub timings: Timings,
}

/// Everything the pipeline builds for one connected component of the peeled
/// graph. Vertex ids of `graph` are local; `to_reduced` maps them back.
#[derive(Clone, Debug)]
pub struct ComponentPlan {
    pub graph: Graph,
    pub to_reduced: Vec<usize>,
    pub partition: KappaPartition,
    pub contracted: ContractedGraph,
    pub blown: BlowupGraph,
    pub td_blowup: TreeDecomposition,
    pub td: TreeDecomposition,
    pub nice: NiceDecomposition,
    pub weighted_width: usize,
}

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub peel: PeelResult,
    pub components: Vec<ComponentPlan>,
}

impl Pipeline {
    pub fn weighted_width(&self) -> usize {
        self.components.iter().map(|c| c.weighted_width).max().unwrap_or(0)
    }

    pub fn class_count(&self) -> usize {
        self.components.iter().map(|c| c.partition.len()).sum()
    }
}

/// Partition, contraction, blowup and decompositions of one connected graph.
pub fn plan_component(g: &Graph, effort: Effort) -> Result<ComponentPlan> {
    let partition = greedy_partition(g);
    let contracted = contract(g, &partition)?;
    let blown = blowup(&contracted);
    let td_blowup = decompose_unweighted(&blown.graph, effort);
    let td = project(&td_blowup, &blown, &contracted)?;
    let weighted_width = td.weighted_width(&contracted.weight);
    let nice = make_nice(&td);
    Ok(ComponentPlan {
        graph: g.clone(),
        to_reduced: Vec::new(),
        partition,
        contracted,
        blown,
        td_blowup,
        td,
        nice,
        weighted_width,
    })
}

fn split_components(reduced: &Graph) -> Vec<(Graph, Vec<usize>)> {
    reduced
        .components()
        .into_iter()
        .map(|c| {
            let (h, to_old, _) = reduced.induced_subgraph(&c);
            (h, to_old)
        })
        .collect()
}

pub fn build_pipeline(g: &Graph, effort: Effort) -> Result<Pipeline> {
    let peel = g.peel_degree_one();
    let mut components = Vec::new();
    for (h, to_reduced) in split_components(&peel.reduced) {
        let mut plan = plan_component(&h, effort)?;
        plan.to_reduced = to_reduced;
        components.push(plan);
    }
    Ok(Pipeline { peel, components })
}

/// High-degree certificate: more than `c1 * k` vertices of degree at least
/// three survive peeling.
pub fn quick_reject_highdeg(g_peeled: &Graph, k: usize, c1: f64) -> Option<Certificate> {
    (g_peeled.count_high_degree() as f64 > c1 * k as f64).then_some(Certificate::HighdegThreshold)
}

/// Width certificate: weighted width above `c * sqrt(k)`.
pub fn width_exceeds(weighted_width: usize, k: usize, c: f64) -> bool {
    weighted_width as f64 > c * (k as f64).sqrt()
}

/// Minimum feedback vertex set of a connected peeled component.
fn solve_component(plan: &ComponentPlan, cfg: &SolveConfig, rows: &mut usize) -> Result<(Vec<usize>, bool)> {
    let g = &plan.graph;
    let oracle = || Ok((min_fvs_bruteforce(g, &cfg.oracle)?.1, true));
    let Some(mode) = cfg.mode.dp_mode() else { return oracle() };
    if plan.weighted_width > cfg.width_cap {
        if g.n() <= cfg.oracle.max_n_subsets {
            return oracle();
        }
        return Err(Error::Resource(format!(
            "weighted width {} exceeds the cap {}",
            plan.weighted_width, cfg.width_cap
        )));
    }
    let run = dp_run(&plan.nice, g, &plan.partition, mode, cfg.dp_limits)?;
    *rows += run.total_rows;
    Ok((reconstruct(&run, &plan.nice, g, &plan.partition)?, false))
}

fn verified(g: &Graph, fvs: &[usize], k: usize) -> Result<()> {
    if fvs.len() > k || fvs.iter().any(|&v| v >= g.n()) {
        return Err(Error::Internal(format!("deletion set of size {} does not fit k = {k}", fvs.len())));
    }
    if !g.is_forest_without(fvs) {
        return Err(Error::Internal("deletion set leaves a cycle".into()));
    }
    Ok(())
}

pub fn solve(g: &Graph, cfg: &SolveConfig) -> Result<Solution> {
    cfg.check()?;
    let start = Instant::now();
    let mut timings = Timings::default();
    let peel = g.peel_degree_one();
    let high_degree_count = peel.reduced.count_high_degree();
    timings.peel_ms = ms(start.elapsed());
    let thresholds = cfg.enable_thresholds && cfg.mode != Mode::Oracle;
    let mut sol = Solution {
        verdict: Verdict::No,
        fvs: None,
        certificate: Certificate::Dp,
        optimum: None,
        weighted_width: None,
        high_degree_count,
        class_count: None,
        components: 0,
        peeled: peel.removed.len(),
        dp_rows: 0,
        timings,
    };
    if thresholds {
        if let Some(cert) = quick_reject_highdeg(&peel.reduced, cfg.k, cfg.highdeg_threshold_coeff) {
            sol.certificate = cert;
            sol.timings.total_ms = ms(start.elapsed());
            return Ok(sol);
        }
    }

    let parts = split_components(&peel.reduced);
    sol.components = parts.len();
    let mut plans = Vec::with_capacity(parts.len());
    if cfg.mode == Mode::Oracle {
        // no decomposition needed; the plan only carries the graph
        for (h, to_reduced) in parts {
            plans.push((h, to_reduced, None));
        }
    } else {
        let t = Instant::now();
        for (h, to_reduced) in parts {
            let mut plan = plan_component(&h, cfg.effort)?;
            plan.to_reduced = to_reduced.clone();
            plans.push((h, to_reduced, Some(plan)));
        }
        sol.timings.decompose_ms = ms(t.elapsed());
        let width = plans.iter().filter_map(|p| p.2.as_ref()).map(|p| p.weighted_width).max().unwrap_or(0);
        sol.weighted_width = Some(width);
        sol.class_count = Some(plans.iter().filter_map(|p| p.2.as_ref()).map(|p| p.partition.len()).sum());
        if thresholds && width_exceeds(width, cfg.k, cfg.width_threshold_coeff) {
            sol.certificate = Certificate::WidthThreshold;
            sol.timings.total_ms = ms(start.elapsed());
            return Ok(sol);
        }
    }

    let t = Instant::now();
    let mut fvs = Vec::new();
    let mut used_oracle = cfg.mode == Mode::Oracle;
    let mut rows = 0;
    for (h, to_reduced, plan) in &plans {
        let local = match plan {
            Some(plan) => {
                let (s, by_oracle) = solve_component(plan, cfg, &mut rows)?;
                used_oracle |= by_oracle;
                s
            }
            None => min_fvs_bruteforce(h, &cfg.oracle)?.1,
        };
        fvs.extend(local.into_iter().map(|v| peel.kept[to_reduced[v]]));
    }
    sol.timings.dp_ms = ms(t.elapsed());
    sol.dp_rows = rows;
    fvs.sort_unstable();
    sol.optimum = Some(fvs.len());
    if used_oracle {
        sol.certificate = Certificate::Oracle;
    }
    if fvs.len() <= cfg.k {
        verified(g, &fvs, cfg.k)?;
        sol.verdict = Verdict::Yes;
        sol.fvs = Some(fvs);
    }
    sol.timings.total_ms = ms(start.elapsed());
    Ok(sol)
}

/// Minimum feedback vertex set by the given mode, ignoring thresholds.
pub fn minimum_fvs(g: &Graph, mode: Mode) -> Result<Vec<usize>> {
    let sol = solve(g, &SolveConfig::new(g.n(), mode))?;
    sol.fvs.ok_or_else(|| Error::Internal("k = n must always be a yes-instance".into()))
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

    const MODES: [Mode; 4] = [Mode::Auto, Mode::DpNaive, Mode::DpRank, Mode::Oracle];

    #[test]
    fn c4() {
        for mode in MODES {
            let s = solve(&cycle(4), &SolveConfig::new(1, mode)).unwrap();
            assert_eq!(s.verdict, Verdict::Yes);
            assert_eq!(s.fvs.as_ref().unwrap().len(), 1);
            assert_eq!(solve(&cycle(4), &SolveConfig::new(0, mode)).unwrap().verdict, Verdict::No);
        }
    }

    #[test]
    fn two_triangles() {
        let g = Graph::from_edge_list(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        for mode in MODES {
            assert_eq!(solve(&g, &SolveConfig::new(1, mode)).unwrap().verdict, Verdict::No);
            let s = solve(&g, &SolveConfig::new(2, mode)).unwrap();
            assert_eq!(s.fvs.unwrap().len(), 2);
            assert_eq!(s.components, 2);
        }
    }

    #[test]
    fn forest_needs_nothing() {
        let g = Graph::from_edge_list(5, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let s = solve(&g, &SolveConfig::new(0, Mode::Auto).with_thresholds(true)).unwrap();
        assert_eq!(s.verdict, Verdict::Yes);
        assert_eq!(s.fvs, Some(vec![]));
        assert_eq!(s.high_degree_count, 0);
        assert!(quick_reject_highdeg(&g.peel_degree_one().reduced, 0, 1.0).is_none());
    }

    #[test]
    fn highdeg_fires_on_k5() {
        let g = complete(5);
        assert_eq!(quick_reject_highdeg(&g, 0, 10.0), Some(Certificate::HighdegThreshold));
        let s = solve(&g, &SolveConfig::new(0, Mode::DpRank).with_thresholds(true)).unwrap();
        assert_eq!(s.certificate, Certificate::HighdegThreshold);
        assert_eq!(s.verdict, Verdict::No);
        let s = solve(&g, &SolveConfig::new(0, Mode::DpRank)).unwrap();
        assert_eq!(s.certificate, Certificate::Dp);
        assert_eq!(s.optimum, Some(3));
    }

    #[test]
    fn width_cap_falls_back_to_oracle() {
        let mut cfg = SolveConfig::new(3, Mode::DpRank);
        cfg.width_cap = 1;
        let s = solve(&complete(5), &cfg).unwrap();
        assert_eq!(s.certificate, Certificate::Oracle);
        assert_eq!(s.fvs.unwrap().len(), 3);
        cfg.oracle.max_n_subsets = 4;
        assert!(matches!(solve(&complete(5), &cfg), Err(Error::Resource(_))));
    }

    #[test]
    fn bad_coefficients_rejected() {
        let mut cfg = SolveConfig::new(1, Mode::Auto);
        cfg.width_threshold_coeff = 0.0;
        assert!(matches!(solve(&cycle(3), &cfg), Err(Error::Input(_))));
    }

    #[test]
    fn mode_names_round_trip() {
        for mode in MODES {
            assert_eq!(mode.to_string().parse::<Mode>().unwrap(), mode);
        }
        assert!("fast".parse::<Mode>().is_err());
    }

    #[test]
    fn ids_map_back_through_peeling() {
        // pendant path 0-1-2 hanging off the triangle 2-3-4 plus a separate C4
        let g = Graph::from_edge_list(9, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 4), (5, 6), (6, 7), (7, 8), (8, 5)])
            .unwrap();
        for mode in MODES {
            let fvs = minimum_fvs(&g, mode).unwrap();
            assert_eq!(fvs.len(), 2);
            assert!(fvs.iter().all(|&v| v >= 2));
            assert!(g.is_forest_without(&fvs));
        }
    }
}
