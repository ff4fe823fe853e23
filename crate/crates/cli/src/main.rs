use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fvs_core::geom::{default_path_len, planted_yes_instance, random_udg};
use fvs_core::io::{looks_like_objects, parse_graph, parse_objects, read_td, write_graph, write_objects, write_td};
use fvs_core::oracle::min_fvs_bruteforce;
use fvs_core::partition::{greedy_partition, validate_partition, PartitionBounds};
use fvs_core::solver::{minimum_fvs, solve, DEFAULT_HIGHDEG_COEFF, DEFAULT_WIDTH_COEFF};
use fvs_core::sweep::{run_sweep, Family, SweepSpec};
use fvs_core::td::{decompose_unweighted, Effort};
use fvs_core::{Error, Graph, Mode, OracleBudget, SolveConfig, Verdict};
use serde_json::json;

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_ERROR: u8 = 2;

/// Feedback vertex set solver for intersection graphs of fat objects.
#[derive(Parser)]
#[command(name = "fvs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance: writes <out>.points and <out>.graph.
    Gen(GenArgs),
    /// Decide whether a feedback vertex set of size at most k exists.
    Solve(SolveArgs),
    /// Brute-force reference answer on the whole input graph.
    Oracle(OracleArgs),
    /// Check the partition and a tree decomposition of the input graph.
    Validate(ValidateArgs),
    /// Run a sweep over generated instances and write CSV and JSON reports.
    Bench(BenchArgs),
    /// Compute the optimum with dp-naive, dp-rank and the oracle and compare.
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Random unit disk graph.
    #[arg(long, conflicts_with = "planted", required_unless_present = "planted")]
    udg: bool,
    /// Planted instance with minimum feedback vertex set exactly k.
    #[arg(long)]
    planted: bool,
    #[arg(short = 'n', long, default_value_t = 50)]
    n: usize,
    /// Disk centers per unit area.
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    #[arg(short = 'k', long, required_if_eq("planted", "true"))]
    k: Option<usize>,
    #[arg(long)]
    path_len: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path prefix.
    #[arg(long, default_value = "instance")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// Graph or points file.
    input: PathBuf,
    #[arg(short = 'k', long)]
    k: usize,
    #[arg(long, default_value = "auto", value_parser = parse_mode)]
    mode: Mode,
    /// Never answer from the width or high-degree thresholds.
    #[arg(long)]
    no_thresholds: bool,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = DEFAULT_WIDTH_COEFF)]
    width_coeff: f64,
    #[arg(long, default_value_t = DEFAULT_HIGHDEG_COEFF)]
    highdeg_coeff: f64,
    /// Refuse dynamic programs whose tables grow beyond this many rows.
    #[arg(long)]
    max_rows: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    #[arg(short = 'k', long)]
    k: usize,
    #[arg(long)]
    json: bool,
    /// Largest vertex count the brute force accepts.
    #[arg(long, default_value_t = OracleBudget::default().max_n_subsets)]
    max_n: usize,
}

#[derive(Args)]
struct ValidateArgs {
    input: PathBuf,
    /// Decomposition file to check instead of a computed one.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Write the computed decomposition here.
    #[arg(long, conflicts_with = "td")]
    emit_td: Option<PathBuf>,
    #[arg(long, default_value_t = PartitionBounds::default().kappa)]
    kappa: usize,
    #[arg(long, default_value_t = PartitionBounds::default().delta)]
    delta: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "planted", value_parser = parse_family)]
    family: Family,
    #[arg(long, value_delimiter = ',', default_values_t = vec![4, 9, 16, 25, 36])]
    ks: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    #[arg(long)]
    path_len: Option<usize>,
    /// Also solve every instance at its planted k.
    #[arg(long)]
    solve: bool,
    #[arg(long, default_value = "dp-rank", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long)]
    max_rows: Option<usize>,
    /// CSV output; stdout when neither --csv nor --json is given.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    input: PathBuf,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "planted" => Ok(Family::Planted),
        "forest" => Ok(Family::Forest),
        _ => Err(format!("unknown family {s:?} (planted, forest)")),
    }
}

/// Reads a graph file, or a points file whose intersection graph is used.
/// The flag tells whether the input was geometric.
fn load_graph(path: &Path) -> Result<(Graph, bool), Error> {
    let text = fs::read_to_string(path)?;
    if looks_like_objects(&text) {
        Ok((parse_objects(&text)?.intersection_graph(), true))
    } else {
        Ok((parse_graph(&text)?, false))
    }
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn cmd_gen(a: &GenArgs) -> Result<u8, Error> {
    let (set, planted) = if a.planted {
        let k = a.k.ok_or_else(|| Error::Input("--planted needs -k".into()))?;
        let (set, k) = planted_yes_instance(k, a.path_len.unwrap_or_else(|| default_path_len(k)), a.seed)?;
        (set, Some(k))
    } else {
        (random_udg(a.n, a.density, a.seed)?, None)
    };
    let g = set.intersection_graph();
    let (points, graph) = (with_suffix(&a.out, "points"), with_suffix(&a.out, "graph"));
    fs::write(&points, write_objects(&set))?;
    fs::write(&graph, write_graph(&g))?;
    let mut summary = json!({
        "points": points,
        "graph": graph,
        "n": g.n(),
        "m": g.m(),
        "seed": a.seed,
    });
    if let Some(k) = planted {
        summary["planted_k"] = json!(k);
        summary["hubs"] = json!((g.n() - k..g.n()).collect::<Vec<_>>());
    }
    println!("{summary}");
    Ok(EXIT_YES)
}

fn exit_for(v: Verdict) -> u8 {
    match v {
        Verdict::Yes => EXIT_YES,
        Verdict::No => EXIT_NO,
    }
}

fn print_fvs(fvs: &[usize]) {
    let ids: Vec<String> = fvs.iter().map(|v| v.to_string()).collect();
    println!("fvs {}", ids.join(" "));
}

fn cmd_solve(a: &SolveArgs) -> Result<u8, Error> {
    let (g, geometric) = load_graph(&a.input)?;
    let mut cfg = SolveConfig::new(a.k, a.mode).with_thresholds(a.mode == Mode::Auto && geometric && !a.no_thresholds);
    cfg.width_threshold_coeff = a.width_coeff;
    cfg.highdeg_threshold_coeff = a.highdeg_coeff;
    if let Some(rows) = a.max_rows {
        cfg.dp_limits.max_rows = rows;
    }
    let sol = solve(&g, &cfg)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&sol).expect("solution serializes"));
    } else {
        println!("{}", sol.verdict);
        if let Some(fvs) = &sol.fvs {
            print_fvs(fvs);
        }
        println!("certificate {}", json!(sol.certificate).as_str().unwrap_or_default());
        if let Some(w) = sol.weighted_width {
            println!("weighted_width {w}");
        }
        println!("high_degree_count {}", sol.high_degree_count);
    }
    Ok(exit_for(sol.verdict))
}

fn cmd_oracle(a: &OracleArgs) -> Result<u8, Error> {
    let (g, _) = load_graph(&a.input)?;
    let budget = OracleBudget { max_n_subsets: a.max_n, ..OracleBudget::default() };
    let (opt, witness) = min_fvs_bruteforce(&g, &budget)?;
    let verdict = if opt <= a.k { Verdict::Yes } else { Verdict::No };
    let fvs = (verdict == Verdict::Yes).then_some(witness);
    if a.json {
        let out = json!({ "verdict": verdict, "fvs": fvs, "certificate": "oracle", "optimum": opt });
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        println!("{verdict}");
        if let Some(fvs) = &fvs {
            print_fvs(fvs);
        }
        println!("optimum {opt}");
    }
    Ok(exit_for(verdict))
}

fn cmd_validate(a: &ValidateArgs) -> Result<u8, Error> {
    let (g, _) = load_graph(&a.input)?;
    let p = greedy_partition(&g);
    let report = validate_partition(&g, &p, PartitionBounds { kappa: a.kappa, delta: a.delta });
    let (td, source) = match &a.td {
        Some(path) => {
            let (td, n) = read_td(path)?;
            if n != g.n() {
                return Err(Error::Input(format!("decomposition is for {n} vertices, graph has {}", g.n())));
            }
            (td, "file")
        }
        None => (decompose_unweighted(&g, Effort::Best), "computed"),
    };
    if let Some(path) = &a.emit_td {
        fs::write(path, write_td(&td, g.n()))?;
    }
    let td_report = td.validate(&g);
    let ok = report.is_valid() && td_report.is_valid();
    let mut out = serde_json::to_value(&report).expect("report serializes");
    out["decomposition"] = json!({
        "source": source,
        "bags": td.len(),
        "width": td.width(),
        "violations": td_report.violations,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(if ok { EXIT_YES } else { EXIT_NO })
}

fn cmd_bench(a: &BenchArgs) -> Result<u8, Error> {
    let mut spec = SweepSpec {
        family: a.family,
        ks: a.ks.clone(),
        seeds_per_k: a.seeds,
        base_seed: a.base_seed,
        path_len: a.path_len,
        mode: a.mode,
        solve: a.solve,
        ..SweepSpec::default()
    };
    if let Some(rows) = a.max_rows {
        spec.max_dp_rows = rows;
    }
    let report = run_sweep(&spec);
    let csv = report.to_csv()?;
    if let Some(path) = &a.csv {
        fs::write(path, &csv)?;
    }
    if let Some(path) = &a.json {
        fs::write(path, report.to_json())?;
    }
    if a.csv.is_none() && a.json.is_none() {
        print!("{csv}");
    }
    let agg = &report.aggregate;
    eprintln!(
        "{} instances, {} errors, slope {}, c {}, c1 {}, max width {}",
        agg.instances,
        agg.errors,
        fmt_opt(agg.width_slope),
        fmt_opt(agg.width_coeff),
        fmt_opt(agg.highdeg_coeff),
        agg.max_width
    );
    Ok(EXIT_YES)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"))
}

fn cmd_compare(a: &CompareArgs) -> Result<u8, Error> {
    let (g, _) = load_graph(&a.input)?;
    let naive = minimum_fvs(&g, Mode::DpNaive)?.len();
    let rank = minimum_fvs(&g, Mode::DpRank)?.len();
    let oracle = match minimum_fvs(&g, Mode::Oracle) {
        Ok(s) => Some(s.len()),
        Err(Error::Resource(msg)) => {
            eprintln!("oracle skipped: {msg}");
            None
        }
        Err(e) => return Err(e),
    };
    let agree = naive == rank && oracle.map_or(true, |o| o == naive);
    let out = json!({ "n": g.n(), "m": g.m(), "dp_naive": naive, "dp_rank": rank, "oracle": oracle, "agree": agree });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(if agree { EXIT_YES } else { EXIT_NO })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Compare(a) => cmd_compare(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
