//! Command-line front end. `run` does the work and returns the exit code so
//! tests can drive it without a process.

use std::io::{Read, Write};
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tdham::decomposition::{
    balanced_path_decomposition, min_fill_decomposition, parse_decomposition, validate_decomposition,
    write_decomposition, TreeDecomposition,
};
use tdham::generators::{path, random_hamiltonian_partial_ktree, rng};
use tdham::oracle::{backtrack_count, held_karp};
use tdham::solve::{count_prepared, prepare, Prepared, RunStats};
use tdham::zeta::EngineOptions;
use tdham::{parse_edge_list, Engine, Error, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Zeta,
    Reference,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Count Hamiltonian cycles.
    Count,
    /// Minimum tour cost and tour counts by cost.
    Tsp,
    /// Emit the min-fill decomposition of the graph.
    Decompose,
    /// Check a decomposition against the graph.
    Validate,
    /// Run both engines on the scaling families.
    Bench,
    /// Brute-force count and minimum cost.
    Oracle,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "tdham", version, about = "Hamiltonian cycles and TSP over tree decompositions")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Edge-list file; standard input if omitted or `-`.
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Tree decomposition file; min-fill heuristic if omitted.
    #[arg(long, global = true)]
    pub td: Option<PathBuf>,
    /// Root node of the decomposition.
    #[arg(long, global = true)]
    pub root: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "zeta")]
    pub engine: EngineChoice,
    #[arg(long, global = true, value_enum, default_value = "plain")]
    pub format: Format,
    /// Seed for the random benchmark families.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Capacity of the zeta engine's LRU cache (off by default).
    #[arg(long, global = true)]
    pub cache: Option<NonZeroUsize>,
}

impl RunConfig {
    fn options(&self) -> EngineOptions {
        EngineOptions { cache_capacity: self.cache, ..EngineOptions::default() }
    }
}

enum Failure {
    Input(String),
    Defect(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_defect() {
            Failure::Defect(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs one command. Exit codes: 0 success, 1 input or validation error,
/// 2 internal defect.
pub fn run(config: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match config.command {
        Command::Count => count(config, stdin, out),
        Command::Tsp => tsp(config, stdin, out),
        Command::Decompose => decompose(config, stdin, out),
        Command::Validate => validate(config, stdin, out),
        Command::Bench => bench(config, out),
        Command::Oracle => oracle(config, stdin, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Defect(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            2
        }
    }
}

fn read_graph(config: &RunConfig, stdin: &mut dyn Read) -> Result<Graph, Failure> {
    let text = match &config.graph {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            s
        }
    };
    Ok(parse_edge_list(&text)?)
}

fn read_td(config: &RunConfig) -> Result<Option<TreeDecomposition>, Failure> {
    let Some(p) = &config.td else { return Ok(None) };
    let text = std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    Ok(Some(parse_decomposition(&text)?))
}

fn engine(choice: EngineChoice) -> Engine {
    match choice {
        EngineChoice::Reference => Engine::Reference,
        _ => Engine::Zeta,
    }
}

fn stats_json(stats: &RunStats, seconds: f64) -> Value {
    let mut v = serde_json::to_value(stats).expect("stats serialize");
    v["wall_time"] = json!(seconds);
    v
}

fn emit(out: &mut dyn Write, value: &Value) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json"))?;
    Ok(())
}

fn count(config: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let g = read_graph(config, stdin)?;
    let td = read_td(config)?;
    let start = Instant::now();
    let (count, stats) = if config.engine == EngineChoice::Oracle {
        if let Some(td) = &td {
            let report = validate_decomposition(&g, td);
            if !report.is_valid() {
                return Err(Error::InvalidDecomposition(report.violations).into());
            }
        }
        (backtrack_count(&g)?.cycle_count, None)
    } else {
        let report = tdham::count_cycles(&g, td.as_ref(), config.root, engine(config.engine), config.options())?;
        (report.count, Some(report.stats))
    };
    let seconds = start.elapsed().as_secs_f64();
    match config.format {
        Format::Plain => writeln!(out, "{count}")?,
        Format::Json => {
            let mut v = json!({ "count": count.to_string(), "engine": format!("{:?}", config.engine).to_lowercase() });
            v["stats"] = stats_json(&stats.unwrap_or_default(), seconds);
            emit(out, &v)?;
        }
    }
    Ok(())
}

fn tsp(config: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let g = read_graph(config, stdin)?;
    let td = read_td(config)?;
    let start = Instant::now();
    let (solution, stats) = if config.engine == EngineChoice::Oracle {
        let bt = backtrack_count(&g)?;
        let min = held_karp(&g)?;
        if min != bt.min_cost {
            return Err(Failure::Defect(format!("oracles disagree: Held-Karp {min:?}, backtracking {:?}", bt.min_cost)));
        }
        let at_min = min.map(|c| bt.cost_histogram[c as usize].to_string()).unwrap_or_else(|| "0".into());
        let v = json!({
            "min_cost": min,
            "cycles_at_min": at_min,
            "total_cycles": bt.cycle_count.to_string(),
            "histogram": bt.cost_histogram.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        });
        (v, RunStats::default())
    } else {
        let report = tdham::tsp(&g, td.as_ref(), config.root, engine(config.engine), config.options())?;
        (serde_json::to_value(&report.solution).expect("solution serializes"), report.stats)
    };
    let seconds = start.elapsed().as_secs_f64();
    match config.format {
        Format::Plain => {
            let min = solution["min_cost"].as_u64().map_or("none".to_string(), |c| c.to_string());
            writeln!(out, "min_cost={min}")?;
            writeln!(out, "cycles_at_min={}", solution["cycles_at_min"].as_str().unwrap_or("0"))?;
            writeln!(out, "total_cycles={}", solution["total_cycles"].as_str().unwrap_or("0"))?;
        }
        Format::Json => {
            let mut v = solution;
            v["stats"] = stats_json(&stats, seconds);
            emit(out, &v)?;
        }
    }
    Ok(())
}

fn decompose(config: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let g = read_graph(config, stdin)?;
    let td = min_fill_decomposition(&g);
    let root = config.root.unwrap_or(0);
    if root >= td.node_count().max(1) {
        return Err(Failure::Input(format!("root {root} out of range ({} nodes)", td.node_count())));
    }
    let depth = if td.node_count() == 0 { 0 } else { td.depth(root) };
    let text = write_decomposition(&td);
    match config.format {
        Format::Plain => {
            writeln!(out, "c width={} depth={depth}", td.width())?;
            write!(out, "{text}")?;
        }
        Format::Json => emit(out, &json!({ "width": td.width(), "depth": depth, "decomposition": text }))?,
    }
    Ok(())
}

fn validate(config: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let g = read_graph(config, stdin)?;
    let td = read_td(config)?.ok_or_else(|| Failure::Input("validate needs --td".into()))?;
    let report = validate_decomposition(&g, &td);
    let root = config.root.unwrap_or(0);
    if report.is_valid() && root >= td.node_count().max(1) {
        return Err(Failure::Input(format!("root {root} out of range ({} nodes)", td.node_count())));
    }
    let depth = if report.is_valid() && td.node_count() > 0 { td.depth(root) } else { 0 };
    match config.format {
        Format::Plain if report.is_valid() => writeln!(out, "valid, width={}, depth={depth}", td.width())?,
        Format::Plain => {
            writeln!(out, "invalid")?;
            for v in &report.violations {
                writeln!(out, "  {v}")?;
            }
        }
        Format::Json => emit(
            out,
            &json!({
                "valid": report.is_valid(),
                "width": td.width(),
                "depth": depth,
                "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            }),
        )?,
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::Input("decomposition is invalid".into()))
    }
}

fn oracle(config: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let g = read_graph(config, stdin)?;
    let bt = backtrack_count(&g)?;
    let min = held_karp(&g)?;
    if min != bt.min_cost {
        return Err(Failure::Defect(format!("oracles disagree: Held-Karp {min:?}, backtracking {:?}", bt.min_cost)));
    }
    match config.format {
        Format::Plain => {
            writeln!(out, "count={}", bt.cycle_count)?;
            writeln!(out, "min_cost={}", min.map_or("none".to_string(), |c| c.to_string()))?;
        }
        Format::Json => emit(out, &serde_json::to_value(&bt).expect("oracle result serializes"))?,
    }
    Ok(())
}

const BENCH_PATHS: [usize; 5] = [7, 15, 31, 63, 127];
const BENCH_KTREES: [(usize, usize); 6] = [(8, 2), (12, 2), (16, 2), (8, 3), (10, 3), (12, 3)];

fn bench_instances(seed: u64) -> Vec<(String, Prepared)> {
    let mut list = Vec::new();
    for n in BENCH_PATHS {
        let p = prepare(&path(n), Some(&balanced_path_decomposition(n)), Some(0)).expect("valid by construction");
        list.push((format!("path-{n}"), p.expect("paths are connected")));
    }
    let mut r = rng(seed);
    for (n, k) in BENCH_KTREES {
        let (g, td) = random_hamiltonian_partial_ktree(n, k, 0.5, &mut r);
        let p = prepare(&g, Some(&td), None).expect("valid by construction");
        list.push((format!("ktree-{k}-{n}"), p.expect("connected by construction")));
    }
    list
}

fn bench(config: &RunConfig, out: &mut dyn Write) -> Outcome {
    let engines = match config.engine {
        EngineChoice::Oracle => return Err(Failure::Input("bench runs the zeta and reference engines".into())),
        _ => [Engine::Zeta, Engine::Reference],
    };
    let mut rows = Vec::new();
    for (name, p) in bench_instances(config.seed) {
        let mut counts = Vec::new();
        for e in engines {
            let start = Instant::now();
            let report = count_prepared(&p, e, config.options())?;
            let seconds = start.elapsed().as_secs_f64();
            let (strands, peak) = match (&report.stats.zeta, &report.stats.reference) {
                (Some(z), _) => (z.strand_count, z.peak_live_values),
                (None, Some(r)) => (r.total_entries as u64, r.peak_live_values),
                (None, None) => (0, 0),
            };
            rows.push(json!({
                "instance": name,
                "engine": e,
                "n": p.split.vertex_count() - 1,
                "w": p.ntd.width(),
                "d": p.ntd.depth(),
                "strands": strands,
                "peak_live_values": peak,
                "count": report.count.to_string(),
                "time": seconds,
            }));
            counts.push(report.count);
        }
        if counts.windows(2).any(|w| w[0] != w[1]) {
            return Err(Failure::Defect(format!("engines disagree on {name}: {counts:?}")));
        }
    }
    match config.format {
        Format::Plain => {
            writeln!(out, "{:<12} {:<9} {:>4} {:>3} {:>3} {:>12} {:>8} {:>6} {:>10}", "instance", "engine", "n", "w", "d", "strands", "peak", "count", "time_s")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:<12} {:<9} {:>4} {:>3} {:>3} {:>12} {:>8} {:>6} {:>10.4}",
                    r["instance"].as_str().unwrap(),
                    r["engine"].as_str().unwrap(),
                    r["n"].as_u64().unwrap(),
                    r["w"].as_u64().unwrap(),
                    r["d"].as_u64().unwrap(),
                    r["strands"].as_u64().unwrap(),
                    r["peak_live_values"].as_u64().unwrap(),
                    r["count"].as_str().unwrap(),
                    r["time"].as_f64().unwrap(),
                )?;
            }
        }
        Format::Json => emit(out, &Value::Array(rows))?,
    }
    Ok(())
}
