//! Command-line front end: cluster, export-graph and bench modes.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use clap::Parser;
use serde::Serialize;

use crate::bench::{self, BenchGrid, GridPoint};
use crate::dataset::{self, Dataset};
use crate::error::{invalid, Error, Result};
use crate::knn::NeighborTable;
use crate::pipeline::{run_range_with, RangeConfig, Timings};
use crate::rng::{self, GraphLevel, RngOptions};
use crate::wspd::WspdStats;

/// Parameters of the built-in Gaussian-blob generator, written as
/// `n=1000,d=2,clusters=3,seed=7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub d: usize,
    pub clusters: usize,
    pub seed: u64,
}

impl FromStr for GeneratorSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut spec = GeneratorSpec { n: 0, d: 2, clusters: 3, seed: 0 };
        for part in s.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let bad = |e: std::num::ParseIntError| format!("{key}: {e}");
            match key.trim() {
                "n" => spec.n = value.trim().parse().map_err(bad)?,
                "d" => spec.d = value.trim().parse().map_err(bad)?,
                "clusters" => spec.clusters = value.trim().parse().map_err(bad)?,
                "seed" => spec.seed = value.trim().parse().map_err(bad)?,
                other => return Err(format!("unknown generator key {other:?}")),
            }
        }
        if spec.n < 2 {
            return Err("generator needs n >= 2".into());
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "rng-hdbscan",
    version,
    about = "HDBSCAN* hierarchies for a whole mpts range from one relative neighborhood graph"
)]
pub struct Args {
    /// CSV file with one point per row.
    #[arg(long, conflicts_with = "generate")]
    pub input: Option<PathBuf>,

    /// Skip the first row of --input.
    #[arg(long, requires = "input")]
    pub has_header: bool,

    /// Generate Gaussian blobs instead of reading a file, e.g. n=1000,d=2,clusters=3,seed=7.
    #[arg(long)]
    pub generate: Option<GeneratorSpec>,

    /// Smallest mpts to build a hierarchy for.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub k1: u32,

    /// Largest mpts; the graph is built once for this value.
    #[arg(long, required_unless_present = "bench", value_parser = clap::value_parser!(u32).range(1..))]
    pub kmax: Option<u32>,

    /// Graph to build: rng, rng-star or rng-star-star.
    #[arg(long, default_value = "rng-star")]
    pub graph: GraphLevel,

    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,

    /// Abort a run that takes longer than this.
    #[arg(long)]
    pub timeout_secs: Option<u64>,

    /// Run the benchmark grid and write report.csv.
    #[arg(long, conflicts_with = "export_graph")]
    pub bench: bool,

    /// Only build the graph and write graph.csv.
    #[arg(long)]
    pub export_graph: bool,

    /// Also write the neighbour table as neighbors.csv.
    #[arg(long)]
    pub dump_neighbors: bool,

    /// Benchmark point counts (comma-separated).
    #[arg(long, value_delimiter = ',', requires = "bench")]
    pub bench_n: Vec<usize>,

    /// Benchmark dimensionalities (comma-separated).
    #[arg(long, value_delimiter = ',', requires = "bench")]
    pub bench_d: Vec<usize>,

    /// Benchmark kmax values (comma-separated).
    #[arg(long, value_delimiter = ',', requires = "bench")]
    pub bench_kmax: Vec<usize>,

    /// Benchmark repetitions averaged per row.
    #[arg(long, default_value_t = 1, requires = "bench")]
    pub repeats: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Cluster,
    Bench,
    ExportGraph,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub input: Option<PathBuf>,
    pub has_header: bool,
    pub generate: Option<GeneratorSpec>,
    pub k1: usize,
    pub kmax: usize,
    pub graph: GraphLevel,
    #[serde(skip)]
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub timeout_secs: Option<u64>,
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<Self> {
        let mode = if args.bench {
            Mode::Bench
        } else if args.export_graph {
            Mode::ExportGraph
        } else {
            Mode::Cluster
        };
        let kmax = args.kmax.unwrap_or(16) as usize;
        let k1 = args.k1 as usize;
        if mode != Mode::Bench {
            if args.input.is_none() && args.generate.is_none() {
                return Err(invalid("one of --input or --generate is required"));
            }
            if k1 > kmax {
                return Err(invalid(format!("--k1 ({k1}) must not exceed --kmax ({kmax})")));
            }
        }
        if args.threads == Some(0) {
            return Err(invalid("--threads must be at least 1"));
        }
        Ok(RunConfig {
            mode,
            input: args.input.clone(),
            has_header: args.has_header,
            generate: args.generate,
            k1,
            kmax,
            graph: args.graph,
            out: args.out.clone(),
            threads: args.threads,
            timeout_secs: args.timeout_secs,
        })
    }

    fn timeout(&self) -> Option<Duration> {
        self.timeout_secs.map(Duration::from_secs)
    }

    fn load(&self) -> Result<Dataset> {
        match (&self.input, &self.generate) {
            (Some(path), _) => dataset::load_csv(path, self.has_header),
            (None, Some(g)) => dataset::generate_blobs(g.n, g.d, g.clusters, g.seed),
            (None, None) => Err(invalid("one of --input or --generate is required")),
        }
    }
}

#[derive(Debug, Serialize)]
struct EdgeCounts {
    graph: usize,
    sbcn_candidates: usize,
    complete: usize,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    config: &'a RunConfig,
    n: usize,
    d: usize,
    edge_counts: EdgeCounts,
    wspd: WspdStats,
    files: Vec<String>,
    threads: usize,
    timings: Timings,
}

/// Parses `argv` and runs. Returns the process exit code: 0 on success, 1 on
/// pipeline errors, 2 on usage errors.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::from_args(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}\n\nFor more information, try '--help'.");
            return 2;
        }
    };
    match execute(&cfg, &args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(cfg: &RunConfig, args: &Args) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| invalid(format!("cannot start thread pool: {e}")))?;
    fs::create_dir_all(&cfg.out)?;
    pool.install(|| match cfg.mode {
        Mode::Cluster => cluster(cfg),
        Mode::ExportGraph => export_graph(cfg, args.dump_neighbors),
        Mode::Bench => run_bench(cfg, args),
    })
}

fn cluster(cfg: &RunConfig) -> Result<()> {
    let data = cfg.load()?;
    let range = RangeConfig { timeout: cfg.timeout(), ..RangeConfig::new(cfg.k1, cfg.kmax, cfg.graph) };
    let run = run_range_with(&data, &range)?;
    let mut files = Vec::new();
    for h in &run.hierarchies {
        let m = h.mpts();
        for (name, result) in [
            (format!("mst_{m}.csv"), h.mst.write_csv(cfg.out.join(format!("mst_{m}.csv")))),
            (
                format!("dendrogram_{m}.csv"),
                h.dendrogram.write_csv(cfg.out.join(format!("dendrogram_{m}.csv"))),
            ),
            (
                format!("selfedges_{m}.csv"),
                h.mst.write_self_edges_csv(cfg.out.join(format!("selfedges_{m}.csv"))),
            ),
        ] {
            result?;
            files.push(name);
        }
    }
    let n = data.len();
    write_manifest(
        &cfg.out,
        &Manifest {
            config: cfg,
            n,
            d: data.dim(),
            edge_counts: EdgeCounts {
                graph: run.graph.edge_count(),
                sbcn_candidates: run.candidate_edges,
                complete: n * (n - 1) / 2,
            },
            wspd: run.wspd,
            files,
            threads: rayon::current_num_threads(),
            timings: run.timings,
        },
    )
}

fn export_graph(cfg: &RunConfig, dump_neighbors: bool) -> Result<()> {
    let data = cfg.load()?;
    let mut timings = Timings::default();
    let t = std::time::Instant::now();
    let table = NeighborTable::build(&data, cfg.kmax)?;
    timings.core_seconds = t.elapsed().as_secs_f64();
    let t = std::time::Instant::now();
    let built = rng::build_rng_with(&data, &table, &RngOptions::new(cfg.graph));
    timings.graph_seconds = t.elapsed().as_secs_f64();
    if cfg.timeout().is_some_and(|limit| t.elapsed() > limit) {
        return Err(Error::Timeout(cfg.timeout().unwrap_or_default()));
    }
    built.graph.write_csv(cfg.out.join("graph.csv"))?;
    let mut files = vec!["graph.csv".to_string()];
    if dump_neighbors {
        table.write_csv(cfg.out.join("neighbors.csv"))?;
        files.push("neighbors.csv".into());
    }
    let n = data.len();
    write_manifest(
        &cfg.out,
        &Manifest {
            config: cfg,
            n,
            d: data.dim(),
            edge_counts: EdgeCounts {
                graph: built.graph.edge_count(),
                sbcn_candidates: built.candidate_edges,
                complete: n * (n - 1) / 2,
            },
            wspd: built.wspd,
            files,
            threads: rayon::current_num_threads(),
            timings,
        },
    )
}

fn run_bench(cfg: &RunConfig, args: &Args) -> Result<()> {
    let mut grid = if args.bench_n.is_empty() && args.bench_d.is_empty() && args.bench_kmax.is_empty() {
        match args.kmax {
            Some(k) => {
                let mut g = BenchGrid::default();
                g.points.iter_mut().for_each(|p| p.kmax = k as usize);
                g.points.dedup();
                g
            }
            None => BenchGrid::default(),
        }
    } else {
        let or = |v: &[usize], default: usize| if v.is_empty() { vec![default] } else { v.to_vec() };
        let ns = or(&args.bench_n, 16_000);
        let ds = or(&args.bench_d, 8);
        let ks = or(&args.bench_kmax, cfg.kmax);
        let mut points = Vec::new();
        for &n in &ns {
            for &d in &ds {
                for &kmax in &ks {
                    points.push(GridPoint { n, d, kmax });
                }
            }
        }
        BenchGrid { points, ..BenchGrid::default() }
    };
    if let Some(p) = grid.points.iter().find(|p| p.n < 2 || p.d == 0 || p.kmax == 0 || p.kmax > p.n) {
        return Err(invalid(format!("invalid grid point {p:?}")));
    }
    grid.timeout = cfg.timeout();
    let report = bench::run_matrix(&grid, args.repeats.max(1))?;
    report.write_csv(cfg.out.join("report.csv"))?;
    report.write_ratios_csv(cfg.out.join("ratios.csv"))?;
    report.print(std::io::stdout())?;
    Ok(())
}

fn write_manifest(out: &Path, manifest: &Manifest<'_>) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)?;
    fs::write(out.join("manifest.json"), text + "\n")?;
    Ok(())
}
