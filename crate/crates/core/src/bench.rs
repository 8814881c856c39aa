//! Runtime and graph-size measurements for the baseline and the three graph
//! levels over a grid of `(n, d, kmax)` settings.
//!
//! The baseline precomputes all core distances once, then runs dense Prim on
//! the implicit complete graph for every `mpts`. Graph variants build their
//! graph once and span it per `mpts`. Timings cover core distances, graph
//! construction and MSTs; dendrogram extraction is reported on its own.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::dataset::generate_blobs;
use crate::error::Result;
use crate::knn::NeighborTable;
use crate::oracle;
use crate::pipeline::{run_range_with, RangeConfig};
use crate::rng::GraphLevel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GridPoint {
    pub n: usize,
    pub d: usize,
    pub kmax: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchGrid {
    pub points: Vec<GridPoint>,
    pub clusters: usize,
    pub seed: u64,
    /// Per-run limit; a run that exceeds it is reported with status `timeout`.
    pub timeout: Option<Duration>,
}

impl BenchGrid {
    /// Vary one of `n`, `d`, `kmax` at a time while the other two stay at
    /// their defaults.
    pub fn sweep(default: GridPoint, ns: &[usize], ds: &[usize], ks: &[usize]) -> Self {
        let mut points = vec![default];
        let candidates = ns
            .iter()
            .map(|&n| GridPoint { n, ..default })
            .chain(ds.iter().map(|&d| GridPoint { d, ..default }))
            .chain(ks.iter().map(|&kmax| GridPoint { kmax, ..default }));
        for p in candidates {
            if !points.contains(&p) {
                points.push(p);
            }
        }
        BenchGrid { points, clusters: 5, seed: 1, timeout: None }
    }

    pub fn single(n: usize, d: usize, kmax: usize) -> Self {
        BenchGrid { points: vec![GridPoint { n, d, kmax }], clusters: 5, seed: 1, timeout: None }
    }
}

impl Default for BenchGrid {
    /// Desk-scale sweep: n in {4k, 16k, 64k}, d in {2, 8, 16}, kmax in
    /// {2, 16, 64}, defaults (16k, 8, 16).
    fn default() -> Self {
        BenchGrid::sweep(
            GridPoint { n: 16_000, d: 8, kmax: 16 },
            &[4_000, 16_000, 64_000],
            &[2, 8, 16],
            &[2, 16, 64],
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub variant: &'static str,
    pub n: usize,
    pub d: usize,
    pub kmax: usize,
    pub threads: usize,
    pub build_seconds: f64,
    pub mst_seconds: f64,
    pub hierarchy_seconds: f64,
    pub total_seconds: f64,
    pub edge_count: usize,
    pub status: &'static str,
}

/// All `kmax` hierarchies via RNG* against one baseline hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub n: usize,
    pub d: usize,
    pub kmax: usize,
    pub rng_star_all_seconds: f64,
    pub baseline_single_seconds: f64,
    pub baseline_all_seconds: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub ratios: Vec<RatioRow>,
}

/// Timings of the baseline: core distances, then one dense Prim per `mpts`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineTiming {
    pub core_seconds: f64,
    /// Summed seconds of the MSTs for `mpts = 1..=kmax` (truncated on timeout).
    pub mst_seconds: f64,
    pub first_mst_seconds: f64,
    pub completed: usize,
    pub timed_out: bool,
}

impl BaselineTiming {
    pub fn single_hierarchy_seconds(&self) -> f64 {
        self.core_seconds + self.first_mst_seconds
    }

    pub fn total_seconds(&self) -> f64 {
        self.core_seconds + self.mst_seconds
    }
}

pub fn time_baseline(
    data: &crate::dataset::Dataset,
    kmax: usize,
    timeout: Option<Duration>,
) -> Result<BaselineTiming> {
    let started = Instant::now();
    let t = Instant::now();
    let table = NeighborTable::build(data, kmax)?;
    let core_seconds = t.elapsed().as_secs_f64();
    let mut timing = BaselineTiming {
        core_seconds,
        mst_seconds: 0.0,
        first_mst_seconds: 0.0,
        completed: 0,
        timed_out: false,
    };
    for mpts in 1..=kmax {
        if timeout.is_some_and(|limit| started.elapsed() > limit) {
            timing.timed_out = true;
            break;
        }
        let t = Instant::now();
        let tree = oracle::complete_graph_mst(data, &table, mpts)?;
        let secs = t.elapsed().as_secs_f64();
        std::hint::black_box(&tree);
        if mpts == 1 {
            timing.first_mst_seconds = secs;
        }
        timing.mst_seconds += secs;
        timing.completed += 1;
    }
    Ok(timing)
}

pub fn run_matrix(grid: &BenchGrid, repeats: usize) -> Result<BenchReport> {
    assert!(repeats >= 1, "need at least one repeat");
    let threads = rayon::current_num_threads();
    let mut report = BenchReport::default();
    for &point in &grid.points {
        let GridPoint { n, d, kmax } = point;
        log::info!("bench: n = {n}, d = {d}, kmax = {kmax}");
        let data = generate_blobs(n, d, grid.clusters, grid.seed)?;
        let reps = repeats as f64;
        let row = |variant, build: f64, mst: f64, hier: f64, edges, timed_out: bool| BenchRow {
            variant,
            n,
            d,
            kmax,
            threads,
            build_seconds: build / reps,
            mst_seconds: mst / reps,
            hierarchy_seconds: hier / reps,
            total_seconds: (build + mst) / reps,
            edge_count: edges,
            status: if timed_out { "timeout" } else { "ok" },
        };

        let (mut core, mut msts, mut single, mut timed_out) = (0.0, 0.0, 0.0, false);
        for _ in 0..repeats {
            let b = time_baseline(&data, kmax, grid.timeout)?;
            core += b.core_seconds;
            msts += b.mst_seconds;
            single += b.single_hierarchy_seconds();
            timed_out |= b.timed_out;
        }
        report.rows.push(row("baseline", core, msts, 0.0, n * (n - 1) / 2, timed_out));
        let baseline_single = single / reps;
        let baseline_all = (core + msts) / reps;

        for level in [GraphLevel::RngStarStar, GraphLevel::RngStar, GraphLevel::RngExact] {
            let (mut build, mut mst, mut hier, mut edges, mut timed_out) = (0.0, 0.0, 0.0, 0, false);
            for _ in 0..repeats {
                let cfg = RangeConfig { timeout: grid.timeout, ..RangeConfig::new(1, kmax, level) };
                match run_range_with(&data, &cfg) {
                    Ok(run) => {
                        build += run.timings.core_seconds + run.timings.graph_seconds;
                        mst += run.timings.mst_seconds;
                        hier += run.timings.hierarchy_seconds;
                        edges = run.graph.edge_count();
                    }
                    Err(crate::Error::Timeout(_)) => {
                        timed_out = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            let r = row(variant_name(level), build, mst, hier, edges, timed_out);
            if level == GraphLevel::RngStar && !timed_out {
                report.ratios.push(RatioRow {
                    n,
                    d,
                    kmax,
                    rng_star_all_seconds: r.total_seconds,
                    baseline_single_seconds: baseline_single,
                    baseline_all_seconds: baseline_all,
                    ratio: r.total_seconds / baseline_single,
                });
            }
            report.rows.push(r);
        }
    }
    Ok(report)
}

fn variant_name(level: GraphLevel) -> &'static str {
    match level {
        GraphLevel::RngStarStar => "rng-star-star",
        GraphLevel::RngStar => "rng-star",
        GraphLevel::RngExact => "rng",
    }
}

impl BenchReport {
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_ratios_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for row in &self.ratios {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Human-readable summary table.
    pub fn print(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "{:<14} {:>8} {:>4} {:>5} {:>10} {:>10} {:>10} {:>12}",
            "variant", "n", "d", "kmax", "build[s]", "mst[s]", "total[s]", "edges"
        )?;
        for r in &self.rows {
            writeln!(
                out,
                "{:<14} {:>8} {:>4} {:>5} {:>10.3} {:>10.3} {:>10.3} {:>12}{}",
                r.variant,
                r.n,
                r.d,
                r.kmax,
                r.build_seconds,
                r.mst_seconds,
                r.total_seconds,
                r.edge_count,
                if r.status == "ok" { "" } else { " (timeout)" }
            )?;
        }
        for r in &self.ratios {
            writeln!(
                out,
                "n={} d={} kmax={}: {} RNG* hierarchies / 1 baseline hierarchy = {:.2}",
                r.n, r.d, r.kmax, r.kmax, r.ratio
            )?;
        }
        Ok(())
    }
}
