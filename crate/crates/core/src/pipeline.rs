//! Multiple hierarchies from one graph: compute the neighbour table and the
//! RNG once at `kmax`, then reweight, span, and sweep it for every `mpts` in
//! `k1..=kmax`.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{invalid, Error, Result};
use crate::graph::WeightedGraph;
use crate::hierarchy::{self, Dendrogram, Mst};
use crate::knn::NeighborTable;
use crate::metric::MetricView;
use crate::rng::{self, GraphLevel, RngOptions};
use crate::wspd::WspdStats;

#[derive(Debug, Clone, PartialEq)]
pub struct RangeConfig {
    pub k1: usize,
    pub kmax: usize,
    pub level: GraphLevel,
    pub timeout: Option<Duration>,
}

impl RangeConfig {
    pub fn new(k1: usize, kmax: usize, level: GraphLevel) -> Self {
        RangeConfig { k1, kmax, level, timeout: None }
    }
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    /// Spanning tree with self edges attached.
    pub mst: Mst,
    pub dendrogram: Dendrogram,
}

impl Hierarchy {
    pub fn mpts(&self) -> usize {
        self.mst.mpts
    }
}

/// Wall-clock seconds per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct Timings {
    pub core_seconds: f64,
    pub graph_seconds: f64,
    pub mst_seconds: f64,
    pub hierarchy_seconds: f64,
}

impl Timings {
    /// Core distances, graph and MSTs; hierarchy extraction is excluded.
    pub fn measured_total(&self) -> f64 {
        self.core_seconds + self.graph_seconds + self.mst_seconds
    }
}

#[derive(Debug, Clone)]
pub struct RangeRun {
    pub table: NeighborTable,
    /// The shared graph, weighted at `kmax`.
    pub graph: WeightedGraph,
    pub candidate_edges: usize,
    pub wspd: WspdStats,
    /// One entry per `mpts`, ascending.
    pub hierarchies: Vec<Hierarchy>,
    pub timings: Timings,
}

pub fn run_range(data: &Dataset, k1: usize, kmax: usize, level: GraphLevel) -> Result<RangeRun> {
    run_range_with(data, &RangeConfig::new(k1, kmax, level))
}

pub fn run_range_with(data: &Dataset, cfg: &RangeConfig) -> Result<RangeRun> {
    let (k1, kmax) = (cfg.k1, cfg.kmax);
    if k1 == 0 || k1 > kmax || kmax > data.len() {
        return Err(invalid(format!(
            "need 1 <= k1 <= kmax <= n, got k1 = {k1}, kmax = {kmax}, n = {}",
            data.len()
        )));
    }
    let started = Instant::now();
    let check = || match cfg.timeout {
        Some(limit) if started.elapsed() > limit => Err(Error::Timeout(limit)),
        _ => Ok(()),
    };
    let mut timings = Timings::default();

    let t = Instant::now();
    let table = NeighborTable::build(data, kmax)?;
    timings.core_seconds = t.elapsed().as_secs_f64();
    check()?;

    let t = Instant::now();
    let built = rng::build_rng_with(data, &table, &RngOptions::new(cfg.level));
    timings.graph_seconds = t.elapsed().as_secs_f64();
    log::info!(
        "{} graph: {} edges ({} SBCN candidates)",
        cfg.level,
        built.graph.edge_count(),
        built.candidate_edges
    );
    check()?;

    let t = Instant::now();
    let msts: Vec<Mst> = (k1..=kmax)
        .into_par_iter()
        .map(|mpts| {
            check()?;
            let view = MetricView::new(data, &table, mpts)?;
            let tree = hierarchy::mst(&hierarchy::reweight(&built.graph, &view)?)?;
            hierarchy::extend_with_self_edges(&tree, &view)
        })
        .collect::<Result<_>>()?;
    timings.mst_seconds = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let hierarchies = msts
        .into_par_iter()
        .map(|mst| Hierarchy { dendrogram: hierarchy::build_dendrogram(&mst), mst })
        .collect();
    timings.hierarchy_seconds = t.elapsed().as_secs_f64();

    Ok(RangeRun {
        table,
        graph: built.graph,
        candidate_edges: built.candidate_edges,
        wspd: built.wspd,
        hierarchies,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::generate_blobs;

    #[test]
    fn one_hierarchy_per_mpts() {
        let data = generate_blobs(120, 2, 3, 5).unwrap();
        let run = run_range(&data, 2, 6, GraphLevel::RngStar).unwrap();
        let mpts: Vec<_> = run.hierarchies.iter().map(Hierarchy::mpts).collect();
        assert_eq!(mpts, vec![2, 3, 4, 5, 6]);
        for h in &run.hierarchies {
            assert_eq!(h.dendrogram.merges.len(), data.len() - 1);
        }
    }

    #[test]
    fn collapsed_range() {
        let data = generate_blobs(80, 3, 2, 9).unwrap();
        let run = run_range(&data, 4, 4, GraphLevel::RngExact).unwrap();
        assert_eq!(run.hierarchies.len(), 1);
        let table = NeighborTable::build(&data, 4).unwrap();
        let g = rng::build_rng(&data, &table, GraphLevel::RngExact);
        let single = hierarchy::build_dendrogram(&hierarchy::mst(&g).unwrap());
        assert_eq!(run.hierarchies[0].dendrogram.merges, single.merges);
    }

    #[test]
    fn bad_ranges() {
        let data = generate_blobs(10, 2, 1, 0).unwrap();
        assert!(run_range(&data, 0, 3, GraphLevel::RngStar).is_err());
        assert!(run_range(&data, 4, 3, GraphLevel::RngStar).is_err());
        assert!(run_range(&data, 1, 11, GraphLevel::RngStar).is_err());
    }

    #[test]
    fn zero_timeout_aborts() {
        let data = generate_blobs(500, 2, 2, 0).unwrap();
        let cfg = RangeConfig { timeout: Some(Duration::ZERO), ..RangeConfig::new(1, 4, GraphLevel::RngStar) };
        assert!(matches!(run_range_with(&data, &cfg), Err(Error::Timeout(_))));
    }
}
