//! Brute-force reference implementations.
//!
//! These share only the metric with the production path: no kd-tree, split
//! tree, or SBCN code is reached from here. The dense Prim MST also serves as
//! the benchmark baseline (one HDBSCAN* run over the implicit complete graph).

use rayon::prelude::*;

use crate::dataset::{Dataset, PointId};
use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::hierarchy::Mst;
use crate::knn::NeighborTable;
use crate::metric::MetricView;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest instance accepted by the cubic-time routines.
    pub max_n: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_n: 2000 }
    }
}

impl OracleConfig {
    fn guard(&self, n: usize) -> Result<()> {
        let limit = self.max_n.min(2000);
        if n > limit {
            return Err(Error::OracleGuard { n, limit });
        }
        Ok(())
    }
}

/// Exhaustive kNN: sort every other point by `(distance, id)`, self first.
pub fn brute_knn(data: &Dataset, q: PointId, k: usize) -> Vec<(PointId, f64)> {
    let mut all: Vec<(PointId, f64)> = (0..data.len())
        .filter(|&p| p != q)
        .map(|p| (p, data.distance(q, p)))
        .collect();
    all.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
    let mut out = vec![(q, 0.0)];
    out.extend(all.into_iter().take(k - 1));
    out
}

/// Neighbour table assembled from [`brute_knn`].
pub fn brute_neighbor_table(data: &Dataset, kmax: usize) -> NeighborTable {
    let rows: Vec<Vec<(PointId, f64)>> = (0..data.len())
        .into_par_iter()
        .map(|p| brute_knn(data, p, kmax))
        .collect();
    let ids = rows.iter().flatten().map(|r| r.0).collect();
    let dists = rows.iter().flatten().map(|r| r.1).collect();
    NeighborTable::from_parts(kmax, ids, dists)
}

/// RNG under `mrd_mpts` by checking every pair against every third point:
/// `(a, b)` is kept iff `mrd(a, b) <= max{mrd(a, c), mrd(b, c)}` for all `c`.
pub fn brute_rng(
    cfg: &OracleConfig,
    data: &Dataset,
    table: &NeighborTable,
    mpts: usize,
) -> Result<WeightedGraph> {
    cfg.guard(data.len())?;
    let view = MetricView::new(data, table, mpts)?;
    let n = data.len();
    let edges: Vec<Edge> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            (a + 1..n).filter_map(move |b| {
                let w = view.mrd(a, b);
                let empty = (0..n)
                    .filter(|&c| c != a && c != b)
                    .all(|c| w <= view.mrd(a, c).max(view.mrd(b, c)));
                empty.then(|| Edge::new(a, b, w))
            })
        })
        .collect();
    Ok(WeightedGraph::from_edges(n, mpts, mpts, edges))
}

/// MST of the complete mutual reachability graph, grown with dense Prim in
/// `O(n^2)` time and `O(n)` memory.
pub fn complete_graph_mst(data: &Dataset, table: &NeighborTable, mpts: usize) -> Result<Mst> {
    let view = MetricView::new(data, table, mpts)?;
    let n = data.len();
    let cores: Vec<f64> = (0..n).map(|p| view.core(p)).collect();
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    let mut in_tree = vec![false; n];
    let mut edges = Vec::with_capacity(n - 1);

    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let (xc, cc) = (data.point(current), cores[current]);
        let mut next = usize::MAX;
        let mut next_w = f64::INFINITY;
        for p in 0..n {
            if in_tree[p] {
                continue;
            }
            let w = cc.max(cores[p]).max(crate::dataset::euclidean(xc, data.point(p)));
            if w < best[p] {
                best[p] = w;
                parent[p] = current;
            }
            if best[p] < next_w || next == usize::MAX {
                next_w = best[p];
                next = p;
            }
        }
        in_tree[next] = true;
        edges.push(Edge::new(parent[next], next, next_w));
        current = next;
    }
    edges.sort_unstable_by(crate::hierarchy::edge_order);
    Ok(Mst { mpts, n, edges, self_edges: None })
}
