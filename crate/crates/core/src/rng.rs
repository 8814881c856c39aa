//! Relative neighborhood graph under `mrd_kmax`, built from the WSPD.
//!
//! Candidate edges are the symmetric bichromatic closest neighbours (SBCN) of
//! every well-separated pair. Candidates are then optionally filtered against
//! the stored `kmax` neighbours of both endpoints, and for the exact graph
//! against the whole dataset.

use std::str::FromStr;

use rayon::prelude::*;

use crate::dataset::{euclidean, Dataset, PointId};
use crate::graph::{Edge, WeightedGraph};
use crate::knn::NeighborTable;
use crate::metric::MetricView;
use crate::wspd::{self, SplitTree, WellSeparatedPair, WspdStats};

/// How much filtering to apply to the SBCN candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum GraphLevel {
    /// Unfiltered SBCN edges (RNG**).
    #[serde(rename = "rng-star-star")]
    RngStarStar,
    /// Edges surviving the neighbour-table checks (RNG*).
    #[serde(rename = "rng-star")]
    RngStar,
    /// The exact relative neighborhood graph.
    #[serde(rename = "rng")]
    RngExact,
}

impl GraphLevel {
    pub const ALL: [GraphLevel; 3] = [GraphLevel::RngStarStar, GraphLevel::RngStar, GraphLevel::RngExact];

    pub fn as_str(self) -> &'static str {
        match self {
            GraphLevel::RngStarStar => "rng-star-star",
            GraphLevel::RngStar => "rng-star",
            GraphLevel::RngExact => "rng",
        }
    }
}

impl std::fmt::Display for GraphLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for GraphLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rng-star-star" => Ok(GraphLevel::RngStarStar),
            "rng-star" => Ok(GraphLevel::RngStar),
            "rng" => Ok(GraphLevel::RngExact),
            other => Err(format!("unknown graph level {other:?} (expected rng, rng-star or rng-star-star)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RngOptions {
    pub level: GraphLevel,
    /// WSPD separation factor; values below 1 void the MST guarantee.
    pub separation: f64,
    /// Accept an edge without a full scan when its weight equals the larger
    /// endpoint core distance.
    pub core_shortcut: bool,
}

impl RngOptions {
    pub fn new(level: GraphLevel) -> Self {
        RngOptions { level, separation: 1.0, core_shortcut: true }
    }
}

#[derive(Debug, Clone)]
pub struct RngBuild {
    pub graph: WeightedGraph,
    pub wspd: WspdStats,
    /// Size of the unfiltered SBCN edge set.
    pub candidate_edges: usize,
}

/// Builds the graph at `level` with the default options.
pub fn build_rng(data: &Dataset, table: &NeighborTable, level: GraphLevel) -> WeightedGraph {
    build_rng_with(data, table, &RngOptions::new(level)).graph
}

pub fn build_rng_with(data: &Dataset, table: &NeighborTable, opts: &RngOptions) -> RngBuild {
    let view = MetricView::at_kmax(data, table);
    let tree = SplitTree::build(data, table);
    let exact = opts.level == GraphLevel::RngExact;
    let filter = opts.level != GraphLevel::RngStarStar;

    // SBCN candidates are filtered as soon as they are produced; each point
    // pair belongs to exactly one well-separated pair, so no candidate is
    // seen twice.
    let batches: Vec<(usize, usize, Vec<Edge>)> = tree
        .pair_seeds()
        .into_par_iter()
        .map(|(l, r)| {
            let (mut pairs, mut candidates) = (0, 0);
            let mut buf = Vec::new();
            let mut kept = Vec::new();
            wspd::visit_pairs(&tree, l, r, opts.separation, |pair| {
                pairs += 1;
                buf.clear();
                sbcn_into(tree.points(pair.a), tree.points(pair.b), &view, &mut buf);
                candidates += buf.len();
                kept.extend(
                    buf.iter()
                        .filter(|e| !filter || keep_edge(&view, e, exact, opts.core_shortcut)),
                );
            });
            (pairs, candidates, kept)
        })
        .collect();

    let pair_count = batches.iter().map(|b| b.0).sum();
    let candidate_edges = batches.iter().map(|b| b.1).sum();
    let mut edges: Vec<Edge> = Vec::with_capacity(batches.iter().map(|b| b.2.len()).sum());
    for (_, _, kept) in batches {
        edges.extend(kept);
    }
    edges.par_sort_unstable_by_key(Edge::key);
    let wspd = WspdStats { pair_count, tree_depth: tree.depth(), tree_nodes: tree.nodes().len() };
    log::debug!("wspd: {} pairs, tree depth {}", wspd.pair_count, wspd.tree_depth);

    RngBuild {
        graph: WeightedGraph { n: data.len(), kmax: table.kmax(), mpts: table.kmax(), edges },
        wspd,
        candidate_edges,
    }
}

/// SBCN edges of one well-separated pair under `mrd_kmax`.
///
/// `(a, b)` is emitted when `b` is a closest point of `B` to `a` and `a` is a
/// closest point of `A` to `b`. Ties are inclusive: every mutually closest
/// pair is emitted.
pub fn sbcn_edges(tree: &SplitTree, pair: &WellSeparatedPair, view: &MetricView<'_>) -> Vec<Edge> {
    let mut out = Vec::new();
    sbcn_into(tree.points(pair.a), tree.points(pair.b), view, &mut out);
    out
}

/// SBCN edges between two explicit point sets.
pub fn sbcn_between(side_a: &[PointId], side_b: &[PointId], view: &MetricView<'_>) -> Vec<Edge> {
    let mut out = Vec::new();
    sbcn_into(side_a, side_b, view, &mut out);
    out
}

fn sbcn_into(side_a: &[PointId], side_b: &[PointId], view: &MetricView<'_>, out: &mut Vec<Edge>) {
    match (side_a, side_b) {
        ([a], [b]) => out.push(Edge::new(*a, *b, view.mrd(*a, *b))),
        ([a], many) | (many, [a]) => sbcn_single(*a, many, view, out),
        _ => sbcn_general(side_a, side_b, view, out),
    }
}

/// One side is a single point `a`: it is every opposite point's closest, so
/// the edges are exactly `a`'s closest points.
fn sbcn_single(a: PointId, many: &[PointId], view: &MetricView<'_>, out: &mut Vec<Edge>) {
    let mut best = f64::INFINITY;
    let start = out.len();
    for &b in many {
        let w = view.mrd_unchecked(a, b);
        if w < best {
            best = w;
            out.truncate(start);
        }
        if w == best {
            out.push(Edge::new(a, b, w));
        }
    }
}

fn sbcn_general(side_a: &[PointId], side_b: &[PointId], view: &MetricView<'_>, out: &mut Vec<Edge>) {
    let data = view.data();
    let d = data.dim();
    let mut b_coords = Vec::with_capacity(side_b.len() * d);
    for &b in side_b {
        b_coords.extend_from_slice(data.point(b));
    }
    let b_cores: Vec<f64> = side_b.iter().map(|&b| view.core(b)).collect();

    let mut row_min = vec![f64::INFINITY; side_a.len()];
    let mut row_arg = vec![0usize; side_a.len()];
    let mut row_ties = vec![0u32; side_a.len()];
    let mut col_min = vec![f64::INFINITY; side_b.len()];

    let weight = |ca: f64, xa: &[f64], j: usize| -> f64 {
        let xb = &b_coords[j * d..(j + 1) * d];
        ca.max(b_cores[j]).max(euclidean(xa, xb))
    };

    for (i, &a) in side_a.iter().enumerate() {
        let (ca, xa) = (view.core(a), data.point(a));
        for j in 0..side_b.len() {
            let w = weight(ca, xa, j);
            if w < row_min[i] {
                row_min[i] = w;
                row_arg[i] = j;
                row_ties[i] = 1;
            } else if w == row_min[i] {
                row_ties[i] += 1;
            }
            if w < col_min[j] {
                col_min[j] = w;
            }
        }
    }

    for (i, &a) in side_a.iter().enumerate() {
        if row_ties[i] == 1 {
            let j = row_arg[i];
            if row_min[i] == col_min[j] {
                out.push(Edge::new(a, side_b[j], row_min[i]));
            }
        } else {
            let (ca, xa) = (view.core(a), data.point(a));
            for j in 0..side_b.len() {
                let w = weight(ca, xa, j);
                if w == row_min[i] && w == col_min[j] {
                    out.push(Edge::new(a, side_b[j], w));
                }
            }
        }
    }
}

fn keep_edge(view: &MetricView<'_>, e: &Edge, exact: bool, shortcut: bool) -> bool {
    let (a, b, w) = (e.u, e.v, e.w);
    // When w equals an endpoint's core distance no third point can be in the
    // lune at all (mrd(a, x) >= c(a) for every x), so this check may run
    // before the neighbour scan without changing the result.
    if shortcut && w == view.core(a).max(view.core(b)) {
        return true;
    }
    if neighbor_witness(view, a, b, w) || neighbor_witness(view, b, a, w) {
        return false;
    }
    if !exact {
        return true;
    }
    !(0..view.data().len()).any(|x| x != a && x != b && view.in_lune_with(w, a, b, x))
}

/// Whether one of `a`'s stored neighbours lies in `lune(a, b)`. Neighbours
/// come in ascending distance from `a`, so the scan stops once `d(a, x)`
/// reaches `w`.
fn neighbor_witness(view: &MetricView<'_>, a: PointId, b: PointId, w: f64) -> bool {
    let table = view.table();
    for (&x, &d_ax) in table.neighbors(a).iter().zip(table.core_dists(a)) {
        if d_ax >= w {
            break;
        }
        if x != a && x != b && view.in_lune_given(w, a, b, x, d_ax) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(d: &Dataset, k: usize) -> NeighborTable {
        NeighborTable::build(d, k).unwrap()
    }

    #[test]
    fn collinear_triplet_drops_long_edge() {
        let d = Dataset::from_rows(&[[0.0], [1.0], [2.0]]).unwrap();
        let t = table(&d, 1);
        let g = build_rng(&d, &t, GraphLevel::RngExact);
        assert_eq!(g.edge_keys(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn equilateral_triangle_keeps_all_edges() {
        // Unit vectors: every squared side is exactly 2.
        let d = Dataset::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        let t = table(&d, 1);
        for level in GraphLevel::ALL {
            assert_eq!(build_rng(&d, &t, level).edge_count(), 3, "{level}");
        }
    }

    #[test]
    fn sbcn_figure_configuration() {
        // Two groups of three; a3 and b3 face each other.
        let d = Dataset::from_rows(&[
            [1.2, 1.3],
            [2.0, 1.0],
            [2.1, 1.7],
            [5.0, 1.0],
            [5.6, 1.8],
            [4.6, 1.6],
        ])
        .unwrap();
        let t = table(&d, 1);
        let view = MetricView::at_kmax(&d, &t);
        let edges = sbcn_between(&[0, 1, 2], &[3, 4, 5], &view);
        assert!(edges.iter().any(|e| e.key() == (2, 5)));
    }

    #[test]
    fn sbcn_singletons_always_connect() {
        let d = Dataset::from_rows(&[[0.0], [10.0], [3.0]]).unwrap();
        let t = table(&d, 2);
        let view = MetricView::at_kmax(&d, &t);
        let edges = sbcn_between(&[0], &[1], &view);
        assert_eq!(edges, vec![Edge::new(0, 1, view.mrd(0, 1))]);
    }

    #[test]
    fn sbcn_asymmetric_closest_is_skipped() {
        // a = 0 sees b = 2 first, but b's closest in A is a' = 1.
        let d = Dataset::from_rows(&[[0.0], [2.5], [4.0], [10.0]]).unwrap();
        let t = table(&d, 1);
        let view = MetricView::at_kmax(&d, &t);
        let edges = sbcn_between(&[0, 1], &[2, 3], &view);
        assert_eq!(edges.iter().map(Edge::key).collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn sbcn_ties_emit_every_mutual_pair() {
        let d = Dataset::from_rows(&[[0.0, 1.0], [0.0, -1.0], [3.0, 0.0]]).unwrap();
        let t = table(&d, 1);
        let view = MetricView::at_kmax(&d, &t);
        let mut keys: Vec<_> = sbcn_between(&[0, 1], &[2], &view).iter().map(Edge::key).collect();
        keys.sort_unstable();
        assert_eq!(keys, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn level_names_round_trip() {
        for level in GraphLevel::ALL {
            assert_eq!(level.as_str().parse::<GraphLevel>().unwrap(), level);
        }
        assert!("gabriel".parse::<GraphLevel>().is_err());
    }
}
