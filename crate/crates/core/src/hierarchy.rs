//! Per-`mpts` minimum spanning trees and HDBSCAN* merge hierarchies.

use std::cmp::Ordering;
use std::io::Write;
use std::path::Path;

use crate::dataset::PointId;
use crate::error::{invalid, Error, Result};
use crate::graph::{write_edges, Edge, WeightedGraph};
use crate::metric::MetricView;
use crate::union_find::UnionFind;

/// Replaces every weight with `mrd_mpts` for the view's `mpts`.
pub fn reweight(graph: &WeightedGraph, view: &MetricView<'_>) -> Result<WeightedGraph> {
    if view.mpts() > graph.kmax {
        return Err(invalid(format!(
            "cannot reweight a graph built for kmax = {} at mpts = {}",
            graph.kmax,
            view.mpts()
        )));
    }
    let edges = graph
        .edges
        .iter()
        .map(|e| Edge { w: view.mrd(e.u, e.v), ..*e })
        .collect();
    Ok(WeightedGraph { n: graph.n, kmax: graph.kmax, mpts: view.mpts(), edges })
}

/// Total order used to make MSTs deterministic under equal weights.
pub fn edge_order(a: &Edge, b: &Edge) -> Ordering {
    a.w.total_cmp(&b.w).then(a.u.cmp(&b.u)).then(a.v.cmp(&b.v))
}

/// Spanning tree at a fixed `mpts`, optionally annotated with per-point self
/// edges `c_mpts(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mst {
    pub mpts: usize,
    pub n: usize,
    /// Sorted by [`edge_order`].
    pub edges: Vec<Edge>,
    pub self_edges: Option<Vec<f64>>,
}

impl Mst {
    /// Sum of tree edge weights. Self edges are not included.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_edges(&self.edges, path)
    }

    /// Writes `point_id,core_dist` rows; fails if self edges are missing.
    pub fn write_self_edges_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let self_edges = self
            .self_edges
            .as_ref()
            .ok_or_else(|| invalid("spanning tree has no self edges"))?;
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "point_id,core_dist")?;
        for (p, c) in self_edges.iter().enumerate() {
            writeln!(out, "{p},{c}")?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Kruskal's algorithm over the graph's edges.
pub fn mst(graph: &WeightedGraph) -> Result<Mst> {
    let mut sorted = graph.edges.clone();
    sorted.sort_unstable_by(edge_order);
    let mut uf = UnionFind::new(graph.n);
    let mut edges = Vec::with_capacity(graph.n.saturating_sub(1));
    for e in sorted {
        if uf.union(e.u, e.v).is_some() {
            edges.push(e);
            if edges.len() + 1 == graph.n {
                break;
            }
        }
    }
    if uf.set_count() != 1 {
        return Err(Error::Disconnected { components: uf.set_count() });
    }
    Ok(Mst { mpts: graph.mpts, n: graph.n, edges, self_edges: None })
}

/// Attaches `c_mpts(p)` to every vertex.
pub fn extend_with_self_edges(tree: &Mst, view: &MetricView<'_>) -> Result<Mst> {
    if tree.mpts != view.mpts() {
        return Err(invalid(format!(
            "tree computed at mpts = {} but view is at mpts = {}",
            tree.mpts,
            view.mpts()
        )));
    }
    let self_edges = (0..tree.n).map(|p| view.core(p)).collect();
    Ok(Mst { self_edges: Some(self_edges), ..tree.clone() })
}

/// One merge event. Cluster ids below `n` are points; merge `i` creates
/// cluster `n + i`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Merge {
    pub height: f64,
    pub left: usize,
    pub right: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub mpts: usize,
    pub n: usize,
    pub merges: Vec<Merge>,
    pub self_edges: Option<Vec<f64>>,
}

/// Single-linkage sweep over the tree edges in ascending weight order.
pub fn build_dendrogram(tree: &Mst) -> Dendrogram {
    let n = tree.n;
    let mut edges = tree.edges.clone();
    edges.sort_unstable_by(edge_order);

    let mut uf = UnionFind::new(n);
    // cluster id currently labelling each union-find root
    let mut label: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for e in edges {
        let (ra, rb) = (uf.find(e.u), uf.find(e.v));
        if ra == rb {
            continue;
        }
        let (la, lb) = (label[ra], label[rb]);
        let root = uf.union(ra, rb).expect("distinct roots");
        label[root] = n + merges.len();
        merges.push(Merge {
            height: e.w,
            left: la.min(lb),
            right: la.max(lb),
            size: uf.set_size(root),
        });
    }
    Dendrogram { mpts: tree.mpts, n, merges, self_edges: tree.self_edges.clone() }
}

impl Dendrogram {
    pub fn heights(&self) -> Vec<f64> {
        self.merges.iter().map(|m| m.height).collect()
    }

    /// Flat partition at `height`: components joined by merges no higher
    /// than `height`. With self edges attached, points whose core distance
    /// exceeds `height` are noise (`None`). Labels are numbered by the
    /// smallest member id.
    pub fn cut(&self, height: f64) -> Vec<Option<usize>> {
        let mut uf = UnionFind::new(self.n);
        // representative point of each cluster id
        let mut rep: Vec<usize> = (0..self.n).collect();
        rep.reserve(self.merges.len());
        for m in &self.merges {
            let r = rep[m.left];
            if m.height <= height {
                uf.union(r, rep[m.right]);
            }
            rep.push(r);
        }
        let mut labels = vec![None; self.n];
        let mut ids = std::collections::HashMap::new();
        for p in 0..self.n {
            if let Some(se) = &self.self_edges {
                if se[p] > height {
                    continue;
                }
            }
            let root = uf.find(p);
            let next = ids.len();
            labels[p] = Some(*ids.entry(root).or_insert(next));
        }
        labels
    }

    /// Writes `merge_id,height,left,right` rows; `merge_id` is the cluster id
    /// the merge creates, so `left` and `right` refer back to earlier rows.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "merge_id,height,left,right")?;
        for (i, m) in self.merges.iter().enumerate() {
            writeln!(out, "{},{},{},{}", self.n + i, m.height, m.left, m.right)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Points grouped by the leaf ids under `cluster`.
pub fn members(d: &Dendrogram, cluster: usize) -> Vec<PointId> {
    let mut out = Vec::new();
    let mut stack = vec![cluster];
    while let Some(c) = stack.pop() {
        if c < d.n {
            out.push(c);
        } else {
            let m = &d.merges[c - d.n];
            stack.push(m.left);
            stack.push(m.right);
        }
    }
    out.sort_unstable();
    out
}
