use std::io::Write;
use std::path::Path;

use crate::dataset::PointId;
use crate::error::Result;

/// Undirected weighted edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: PointId,
    pub v: PointId,
    pub w: f64,
}

impl Edge {
    pub fn new(a: PointId, b: PointId, w: f64) -> Self {
        debug_assert_ne!(a, b);
        Edge { u: a.min(b), v: a.max(b), w }
    }

    pub fn key(&self) -> (PointId, PointId) {
        (self.u, self.v)
    }
}

/// Edge list over `n` vertices, weighted by `mrd_mpts`.
///
/// `kmax` is the largest `mpts` the edge set is valid for; reweighting to
/// any `mpts <= kmax` preserves MST optimality.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    pub n: usize,
    pub kmax: usize,
    pub mpts: usize,
    pub edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Sorts by `(u, v)` and drops repeated pairs and self loops.
    pub fn from_edges(n: usize, kmax: usize, mpts: usize, mut edges: Vec<Edge>) -> Self {
        edges.retain(|e| e.u != e.v);
        edges.sort_unstable_by_key(Edge::key);
        edges.dedup_by_key(|e| e.key());
        WeightedGraph { n, kmax, mpts, edges }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_keys(&self) -> Vec<(PointId, PointId)> {
        self.edges.iter().map(Edge::key).collect()
    }

    /// Whether every edge of `self` is also in `other`. Both lists are sorted.
    pub fn is_subgraph_of(&self, other: &WeightedGraph) -> bool {
        let mut it = other.edges.iter().map(Edge::key).peekable();
        self.edges.iter().all(|e| {
            while it.next_if(|k| *k < e.key()).is_some() {}
            it.next_if_eq(&e.key()).is_some()
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Writes `u,v,weight` rows.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_edges(&self.edges, path)
    }
}

pub(crate) fn write_edges(edges: &[Edge], path: impl AsRef<Path>) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "u,v,weight")?;
    for e in edges {
        writeln!(out, "{},{},{}", e.u, e.v, e.w)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_dedups() {
        let g = WeightedGraph::from_edges(
            4,
            1,
            1,
            vec![Edge::new(2, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(0, 3, 2.0)],
        );
        assert_eq!(g.edge_keys(), vec![(0, 3), (1, 2)]);
    }

    #[test]
    fn subgraph_check() {
        let big = WeightedGraph::from_edges(
            4,
            1,
            1,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(2, 3, 1.0)],
        );
        let small = WeightedGraph::from_edges(4, 1, 1, vec![Edge::new(0, 1, 1.0), Edge::new(2, 3, 1.0)]);
        let other = WeightedGraph::from_edges(4, 1, 1, vec![Edge::new(0, 2, 1.0)]);
        assert!(small.is_subgraph_of(&big));
        assert!(!big.is_subgraph_of(&small));
        assert!(!other.is_subgraph_of(&big));
    }
}
