//! Exact k-nearest-neighbour search and the per-point neighbour table.
//!
//! A point is always its own first neighbour (distance 0, rank 1), so the
//! core distance at `mpts = 1` is zero. Remaining neighbours are ordered by
//! `(distance, id)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::dataset::{euclidean, Dataset, PointId};
use crate::error::{invalid, Result};

const LEAF_SIZE: usize = 16;

#[derive(Debug)]
enum KdNode {
    Leaf { start: usize, end: usize },
    Split { dim: usize, value: f64, left: usize, right: usize },
}

/// Static kd-tree over a dataset, used to answer exact kNN queries.
#[derive(Debug)]
pub struct KdTree<'a> {
    data: &'a Dataset,
    order: Vec<PointId>,
    nodes: Vec<KdNode>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    dist: f64,
    id: PointId,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> KdTree<'a> {
    pub fn build(data: &'a Dataset) -> Self {
        let mut tree = KdTree {
            data,
            order: (0..data.len()).collect(),
            nodes: Vec::new(),
        };
        tree.build_node(0, data.len());
        tree
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let idx = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(KdNode::Leaf { start, end });
            return idx;
        }
        let data = self.data;
        let d = data.dim();
        let mut best = (0, f64::NEG_INFINITY);
        for dim in 0..d {
            let (lo, hi) = self.order[start..end]
                .iter()
                .map(|&p| data.point(p)[dim])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
            if hi - lo > best.1 {
                best = (dim, hi - lo);
            }
        }
        let dim = best.0;
        if best.1 <= 0.0 {
            self.nodes.push(KdNode::Leaf { start, end });
            return idx;
        }
        let mid = start + (end - start) / 2;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            data.point(a)[dim].total_cmp(&data.point(b)[dim])
        });
        let value = data.point(self.order[mid])[dim];
        self.nodes.push(KdNode::Leaf { start, end });
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[idx] = KdNode::Split { dim, value, left, right };
        idx
    }

    /// The `k` nearest neighbours of point `q`, `q` itself first, the rest by
    /// ascending `(distance, id)`.
    pub fn knn(&self, q: PointId, k: usize) -> Vec<(PointId, f64)> {
        assert!(k >= 1 && k <= self.data.len(), "k = {k} out of range");
        let mut heap = BinaryHeap::with_capacity(k);
        if k > 1 {
            self.search(0, q, self.data.point(q), k - 1, &mut heap);
        }
        let mut out = Vec::with_capacity(k);
        out.push((q, 0.0));
        out.extend(heap.into_sorted_vec().into_iter().map(|c| (c.id, c.dist)));
        out
    }

    fn search(
        &self,
        node: usize,
        q: PointId,
        qp: &[f64],
        m: usize,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        match self.nodes[node] {
            KdNode::Leaf { start, end } => {
                for &p in &self.order[start..end] {
                    if p == q {
                        continue;
                    }
                    let c = Candidate { dist: euclidean(qp, self.data.point(p)), id: p };
                    if heap.len() < m {
                        heap.push(c);
                    } else if c < *heap.peek().expect("non-empty heap") {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            KdNode::Split { dim, value, left, right } => {
                let diff = qp[dim] - value;
                let (near, far) = if diff <= 0.0 { (left, right) } else { (right, left) };
                self.search(near, q, qp, m, heap);
                let worst = heap.peek().map_or(f64::INFINITY, |c| c.dist);
                if heap.len() < m || diff.abs() <= worst {
                    self.search(far, q, qp, m, heap);
                }
            }
        }
    }
}

/// For every point, its `kmax` nearest neighbours and the matching core
/// distances `c_1(p) ..= c_kmax(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    kmax: usize,
    ids: Vec<PointId>,
    dists: Vec<f64>,
}

impl NeighborTable {
    /// Runs one `kmax`-NN query per point.
    pub fn build(data: &Dataset, kmax: usize) -> Result<Self> {
        if kmax == 0 || kmax > data.len() {
            return Err(invalid(format!(
                "kmax must be in 1..={}, got {kmax}",
                data.len()
            )));
        }
        let tree = KdTree::build(data);
        let n = data.len();
        let mut ids = vec![0; n * kmax];
        let mut dists = vec![0.0; n * kmax];
        ids.par_chunks_mut(kmax)
            .zip(dists.par_chunks_mut(kmax))
            .enumerate()
            .for_each(|(p, (id_row, dist_row))| {
                for (j, (id, dist)) in tree.knn(p, kmax).into_iter().enumerate() {
                    id_row[j] = id;
                    dist_row[j] = dist;
                }
            });
        Ok(NeighborTable { kmax, ids, dists })
    }

    /// Assembles a table from precomputed rows; used by the brute-force oracle.
    pub(crate) fn from_parts(kmax: usize, ids: Vec<PointId>, dists: Vec<f64>) -> Self {
        debug_assert_eq!(ids.len(), dists.len());
        NeighborTable { kmax, ids, dists }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn len(&self) -> usize {
        self.ids.len() / self.kmax
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// `rank` is 1-based.
    #[inline]
    pub fn neighbor(&self, p: PointId, rank: usize) -> PointId {
        debug_assert!(rank >= 1 && rank <= self.kmax);
        self.ids[p * self.kmax + rank - 1]
    }

    /// Core distance `c_rank(p)`; `rank` is 1-based.
    #[inline]
    pub fn core_dist(&self, p: PointId, rank: usize) -> f64 {
        debug_assert!(rank >= 1 && rank <= self.kmax);
        self.dists[p * self.kmax + rank - 1]
    }

    pub fn neighbors(&self, p: PointId) -> &[PointId] {
        &self.ids[p * self.kmax..(p + 1) * self.kmax]
    }

    pub fn core_dists(&self, p: PointId) -> &[f64] {
        &self.dists[p * self.kmax..(p + 1) * self.kmax]
    }

    /// Dumps `point_id,rank,neighbor_id,core_dist` rows.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "point_id,rank,neighbor_id,core_dist")?;
        for p in 0..self.len() {
            for rank in 1..=self.kmax {
                writeln!(
                    out,
                    "{p},{rank},{},{}",
                    self.neighbor(p, rank),
                    self.core_dist(p, rank)
                )?;
            }
        }
        out.flush()?;
        Ok(())
    }
}
