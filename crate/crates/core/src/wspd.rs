//! Fair-split tree and well-separated pair decomposition.
//!
//! Two node sets `A`, `B` are well separated when the gap between their
//! enclosing balls is at least `s` times the largest of both ball diameters
//! and every core distance (at `kmax`) inside `A ∪ B`. That bound caps every
//! mutual reachability distance within either set.

use rayon::prelude::*;

use crate::dataset::{euclidean, Dataset, PointId};
use crate::knn::NeighborTable;

pub type NodeId = usize;

/// Relative slack subtracted from ball gaps so that rounding never reports a
/// pair as separated when the exact gap falls short.
const GAP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SplitNode {
    start: usize,
    end: usize,
    radius: f64,
    max_core: f64,
    min_id: PointId,
    children: Option<(NodeId, NodeId)>,
}

impl SplitNode {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn children(&self) -> Option<(NodeId, NodeId)> {
        self.children
    }

    /// Radius of the enclosing ball: half the bounding box diagonal.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Largest `c_kmax` among the node's points.
    pub fn max_core(&self) -> f64 {
        self.max_core
    }

    pub fn min_id(&self) -> PointId {
        self.min_id
    }
}

/// Binary space partition built with the fair-split rule: halve the longest
/// side of the bounding box (lowest dimension wins ties).
#[derive(Debug, Clone)]
pub struct SplitTree {
    dim: usize,
    order: Vec<PointId>,
    nodes: Vec<SplitNode>,
    // per node: lo[dim], hi[dim]
    rects: Vec<f64>,
    centers: Vec<f64>,
}

impl SplitTree {
    pub fn build(data: &Dataset, table: &NeighborTable) -> Self {
        let n = data.len();
        let d = data.dim();
        let kmax = table.kmax();
        let mut tree = SplitTree {
            dim: d,
            order: (0..n).collect(),
            nodes: Vec::with_capacity(2 * n),
            rects: Vec::with_capacity(4 * n * d),
            centers: Vec::with_capacity(2 * n * d),
        };

        let root = tree.push_node(data, table, kmax, 0, n);
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            let (start, end) = (tree.nodes[id].start, tree.nodes[id].end);
            if end - start <= 1 {
                continue;
            }
            let mid = tree.split_range(data, id);
            let left = tree.push_node(data, table, kmax, start, mid);
            let right = tree.push_node(data, table, kmax, mid, end);
            tree.nodes[id].children = Some((left, right));
            stack.push(right);
            stack.push(left);
        }
        tree
    }

    fn push_node(
        &mut self,
        data: &Dataset,
        table: &NeighborTable,
        kmax: usize,
        start: usize,
        end: usize,
    ) -> NodeId {
        let d = self.dim;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        let mut max_core = 0.0f64;
        let mut min_id = PointId::MAX;
        for &p in &self.order[start..end] {
            for (k, &x) in data.point(p).iter().enumerate() {
                lo[k] = lo[k].min(x);
                hi[k] = hi[k].max(x);
            }
            max_core = max_core.max(table.core_dist(p, kmax));
            min_id = min_id.min(p);
        }
        let radius = 0.5 * euclidean(&lo, &hi);
        self.centers
            .extend(lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)));
        self.rects.extend_from_slice(&lo);
        self.rects.extend_from_slice(&hi);
        self.nodes.push(SplitNode {
            start,
            end,
            radius,
            max_core,
            min_id,
            children: None,
        });
        self.nodes.len() - 1
    }

    /// Reorders the node's points so both halves are contiguous and returns
    /// the split position.
    fn split_range(&mut self, data: &Dataset, id: NodeId) -> usize {
        let (start, end) = (self.nodes[id].start, self.nodes[id].end);
        let (lo, hi) = self.rect(id);
        let (axis, extent) = lo
            .iter()
            .zip(hi)
            .map(|(l, h)| h - l)
            .enumerate()
            .fold((0, 0.0), |best, (k, e)| if e > best.1 { (k, e) } else { best });
        let (lo, hi) = (lo[axis], hi[axis]);
        let range = &mut self.order[start..end];

        if extent > 0.0 {
            let cut = 0.5 * (lo + hi);
            range.sort_by(|&a, &b| {
                let side = |p: PointId| data.point(p)[axis] > cut;
                side(a).cmp(&side(b)).then(a.cmp(&b))
            });
            let mid = range.partition_point(|&p| data.point(p)[axis] <= cut);
            if mid > 0 && mid < range.len() {
                return start + mid;
            }
            // Rounding put the cut on a box face; fall back to a median split.
            range.sort_by(|&a, &b| data.point(a)[axis].total_cmp(&data.point(b)[axis]).then(a.cmp(&b)));
        } else {
            // All points coincide.
            range.sort_unstable();
        }
        start + range.len() / 2
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &SplitNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[SplitNode] {
        &self.nodes
    }

    pub fn points(&self, id: NodeId) -> &[PointId] {
        let n = &self.nodes[id];
        &self.order[n.start..n.end]
    }

    /// Bounding box as `(lo, hi)`.
    pub fn rect(&self, id: NodeId) -> (&[f64], &[f64]) {
        let r = &self.rects[2 * id * self.dim..2 * (id + 1) * self.dim];
        r.split_at(self.dim)
    }

    pub fn center(&self, id: NodeId) -> &[f64] {
        &self.centers[id * self.dim..(id + 1) * self.dim]
    }

    pub fn depth(&self) -> usize {
        let mut depth = 0;
        let mut stack = vec![(self.root(), 0)];
        while let Some((id, level)) = stack.pop() {
            depth = depth.max(level);
            if let Some((l, r)) = self.nodes[id].children {
                stack.push((l, level + 1));
                stack.push((r, level + 1));
            }
        }
        depth
    }

    /// Lower bound on the distance between any point of `a` and any point of
    /// `b`: the gap between their enclosing balls, clamped at zero.
    pub fn ball_gap(&self, a: NodeId, b: NodeId) -> f64 {
        let centers = euclidean(self.center(a), self.center(b));
        let (ra, rb) = (self.nodes[a].radius, self.nodes[b].radius);
        let gap = centers - ra - rb - GAP_SLACK * (centers + ra + rb);
        gap.max(0.0)
    }

    /// `max{diam(B_a), diam(B_b), max core in a ∪ b}`.
    pub fn separation_bound(&self, a: NodeId, b: NodeId) -> f64 {
        let (na, nb) = (&self.nodes[a], &self.nodes[b]);
        (2.0 * na.radius)
            .max(2.0 * nb.radius)
            .max(na.max_core)
            .max(nb.max_core)
    }

    pub fn is_well_separated(&self, a: NodeId, b: NodeId, s: f64) -> bool {
        self.ball_gap(a, b) >= s * self.separation_bound(a, b)
    }
}

/// Two disjoint node sets; `a` holds the smaller point id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WellSeparatedPair {
    pub a: NodeId,
    pub b: NodeId,
}

/// Emits the decomposition: every unordered pair of distinct points falls in
/// exactly one returned pair.
///
/// Two singleton nodes are always emitted even when they fail the separation
/// test, since neither can be split further. Output is sorted by the smallest
/// point id on each side.
pub fn well_separated_pairs(tree: &SplitTree, s: f64) -> Vec<WellSeparatedPair> {
    let mut pairs: Vec<WellSeparatedPair> = tree
        .pair_seeds()
        .into_par_iter()
        .flat_map_iter(|(l, r)| {
            let mut out = Vec::new();
            visit_pairs(tree, l, r, s, |p| out.push(p));
            out
        })
        .map(|p| {
            if tree.nodes[p.a].min_id <= tree.nodes[p.b].min_id {
                p
            } else {
                WellSeparatedPair { a: p.b, b: p.a }
            }
        })
        .collect();
    pairs.par_sort_unstable_by_key(|p| (tree.nodes[p.a].min_id, tree.nodes[p.b].min_id));
    pairs
}

impl SplitTree {
    /// Children of every internal node. The pairs found under different seeds
    /// are disjoint, so seeds can be processed independently.
    pub fn pair_seeds(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes.iter().filter_map(|n| n.children).collect()
    }
}

/// Calls `f` for every well-separated pair between the subtrees `a` and `b`.
pub fn visit_pairs(
    tree: &SplitTree,
    a: NodeId,
    b: NodeId,
    s: f64,
    mut f: impl FnMut(WellSeparatedPair),
) {
    assert!(s > 0.0, "separation factor must be positive");
    let mut stack = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        let (na, nb) = (&tree.nodes[a], &tree.nodes[b]);
        if (na.is_leaf() && nb.is_leaf()) || tree.is_well_separated(a, b, s) {
            f(WellSeparatedPair { a, b });
            continue;
        }
        let split_a = match (na.children, nb.children) {
            (None, _) => false,
            (_, None) => true,
            _ => na.radius > nb.radius || (na.radius == nb.radius && na.len() >= nb.len()),
        };
        if split_a {
            let (l, r) = na.children.expect("internal node");
            stack.push((l, b));
            stack.push((r, b));
        } else {
            let (l, r) = nb.children.expect("internal node");
            stack.push((a, l));
            stack.push((a, r));
        }
    }
}

/// Size summary for logging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct WspdStats {
    pub pair_count: usize,
    pub tree_depth: usize,
    pub tree_nodes: usize,
}

pub fn stats(tree: &SplitTree, pairs: &[WellSeparatedPair]) -> WspdStats {
    WspdStats {
        pair_count: pairs.len(),
        tree_depth: tree.depth(),
        tree_nodes: tree.nodes.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(rows: &[[f64; 2]], kmax: usize) -> (Dataset, NeighborTable) {
        let d = Dataset::from_rows(rows).unwrap();
        let t = NeighborTable::build(&d, kmax).unwrap();
        (d, t)
    }

    fn covered_pairs(tree: &SplitTree, pairs: &[WellSeparatedPair]) -> Vec<(PointId, PointId)> {
        let mut out = Vec::new();
        for p in pairs {
            for &x in tree.points(p.a) {
                for &y in tree.points(p.b) {
                    out.push((x.min(y), x.max(y)));
                }
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn line_splits_at_midpoint() {
        let (d, t) = setup(&[[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]], 1);
        let tree = SplitTree::build(&d, &t);
        let (l, r) = tree.node(tree.root()).children().unwrap();
        assert_eq!(tree.points(l), &[0, 1]);
        assert_eq!(tree.points(r), &[2]);
        assert_eq!(tree.nodes().len(), 5);
    }

    #[test]
    fn line_pairs_cover_each_point_pair_once() {
        let (d, t) = setup(&[[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]], 1);
        let tree = SplitTree::build(&d, &t);
        let pairs = well_separated_pairs(&tree, 1.0);
        assert_eq!(covered_pairs(&tree, &pairs), vec![(0, 1), (0, 2), (1, 2)]);
        let sets: Vec<_> = pairs
            .iter()
            .map(|p| (tree.points(p.a).to_vec(), tree.points(p.b).to_vec()))
            .collect();
        assert!(sets.contains(&(vec![0, 1], vec![2])));
        assert!(sets.contains(&(vec![0], vec![1])));
    }

    #[test]
    fn two_points_give_one_pair() {
        let (d, t) = setup(&[[0.0, 0.0], [5.0, 1.0]], 2);
        let tree = SplitTree::build(&d, &t);
        let pairs = well_separated_pairs(&tree, 1.0);
        assert_eq!(pairs.len(), 1);
        assert_eq!((tree.points(pairs[0].a), tree.points(pairs[0].b)), (&[0][..], &[1][..]));
    }

    #[test]
    fn identical_points_terminate() {
        let (d, t) = setup(&[[1.0, 1.0]; 9], 3);
        let tree = SplitTree::build(&d, &t);
        assert_eq!(tree.nodes().iter().filter(|n| n.is_leaf()).count(), 9);
        assert!(tree.nodes().iter().filter(|n| n.is_leaf()).all(|n| n.len() == 1));
        let pairs = well_separated_pairs(&tree, 1.0);
        assert_eq!(covered_pairs(&tree, &pairs).len(), 36);
    }

    #[test]
    fn radius_and_max_core_aggregate() {
        let (d, t) = setup(&[[0.0, 0.0], [1.0, 0.0], [3.0, 0.0], [3.0, 4.0]], 2);
        let tree = SplitTree::build(&d, &t);
        let root = tree.node(tree.root());
        assert_eq!(root.radius(), 2.5);
        let expected = (0..4).map(|p| t.core_dist(p, 2)).fold(0.0, f64::max);
        assert_eq!(root.max_core(), expected);
    }
}
