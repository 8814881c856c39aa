//! Mutual reachability distance and the lune predicate.
//!
//! Only the values `d(a, b)` and the stored core distances are used; nothing
//! here relies on properties of the Euclidean metric beyond symmetry and the
//! triangle inequality.

use crate::dataset::{Dataset, PointId};
use crate::error::{invalid, Result};
use crate::knn::NeighborTable;

/// Read-only view evaluating `mrd_mpts` over a dataset and its neighbour table.
#[derive(Debug, Clone, Copy)]
pub struct MetricView<'a> {
    data: &'a Dataset,
    table: &'a NeighborTable,
    mpts: usize,
}

impl<'a> MetricView<'a> {
    pub fn new(data: &'a Dataset, table: &'a NeighborTable, mpts: usize) -> Result<Self> {
        if mpts == 0 || mpts > table.kmax() {
            return Err(invalid(format!(
                "mpts must be in 1..={}, got {mpts}",
                table.kmax()
            )));
        }
        if table.len() != data.len() {
            return Err(invalid("neighbour table was built for a different dataset"));
        }
        Ok(MetricView { data, table, mpts })
    }

    /// View at the largest `mpts` the table supports.
    pub fn at_kmax(data: &'a Dataset, table: &'a NeighborTable) -> Self {
        MetricView { data, table, mpts: table.kmax() }
    }

    pub fn mpts(&self) -> usize {
        self.mpts
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn table(&self) -> &'a NeighborTable {
        self.table
    }

    #[inline]
    pub fn core(&self, p: PointId) -> f64 {
        self.table.core_dist(p, self.mpts)
    }

    /// `max{c(a), c(b), d(a, b)}` for distinct `a`, `b`.
    #[inline]
    pub fn mrd(&self, a: PointId, b: PointId) -> f64 {
        assert_ne!(a, b, "mutual reachability is only defined between distinct points");
        self.mrd_unchecked(a, b)
    }

    #[inline]
    pub(crate) fn mrd_unchecked(&self, a: PointId, b: PointId) -> f64 {
        self.core(a).max(self.core(b)).max(self.data.distance(a, b))
    }

    /// Whether `c` lies strictly inside `lune(a, b)`: it is closer to both
    /// endpoints than they are to each other. Ties keep the edge.
    #[inline]
    pub fn in_lune(&self, a: PointId, b: PointId, c: PointId) -> bool {
        assert!(a != b && a != c && b != c, "lune test needs three distinct points");
        self.in_lune_with(self.mrd_unchecked(a, b), a, b, c)
    }

    /// Lune test with `mrd(a, b)` already known.
    #[inline]
    pub(crate) fn in_lune_with(&self, w: f64, a: PointId, b: PointId, c: PointId) -> bool {
        // The core distance of c bounds both mrd(a, c) and mrd(b, c) from below.
        if self.core(c) >= w {
            return false;
        }
        self.mrd_unchecked(a, c) < w && self.mrd_unchecked(b, c) < w
    }

    /// Lune test with `mrd(a, b)` and the base distance `d(a, c)` already known
    /// (for instance from the neighbour table).
    #[inline]
    pub(crate) fn in_lune_given(&self, w: f64, a: PointId, b: PointId, c: PointId, d_ac: f64) -> bool {
        let cc = self.core(c);
        if cc >= w {
            return false;
        }
        self.core(a).max(cc).max(d_ac) < w && self.mrd_unchecked(b, c) < w
    }
}
