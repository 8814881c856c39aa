//! HDBSCAN* hierarchies for every `mpts` in a range `k1..=kmax`, computed from
//! a single relative neighborhood graph under the mutual reachability
//! distance at `kmax`.
//!
//! The RNG under `mrd_kmax` contains, after reweighting, a minimum spanning
//! tree of the complete mutual reachability graph for every `mpts <= kmax`.
//! Building it once and spanning it per `mpts` replaces `kmax - k1 + 1`
//! quadratic MST computations with one graph construction and many cheap
//! sparse ones.
//!
//! ```
//! use rng_hdbscan::{generate_blobs, run_range, GraphLevel};
//!
//! let data = generate_blobs(300, 2, 3, 7).unwrap();
//! let run = run_range(&data, 1, 8, GraphLevel::RngStar).unwrap();
//! assert_eq!(run.hierarchies.len(), 8);
//! for h in &run.hierarchies {
//!     assert_eq!(h.dendrogram.merges.len(), data.len() - 1);
//! }
//! ```

pub mod bench;
pub mod cli;
pub mod dataset;
mod error;
pub mod graph;
pub mod hierarchy;
pub mod knn;
pub mod metric;
pub mod oracle;
pub mod pipeline;
pub mod rng;
mod union_find;
pub mod wspd;

pub use dataset::{generate_blobs, generate_labeled_blobs, load_csv, write_csv, Dataset, PointId};
pub use error::{Error, Result};
pub use graph::{Edge, WeightedGraph};
pub use hierarchy::{build_dendrogram, extend_with_self_edges, mst, reweight, Dendrogram, Merge, Mst};
pub use knn::{KdTree, NeighborTable};
pub use metric::MetricView;
pub use pipeline::{run_range, run_range_with, Hierarchy, RangeConfig, RangeRun, Timings};
pub use rng::{build_rng, build_rng_with, GraphLevel, RngOptions};
pub use union_find::UnionFind;
pub use wspd::{well_separated_pairs, SplitTree, WellSeparatedPair};
