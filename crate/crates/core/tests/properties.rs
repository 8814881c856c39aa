mod common;

use proptest::prelude::*;

use rng_hdbscan::oracle::{brute_knn, brute_neighbor_table, brute_rng, complete_graph_mst, OracleConfig};
use rng_hdbscan::wspd::{well_separated_pairs, SplitTree};
use rng_hdbscan::{
    build_dendrogram, build_rng, build_rng_with, generate_blobs, load_csv, mst, reweight, run_range, write_csv,
    Dataset, GraphLevel, KdTree, MetricView, NeighborTable, RngOptions,
};

/// Points with coordinates on a coarse grid (many ties and duplicates) or
/// continuous ones.
fn dataset(max_n: usize) -> impl Strategy<Value = Dataset> {
    (2usize..=4, 3usize..=max_n, any::<bool>()).prop_flat_map(|(d, n, coarse)| {
        let coord = if coarse {
            (0i32..5).prop_map(f64::from).boxed()
        } else {
            (-100.0f64..100.0).boxed()
        };
        prop::collection::vec(coord, n * d).prop_map(move |c| Dataset::from_flat(c, d).unwrap())
    })
}

fn with_kmax(max_n: usize) -> impl Strategy<Value = (Dataset, usize)> {
    dataset(max_n).prop_flat_map(|data| {
        let n = data.len();
        (Just(data), 1..=n.min(12))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn knn_matches_exhaustive_scan((data, kmax) in with_kmax(200)) {
        let tree = KdTree::build(&data);
        for q in 0..data.len() {
            for k in [1, 2.min(kmax), kmax] {
                prop_assert_eq!(tree.knn(q, k), brute_knn(&data, q, k));
            }
        }
        prop_assert_eq!(NeighborTable::build(&data, kmax).unwrap(), brute_neighbor_table(&data, kmax));
    }

    #[test]
    fn neighbor_table_invariants((data, kmax) in with_kmax(150)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        for p in 0..data.len() {
            prop_assert_eq!(t.neighbor(p, 1), p);
            prop_assert_eq!(t.core_dist(p, 1), 0.0);
            for j in 1..=kmax {
                prop_assert_eq!(t.core_dist(p, j), data.distance(p, t.neighbor(p, j)));
                if j < kmax {
                    prop_assert!(t.core_dist(p, j) <= t.core_dist(p, j + 1));
                }
            }
        }
    }

    #[test]
    fn wspd_covers_every_pair_once((data, kmax) in with_kmax(120)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        let tree = SplitTree::build(&data, &t);
        let pairs = well_separated_pairs(&tree, 1.0);
        let n = data.len();
        let total: usize = pairs.iter().map(|p| tree.node(p.a).len() * tree.node(p.b).len()).sum();
        prop_assert_eq!(total, n * (n - 1) / 2);
        let mut seen = vec![false; n * n];
        for p in &pairs {
            for &x in tree.points(p.a) {
                for &y in tree.points(p.b) {
                    let k = x.min(y) * n + x.max(y);
                    prop_assert!(!seen[k], "pair ({}, {}) covered twice", x, y);
                    seen[k] = true;
                }
            }
        }
    }

    #[test]
    fn wspd_pairs_are_separated((data, kmax) in with_kmax(120)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        let tree = SplitTree::build(&data, &t);
        for p in well_separated_pairs(&tree, 1.0) {
            if tree.node(p.a).is_leaf() && tree.node(p.b).is_leaf() {
                continue;
            }
            prop_assert!(tree.ball_gap(p.a, p.b) >= tree.separation_bound(p.a, p.b));
            // The gap really is a lower bound on cross distances.
            for &x in tree.points(p.a) {
                for &y in tree.points(p.b) {
                    prop_assert!(data.distance(x, y) >= tree.ball_gap(p.a, p.b));
                }
            }
        }
    }

    #[test]
    fn split_tree_node_invariants((data, kmax) in with_kmax(100)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        let tree = SplitTree::build(&data, &t);
        for id in 0..tree.nodes().len() {
            let node = tree.node(id);
            prop_assert_eq!(node.is_leaf(), node.len() == 1);
            let pts = tree.points(id);
            let max_core = pts.iter().map(|&p| t.core_dist(p, kmax)).fold(0.0, f64::max);
            prop_assert_eq!(node.max_core(), max_core);
            let (lo, hi) = tree.rect(id);
            let diag = lo.iter().zip(hi).map(|(l, h)| (h - l) * (h - l)).sum::<f64>().sqrt();
            prop_assert!((node.radius() - diag / 2.0).abs() <= 1e-12 * diag.max(1.0));
            if let Some((l, r)) = node.children() {
                let mut joined: Vec<_> = tree.points(l).iter().chain(tree.points(r)).copied().collect();
                joined.sort_unstable();
                let mut own = pts.to_vec();
                own.sort_unstable();
                prop_assert_eq!(joined, own);
            }
        }
    }

    #[test]
    fn larger_separation_never_reduces_pairs((data, kmax) in with_kmax(100), s in 1.0f64..4.0) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        let tree = SplitTree::build(&data, &t);
        prop_assert!(well_separated_pairs(&tree, s).len() >= well_separated_pairs(&tree, 1.0).len());
    }

    #[test]
    fn graph_levels_nest_and_match_oracle((data, kmax) in with_kmax(120)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        let exact = build_rng(&data, &t, GraphLevel::RngExact);
        let star = build_rng(&data, &t, GraphLevel::RngStar);
        let star_star = build_rng(&data, &t, GraphLevel::RngStarStar);
        prop_assert!(exact.is_subgraph_of(&star));
        prop_assert!(star.is_subgraph_of(&star_star));
        let brute = brute_rng(&OracleConfig::default(), &data, &t, kmax).unwrap();
        prop_assert_eq!(exact.edge_keys(), brute.edge_keys());
        for i in 1..kmax {
            prop_assert!(brute_rng(&OracleConfig::default(), &data, &t, i).unwrap().is_subgraph_of(&exact));
        }
    }

    #[test]
    fn core_shortcut_is_a_pure_optimization((data, kmax) in with_kmax(120)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        for level in [GraphLevel::RngStar, GraphLevel::RngExact] {
            let with = build_rng_with(&data, &t, &RngOptions::new(level)).graph;
            let without = build_rng_with(&data, &t, &RngOptions { core_shortcut: false, ..RngOptions::new(level) }).graph;
            prop_assert_eq!(with, without);
        }
    }

    #[test]
    fn rng_graph_weights_are_mrd_kmax((data, kmax) in with_kmax(80)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        let view = MetricView::at_kmax(&data, &t);
        for e in build_rng(&data, &t, GraphLevel::RngStarStar).edges {
            prop_assert!(e.u < e.v);
            prop_assert_eq!(e.w, view.mrd(e.u, e.v));
        }
    }

    #[test]
    fn reweighting_never_increases((data, kmax) in with_kmax(80)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        let g = build_rng(&data, &t, GraphLevel::RngStar);
        let mut prev = g.clone();
        for i in (1..kmax).rev() {
            let next = reweight(&g, &MetricView::new(&data, &t, i).unwrap()).unwrap();
            prop_assert_eq!(next.edge_keys(), g.edge_keys());
            prop_assert!(next.edges.iter().zip(&prev.edges).all(|(a, b)| a.w <= b.w));
            prev = next;
        }
    }

    #[test]
    fn prim_is_optimal_over_brute_rng((data, kmax) in with_kmax(80)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        for i in 1..=kmax {
            let base = complete_graph_mst(&data, &t, i).unwrap().total_weight();
            let via = mst(&brute_rng(&OracleConfig::default(), &data, &t, i).unwrap()).unwrap().total_weight();
            prop_assert!(common::rel_close(base, via, 1e-9), "{} vs {}", base, via);
        }
    }

    #[test]
    fn dendrogram_heights_grow_towards_the_root((data, kmax) in with_kmax(100)) {
        let t = NeighborTable::build(&data, kmax).unwrap();
        let tree = mst(&build_rng(&data, &t, GraphLevel::RngStar)).unwrap();
        let d = build_dendrogram(&tree);
        let n = data.len();
        prop_assert_eq!(d.merges.len(), n - 1);
        for m in &d.merges {
            for child in [m.left, m.right] {
                if child >= n {
                    prop_assert!(d.merges[child - n].height <= m.height);
                }
            }
        }
        prop_assert_eq!(d.merges.last().unwrap().size, n);
    }

    #[test]
    fn csv_round_trip(data in dataset(60)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_csv(&data, &path).unwrap();
        prop_assert_eq!(load_csv(&path, false).unwrap(), data);
    }
}

#[test]
fn hierarchy_at_fixed_mpts_ignores_kmax() {
    let data = generate_blobs(600, 3, 4, 21).unwrap();
    let small = run_range(&data, 2, 2, GraphLevel::RngStar).unwrap();
    let large = run_range(&data, 1, 128, GraphLevel::RngStar).unwrap();
    let at2 = large.hierarchies.iter().find(|h| h.mpts() == 2).unwrap();
    let mut a = small.hierarchies[0].dendrogram.heights();
    let mut b = at2.dendrogram.heights();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    assert_eq!(a, b);
}

#[test]
fn multi_range_matches_baseline_on_blobs() {
    let data = generate_blobs(400, 4, 3, 2).unwrap();
    let run = run_range(&data, 1, 10, GraphLevel::RngStarStar).unwrap();
    for h in &run.hierarchies {
        let base = complete_graph_mst(&data, &run.table, h.mpts()).unwrap();
        assert!(common::rel_close(h.mst.total_weight(), base.total_weight(), 1e-9));
    }
}
