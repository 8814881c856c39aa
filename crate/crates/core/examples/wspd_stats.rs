//! Fair-split tree and well-separated pair decomposition under the mutual
//! reachability separation rule, for several separation factors.
//!
//!     cargo run --release --example wspd_stats -- 5000 3 8

use rng_hdbscan::wspd::{stats, well_separated_pairs, SplitTree};
use rng_hdbscan::{generate_blobs, NeighborTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let arg = |i: usize, default: usize| args.get(i).copied().unwrap_or(default);
    let (n, d, kmax) = (arg(0, 5000), arg(1, 3), arg(2, 8));

    let data = generate_blobs(n, d, 5, 4)?;
    let table = NeighborTable::build(&data, kmax)?;
    let tree = SplitTree::build(&data, &table);
    let root = tree.node(tree.root());
    println!("split tree: {} nodes, depth {}, root radius {:.3}", tree.nodes().len(), tree.depth(), root.radius());
    for s in [1.0, 1.5, 2.0, 4.0] {
        let pairs = well_separated_pairs(&tree, s);
        let st = stats(&tree, &pairs);
        let covered: usize = pairs.iter().map(|p| tree.node(p.a).len() * tree.node(p.b).len()).sum();
        println!("s = {s:<3}: {:>8} pairs ({:.1} per point), covering {covered} point pairs", st.pair_count, st.pair_count as f64 / n as f64);
    }
    Ok(())
}
