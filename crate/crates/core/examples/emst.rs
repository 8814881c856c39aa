//! With kmax = 1 every core distance is zero, so the graph is the plain
//! relative neighbourhood graph and its MST is the Euclidean MST.
//!
//!     cargo run --release --example emst -- 2000 2

use rng_hdbscan::oracle::complete_graph_mst;
use rng_hdbscan::{build_rng, generate_blobs, mst, GraphLevel, NeighborTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (n, d) = (args.first().copied().unwrap_or(2000), args.get(1).copied().unwrap_or(2));

    let data = generate_blobs(n, d, 6, 11)?;
    let table = NeighborTable::build(&data, 1)?;
    let graph = build_rng(&data, &table, GraphLevel::RngExact);
    let tree = mst(&graph)?;
    let prim = complete_graph_mst(&data, &table, 1)?;
    println!("relative neighbourhood graph: {} edges (n = {n})", graph.edge_count());
    println!("MST over it:      {:.9}", tree.total_weight());
    println!("Prim on complete: {:.9}", prim.total_weight());
    let longest = tree.edges.iter().max_by(|a, b| a.w.total_cmp(&b.w)).expect("n >= 2");
    println!("longest edge {} - {} at {:.4}", longest.u, longest.v, longest.w);
    Ok(())
}
