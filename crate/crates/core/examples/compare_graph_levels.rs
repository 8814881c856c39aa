//! Edge counts of the three graph levels against the complete graph, with
//! the exact level checked against an exhaustive construction.
//!
//!     cargo run --release --example compare_graph_levels -- 1500 3 12

use rng_hdbscan::oracle::{brute_rng, OracleConfig};
use rng_hdbscan::{build_rng_with, generate_blobs, GraphLevel, NeighborTable, RngOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let arg = |i: usize, default: usize| args.get(i).copied().unwrap_or(default);
    let (n, d, kmax) = (arg(0, 1500), arg(1, 3), arg(2, 12));

    let data = generate_blobs(n, d, 4, 3)?;
    let table = NeighborTable::build(&data, kmax)?;
    let complete = n * (n - 1) / 2;
    println!("n={n} d={d} kmax={kmax}, complete graph has {complete} edges");
    for level in GraphLevel::ALL {
        let built = build_rng_with(&data, &table, &RngOptions::new(level));
        let m = built.graph.edge_count();
        println!(
            "{level:>14}: {m:>8} edges ({:.3}% of complete), {} SBCN candidates, {} WSPD pairs",
            100.0 * m as f64 / complete as f64,
            built.candidate_edges,
            built.wspd.pair_count
        );
    }
    if n <= OracleConfig::default().max_n {
        let exact = build_rng_with(&data, &table, &RngOptions::new(GraphLevel::RngExact)).graph;
        let brute = brute_rng(&OracleConfig::default(), &data, &table, kmax)?;
        println!("exact level equals exhaustive construction: {}", exact.edge_keys() == brute.edge_keys());
    }
    Ok(())
}
