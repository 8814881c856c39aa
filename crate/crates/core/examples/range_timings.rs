//! Phase timings for one multi-hierarchy run over generated blobs.
//!
//!     cargo run --release --example range_timings -- 20000 8 32 rng-star

use rng_hdbscan::{generate_blobs, run_range_with, GraphLevel, RangeConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: usize| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let (n, d, kmax) = (arg(0, 20_000), arg(1, 8), arg(2, 32));
    let level: GraphLevel = args.get(3).map_or(Ok(GraphLevel::RngStar), |s| s.parse())?;

    let data = generate_blobs(n, d, 5, 20)?;
    let run = run_range_with(&data, &RangeConfig::new(1, kmax, level))?;
    let t = run.timings;
    println!("n={n} d={d} kmax={kmax} graph={level} threads={}", rayon::current_num_threads());
    println!("  core distances   {:>8.3}s", t.core_seconds);
    println!("  graph            {:>8.3}s", t.graph_seconds);
    println!("  {kmax:>3} MSTs         {:>8.3}s", t.mst_seconds);
    println!("  {kmax:>3} dendrograms  {:>8.3}s", t.hierarchy_seconds);
    println!(
        "  wspd pairs {}  depth {}  SBCN candidates {}  graph edges {}",
        run.wspd.pair_count,
        run.wspd.tree_depth,
        run.candidate_edges,
        run.graph.edge_count()
    );
    Ok(())
}
