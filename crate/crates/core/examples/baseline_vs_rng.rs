//! Wall-clock comparison between one complete-graph Prim run per mpts and a
//! single shared graph reused for all of them.
//!
//!     cargo run --release --example baseline_vs_rng -- 4000 8 16

use std::time::Instant;

use rng_hdbscan::bench::time_baseline;
use rng_hdbscan::{generate_blobs, run_range, GraphLevel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let arg = |i: usize, default: usize| args.get(i).copied().unwrap_or(default);
    let (n, d, kmax) = (arg(0, 4000), arg(1, 8), arg(2, 16));

    let data = generate_blobs(n, d, 5, 1)?;
    let base = time_baseline(&data, kmax, None)?;
    println!("baseline: one hierarchy {:.3}s, all {kmax} {:.3}s", base.single_hierarchy_seconds(), base.total_seconds());
    for level in GraphLevel::ALL {
        let t = Instant::now();
        let run = run_range(&data, 1, kmax, level)?;
        let secs = t.elapsed().as_secs_f64();
        println!(
            "{level:>14}: all {kmax} in {secs:.3}s ({:.2}x one baseline hierarchy), {} edges",
            secs / base.single_hierarchy_seconds(),
            run.graph.edge_count()
        );
    }
    Ok(())
}
