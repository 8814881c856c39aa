//! Builds every hierarchy for mpts in 1..=kmax over labelled blobs, cuts
//! each one into `clusters` groups and reports how well the cut recovers the
//! generating blobs.
//!
//!     cargo run --release --example cluster_blobs -- 3000 4 5 16

use std::collections::HashMap;

use rng_hdbscan::{generate_labeled_blobs, run_range, GraphLevel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let arg = |i: usize, default: usize| args.get(i).copied().unwrap_or(default);
    let (n, d, clusters, kmax) = (arg(0, 3000), arg(1, 4), arg(2, 5), arg(3, 16));

    let blobs = generate_labeled_blobs(n, d, clusters, 7)?;
    let run = run_range(&blobs.data, 1, kmax, GraphLevel::RngStar)?;
    println!("{} graph edges shared by {} hierarchies", run.graph.edge_count(), run.hierarchies.len());
    println!("mpts  cut height   noise  purity");
    for h in &run.hierarchies {
        let merges = &h.dendrogram.merges;
        // Undo the top clusters-1 merges.
        let height = merges[n - clusters - 1].height;
        let labels = h.dendrogram.cut(height);
        let noise = labels.iter().filter(|l| l.is_none()).count();
        println!("{:>4}  {height:>10.4}  {noise:>6}  {:>6.3}", h.mpts(), purity(&labels, &blobs.labels));
    }
    Ok(())
}

/// Fraction of clustered points whose cluster's majority blob matches their own.
fn purity(labels: &[Option<usize>], truth: &[usize]) -> f64 {
    let mut counts: HashMap<usize, HashMap<usize, usize>> = HashMap::new();
    for (l, &t) in labels.iter().zip(truth) {
        if let Some(l) = l {
            *counts.entry(*l).or_default().entry(t).or_default() += 1;
        }
    }
    let clustered: usize = counts.values().flat_map(|c| c.values()).sum();
    let majority: usize = counts.values().map(|c| c.values().max().copied().unwrap_or(0)).sum();
    majority as f64 / clustered.max(1) as f64
}
