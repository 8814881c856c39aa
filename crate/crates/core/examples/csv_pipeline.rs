//! Loads points from a CSV file (or writes a generated one first), runs a
//! range of hierarchies and writes the spanning trees, dendrograms and self
//! edges next to it.
//!
//!     cargo run --release --example csv_pipeline -- points.csv 2 10 out/

use std::path::PathBuf;

use rng_hdbscan::{generate_blobs, load_csv, run_range, write_csv, GraphLevel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = PathBuf::from(args.get(3).map_or("csv_pipeline_out", String::as_str));
    std::fs::create_dir_all(&out)?;
    let input = match args.first() {
        Some(p) => PathBuf::from(p),
        None => {
            let p = out.join("points.csv");
            write_csv(&generate_blobs(500, 2, 3, 8)?, &p)?;
            p
        }
    };
    let k1 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let kmax = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10);

    let data = load_csv(&input, false)?;
    println!("loaded {} points in {} dimensions from {}", data.len(), data.dim(), input.display());
    let run = run_range(&data, k1, kmax, GraphLevel::RngStar)?;
    run.graph.write_csv(out.join("graph.csv"))?;
    for h in &run.hierarchies {
        let m = h.mpts();
        h.mst.write_csv(out.join(format!("mst_{m}.csv")))?;
        h.dendrogram.write_csv(out.join(format!("dendrogram_{m}.csv")))?;
        h.mst.write_self_edges_csv(out.join(format!("selfedges_{m}.csv")))?;
    }
    println!("wrote {} hierarchies to {}", run.hierarchies.len(), out.display());
    Ok(())
}
