#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rng_hdbscan::{generate_blobs, Dataset};

/// Random test instance: uniform cube, Gaussian blobs, or an integer grid
/// with many exact distance ties and duplicates.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub data: Dataset,
    pub kmax: usize,
}

pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(50..=500);
    let d = [2, 4, 8][rng.random_range(0..3)];
    let kmax = [2, 8, 16][rng.random_range(0..3)];
    let (kind, data) = match seed % 3 {
        0 => ("blobs", generate_blobs(n, d, rng.random_range(1..=6), seed).unwrap()),
        1 => {
            let coords = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
            ("uniform", Dataset::from_flat(coords, d).unwrap())
        }
        _ => {
            let coords = (0..n * d).map(|_| f64::from(rng.random_range(0..6i32))).collect();
            ("grid", Dataset::from_flat(coords, d).unwrap())
        }
    };
    Instance { label: format!("seed={seed} {kind} n={n} d={d} kmax={kmax}"), data, kmax }
}

pub fn uniform(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n * d).map(|_| rng.random_range(0.0..10.0)).collect();
    Dataset::from_flat(coords, d).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
