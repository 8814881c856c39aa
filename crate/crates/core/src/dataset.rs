//! Point datasets: CSV loading, writing, and a seeded Gaussian-blob generator.
//!
//! Every other module refers to points by their id, which is the 0-based row
//! index assigned here.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Error, Result};

/// Identifier of a point: its row index in the dataset.
pub type PointId = usize;

/// Immutable `n x d` matrix of finite coordinates, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    coords: Vec<f64>,
    n: usize,
    d: usize,
}

impl Dataset {
    /// Builds a dataset from row-major coordinates.
    pub fn from_flat(coords: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("dimensionality must be at least 1"));
        }
        if coords.len() % d != 0 {
            return Err(invalid(format!(
                "{} coordinates do not form rows of length {d}",
                coords.len()
            )));
        }
        let n = coords.len() / d;
        if n < 2 {
            return Err(invalid(format!("need at least 2 points, got {n}")));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!(
                "point {} has a non-finite coordinate in dimension {}",
                pos / d,
                pos % d
            )));
        }
        Ok(Dataset { coords, n, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut coords = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(invalid(format!(
                    "point {i} has {} coordinates, expected {d}",
                    row.len()
                )));
            }
            coords.extend_from_slice(row);
        }
        if rows.len() < 2 {
            return Err(invalid(format!("need at least 2 points, got {}", rows.len())));
        }
        Self::from_flat(coords, d)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: a dataset holds at least two points.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, id: PointId) -> &[f64] {
        &self.coords[id * self.d..(id + 1) * self.d]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean distance between two points.
    #[inline]
    pub fn distance(&self, a: PointId, b: PointId) -> f64 {
        euclidean(self.point(a), self.point(b))
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.d)
    }
}

/// Euclidean distance. Every distance in the crate goes through this function
/// so that equal pairs always produce bit-identical values.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum::<f64>()
        .sqrt()
}

/// Loads one point per row from a comma-separated file.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    parse_csv(&text, has_header, path)
}

pub(crate) fn parse_csv(text: &str, has_header: bool, path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut coords = Vec::new();
    let mut width = None;
    for record in reader.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                path: path.to_path_buf(),
                row,
                expected,
                found: record.len(),
            });
        }
        for (column, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::BadCell {
                path: path.to_path_buf(),
                row,
                column: column + 1,
                value: cell.to_string(),
            })?;
            coords.push(value);
        }
    }
    match width {
        None => Err(invalid(format!("{}: need at least 2 points, got 0", path.display()))),
        Some(d) => Dataset::from_flat(coords, d),
    }
}

/// Writes the dataset as headerless CSV. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for p in data.points() {
        let mut first = true;
        for x in p {
            if !first {
                out.write_all(b",")?;
            }
            first = false;
            write!(out, "{x}")?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Generated dataset together with the blob each point was drawn from.
#[derive(Debug, Clone)]
pub struct Blobs {
    pub data: Dataset,
    pub labels: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
}

/// Draws `n` points from `clusters` isotropic Gaussian blobs.
pub fn generate_blobs(n: usize, d: usize, clusters: usize, seed: u64) -> Result<Dataset> {
    generate_labeled_blobs(n, d, clusters, seed).map(|b| b.data)
}

/// Like [`generate_blobs`] but also returns the blob assignment.
///
/// Blob sizes differ by at most one (points are dealt round-robin, then
/// shuffled), so every blob is non-empty whenever `n >= clusters`. Blob
/// standard deviations vary in `[0.5, 1.5]` and centers are rejection-sampled
/// to sit at least eight units apart.
pub fn generate_labeled_blobs(n: usize, d: usize, clusters: usize, seed: u64) -> Result<Blobs> {
    if n < 2 {
        return Err(invalid(format!("need at least 2 points, got {n}")));
    }
    if d == 0 {
        return Err(invalid("dimensionality must be at least 1"));
    }
    if clusters == 0 {
        return Err(invalid("need at least one cluster"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let min_sep = 8.0;
    let mut half_width = 10.0 * (clusters as f64).powf(1.0 / d as f64).max(1.0);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(clusters);
    let mut attempts = 0;
    while centers.len() < clusters {
        let c: Vec<f64> = (0..d).map(|_| rng.random_range(-half_width..half_width)).collect();
        if centers.iter().all(|o| euclidean(o, &c) >= min_sep) {
            centers.push(c);
            attempts = 0;
        } else {
            attempts += 1;
            if attempts > 100 {
                half_width *= 1.5;
                attempts = 0;
            }
        }
    }
    let spreads: Vec<f64> = (0..clusters).map(|_| rng.random_range(0.5..1.5)).collect();

    let mut labels: Vec<usize> = (0..n).map(|i| i % clusters).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        labels.swap(i, j);
    }

    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let mut coords = Vec::with_capacity(n * d);
    for &label in &labels {
        for &mu in &centers[label] {
            coords.push(mu + spreads[label] * unit.sample(&mut rng));
        }
    }
    Ok(Blobs {
        data: Dataset::from_flat(coords, d)?,
        labels,
        centers,
    })
}
