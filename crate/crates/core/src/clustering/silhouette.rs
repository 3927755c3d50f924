//! Silhouette index and the silhouette-guided choice of cluster count.

use crate::error::{Error, Result};
use crate::geometry::Point2;

use super::ward::Dendrogram;

/// Mean silhouette over all points.
///
/// A point in a singleton cluster contributes 0, as does a point whose
/// intra- and nearest-cluster mean distances are both zero.
pub fn silhouette_index(points: &[Point2], labels: &[usize]) -> Result<f64> {
    let distances = DistanceMatrix::new(points);
    silhouette_with(&distances, labels)
}

pub(crate) struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub(crate) fn new(points: &[Point2]) -> Self {
        let n = points.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = points[i].distance(&points[j]);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Self { n, data }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

pub(crate) fn silhouette_with(distances: &DistanceMatrix, labels: &[usize]) -> Result<f64> {
    let n = distances.n;
    if labels.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} labels for {n} points",
            labels.len()
        )));
    }
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &l in labels {
        sizes[l] += 1;
    }
    let clusters = sizes.iter().filter(|&&s| s > 0).count();
    if clusters < 2 {
        return Err(Error::InvalidArgument(
            "silhouette needs at least two clusters".into(),
        ));
    }

    let mut sums = vec![0.0; k];
    let mut total = 0.0;
    for i in 0..n {
        let own = labels[i];
        if sizes[own] == 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        for (j, d) in distances.row(i).iter().enumerate() {
            sums[labels[j]] += d;
        }
        let intra = sums[own] / (sizes[own] - 1) as f64;
        let nearest = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = intra.max(nearest);
        if denom > 0.0 {
            total += (nearest - intra) / denom;
        }
    }
    Ok(total / n as f64)
}

/// Cluster count in `2..=min(k_limit, n)` maximizing the silhouette of the
/// Ward partition; ties go to the smaller count. Fewer than two points yield 1.
pub fn select_k(points: &[Point2], k_limit: usize) -> usize {
    if points.len() < 2 {
        return 1;
    }
    let upper = k_limit.max(2).min(points.len());
    let dendrogram = Dendrogram::build(points);
    let distances = DistanceMatrix::new(points);
    let mut best = (2, f64::NEG_INFINITY);
    for k in 2..=upper {
        let labels = dendrogram.cut(k).expect("k within range");
        let score = silhouette_with(&distances, &labels).expect("k ≥ 2 clusters");
        if score > best.1 {
            best = (k, score);
        }
    }
    best.0
}
