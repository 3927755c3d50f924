//! Two-way k-means splits used to grow the cluster set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{centroid, Ellipse, Point2};
use crate::seed;

const MAX_LLOYD_ITERATIONS: usize = 100;

/// A two-way split, as indices into the input slice.
#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl Split {
    /// Distance between the centroids of the two parts.
    pub fn centroid_gap(&self, points: &[Point2]) -> f64 {
        let part = |idx: &[usize]| centroid(&idx.iter().map(|&i| points[i]).collect::<Vec<_>>());
        part(&self.first).distance(&part(&self.second))
    }
}

/// k-means with k = 2, or `None` when fewer than two distinct locations exist.
///
/// Initial centers are an approximate farthest pair: a start point drawn from
/// a ChaCha8 stream seeded by `seed`, the point farthest from it, and the point
/// farthest from that one.
pub fn split_cluster(points: &[Point2], seed: u64) -> Option<Split> {
    let n = points.len();
    if n < 2 || points.iter().all(|p| p == &points[0]) {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed::fold(seed, [n as u64]));
    let start = rng.random_range(0..n);
    let farthest = |from: usize| {
        let mut best = (from, -1.0);
        for (i, p) in points.iter().enumerate() {
            let d = p.distance_squared(&points[from]);
            if d > best.1 {
                best = (i, d);
            }
        }
        best.0
    };
    let a = farthest(start);
    let b = farthest(a);

    let mut centers = [points[a], points[b]];
    let mut labels: Vec<u8> = Vec::new();
    for _ in 0..MAX_LLOYD_ITERATIONS {
        let next: Vec<u8> = points
            .iter()
            .map(|p| u8::from(p.distance_squared(&centers[1]) < p.distance_squared(&centers[0])))
            .collect();
        let ones = next.iter().filter(|&&l| l == 1).count();
        if ones == 0 || ones == n {
            break;
        }
        if next == labels {
            break;
        }
        labels = next;
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<Point2> = points
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l as usize == c)
                .map(|(p, _)| *p)
                .collect();
            *center = centroid(&members);
        }
    }
    if labels.is_empty() {
        // the farthest pair itself never separated (cannot happen for distinct a, b)
        labels = (0..n).map(|i| u8::from(i == b)).collect();
    }
    let (first, second) = (0..n).partition(|&i| labels[i] == 0);
    Some(Split { first, second })
}

/// Centroid gap of the 2-means split over the full major-axis length of the
/// cluster's ellipse; `-∞` for unsplittable clusters.
pub fn normalized_distance(points: &[Point2], ellipse: &Ellipse, seed: u64) -> f64 {
    match split_cluster(points, seed) {
        Some(split) => split.centroid_gap(points) / (2.0 * ellipse.semi_axes().0),
        None => f64::NEG_INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{mvee, FitConfig};

    #[test]
    fn two_points_become_singletons() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(10.0, 0.0)];
        let s = split_cluster(&pts, 7).unwrap();
        let mut parts = [s.first.clone(), s.second.clone()];
        parts.sort();
        assert_eq!(parts, [vec![0], vec![1]]);
    }

    #[test]
    fn unsplittable_inputs() {
        assert!(split_cluster(&[Point2::new(1.0, 2.0)], 0).is_none());
        assert!(split_cluster(&[Point2::new(1.0, 2.0); 4], 0).is_none());
        let e = Ellipse::circle(Point2::new(1.0, 2.0), 1.0).unwrap();
        assert_eq!(normalized_distance(&[Point2::new(1.0, 2.0)], &e, 0), f64::NEG_INFINITY);
    }

    #[test]
    fn coincident_centroids_give_zero_distance() {
        // symmetric square: both 2-means parts are centered on the square center
        let pts = [
            Point2::new(-1.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(-1.0, 0.0),
            Point2::new(1.0, 0.0),
        ];
        let split = Split { first: vec![0, 1], second: vec![2, 3] };
        assert_eq!(split.centroid_gap(&pts), 0.0);
    }

    #[test]
    fn normalized_distance_for_two_blobs() {
        let mut pts = Vec::new();
        for i in 0..5 {
            let t = i as f64 * 1.3;
            pts.push(Point2::new(2.0 * t.cos(), 2.0 * t.sin()));
            pts.push(Point2::new(100.0 + 2.0 * t.cos(), 2.0 * t.sin()));
        }
        let cfg = FitConfig::default();
        let e = mvee(&pts, &cfg).unwrap();
        let d = normalized_distance(&pts, &e, 1);
        let gap = split_cluster(&pts, 1).unwrap().centroid_gap(&pts);
        assert!((gap - 100.0).abs() < 1e-9);
        assert!((d - 100.0 / (2.0 * e.semi_axes().0)).abs() < 1e-12);
        assert!(d > 0.0 && d < 1.0);
    }

    #[test]
    fn scale_invariance() {
        let pts: Vec<_> = (0..20)
            .map(|i| Point2::new((i * 37 % 41) as f64, (i * 11 % 13) as f64))
            .collect();
        let cfg = FitConfig { min_semi_axis: 1e-9, ..FitConfig::default() };
        let e = mvee(&pts, &cfg).unwrap();
        let d = normalized_distance(&pts, &e, 3);
        let scaled: Vec<_> = pts.iter().map(|p| Point2::new(3.7 * p.x, 3.7 * p.y)).collect();
        let es = mvee(&scaled, &cfg).unwrap();
        assert!((normalized_distance(&scaled, &es, 3) - d).abs() < 1e-6);
    }
}
