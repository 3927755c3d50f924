//! Agglomerative clustering with Ward linkage.
//!
//! The dendrogram is built with the nearest-neighbor-chain algorithm on
//! squared Euclidean distances (O(n²) time and memory) and updated with the
//! Lance–Williams recurrence. Cutting replays the merges in order of height.

use crate::error::{Error, Result};
use crate::geometry::Point2;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Merge {
    /// Smallest original index in each merged cluster.
    left: usize,
    right: usize,
    height: f64,
}

/// Full Ward dendrogram of a point set.
#[derive(Clone, Debug)]
pub struct Dendrogram {
    len: usize,
    merges: Vec<Merge>,
}

/// Condensed upper-triangular storage of pairwise values.
struct Condensed {
    n: usize,
    data: Vec<f64>,
}

impl Condensed {
    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.index(i, j)]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.index(i, j);
        self.data[k] = v;
    }
}

impl Dendrogram {
    pub fn build(points: &[Point2]) -> Self {
        let n = points.len();
        if n < 2 {
            return Self { len: n, merges: Vec::new() };
        }
        let mut dist = Condensed { n, data: vec![0.0; n * (n - 1) / 2] };
        for i in 0..n {
            for j in i + 1..n {
                dist.set(i, j, points[i].distance_squared(&points[j]));
            }
        }
        let mut size = vec![1usize; n];
        let mut active = vec![true; n];
        let mut chain: Vec<usize> = Vec::with_capacity(n);
        let mut merges = Vec::with_capacity(n - 1);

        while merges.len() < n - 1 {
            if chain.is_empty() {
                chain.push(active.iter().position(|&a| a).expect("an active cluster remains"));
            }
            let (a, b, height) = loop {
                let a = *chain.last().unwrap();
                let prev = chain.len().checked_sub(2).map(|k| chain[k]);
                let (mut best, mut best_d) = match prev {
                    Some(p) => (p, dist.get(a, p)),
                    None => (usize::MAX, f64::INFINITY),
                };
                for (j, _) in active.iter().enumerate().filter(|&(j, &live)| live && j != a) {
                    let d = dist.get(a, j);
                    if d < best_d {
                        best = j;
                        best_d = d;
                    }
                }
                if Some(best) == prev {
                    chain.pop();
                    chain.pop();
                    break (a, best, best_d);
                }
                chain.push(best);
            };

            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            let (sa, sb) = (size[keep] as f64, size[gone] as f64);
            for k in 0..n {
                if !active[k] || k == keep || k == gone {
                    continue;
                }
                let sk = size[k] as f64;
                let updated = ((sa + sk) * dist.get(k, keep) + (sb + sk) * dist.get(k, gone)
                    - sk * height)
                    / (sa + sb + sk);
                dist.set(k, keep, updated);
            }
            active[gone] = false;
            size[keep] += size[gone];
            merges.push(Merge { left: keep, right: gone, height });
        }
        // Ward heights are monotone, so height order is a valid merge order.
        merges.sort_by(|x, y| x.height.total_cmp(&y.height));
        Self { len: n, merges }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Labels for exactly `k` clusters, numbered by first appearance.
    pub fn cut(&self, k: usize) -> Result<Vec<usize>> {
        if k == 0 || k > self.len {
            return Err(Error::InvalidArgument(format!(
                "cluster count {k} outside 1..={}",
                self.len
            )));
        }
        let mut parent: Vec<usize> = (0..self.len).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for m in &self.merges[..self.len - k] {
            let (l, r) = (find(&mut parent, m.left), find(&mut parent, m.right));
            parent[r.max(l)] = r.min(l);
        }
        Ok(canonical_labels(
            &(0..self.len).map(|i| find(&mut parent, i)).collect::<Vec<_>>(),
        ))
    }
}

/// Renumbers labels 0, 1, 2, … in order of first appearance.
pub(crate) fn canonical_labels(raw: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    raw.iter()
        .map(|r| {
            let next = map.len();
            *map.entry(*r).or_insert(next)
        })
        .collect()
}

/// Ward-linkage labels for `k` clusters.
pub fn ward_linkage(points: &[Point2], k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > points.len() {
        return Err(Error::InvalidArgument(format!(
            "cluster count {k} outside 1..={}",
            points.len()
        )));
    }
    Dendrogram::build(points).cut(k)
}
