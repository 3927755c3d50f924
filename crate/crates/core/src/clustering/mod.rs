//! Ellipse clustering: partitions users into clusters whose minimum-area
//! ellipses share no user.
//!
//! Each outer iteration works on the users still unassigned (`U_cond`):
//!
//! 1. choose a cluster count `K_origin`, either by the silhouette of Ward
//!    partitions (phase 1) or as one more than the previous overlap count
//!    (phase 2, entered the first time every cluster overlaps and kept from
//!    then on);
//! 2. grow from one ellipse to `K_origin` by repeatedly splitting the cluster
//!    whose 2-means halves are farthest apart relative to its major axis;
//! 3. finalize the clusters whose ellipse holds no foreign user and send the
//!    users of the others back to `U_cond`.

mod kmeans;
mod silhouette;
mod ward;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use kmeans::{normalized_distance, split_cluster, Split};
pub use silhouette::{select_k, silhouette_index};
pub use ward::{ward_linkage, Dendrogram};

use crate::error::{Error, Result};
use crate::geometry::{mvee, Ellipse, FitConfig, Point2};
use crate::seed;

/// Extra cluster counts explored above `k_max` during silhouette selection.
pub const SILHOUETTE_BUFFER: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusteringConfig {
    pub k_max: usize,
    pub max_outer_iterations: usize,
    pub rng_seed: u64,
    pub fit: FitConfig,
}

impl Default for ClusteringConfig {
    fn default() -> Self {
        Self {
            k_max: 8,
            max_outer_iterations: 50,
            rng_seed: 0,
            fit: FitConfig::default(),
        }
    }
}

impl ClusteringConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 || self.max_outer_iterations == 0 {
            return Err(Error::InvalidArgument(format!("invalid clustering config {self:?}")));
        }
        self.fit.validate()
    }
}

/// One cluster: sorted user indices and the ellipse fitted to them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub members: Vec<usize>,
    pub ellipse: Ellipse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub users: Vec<Point2>,
    pub clusters: Vec<Cluster>,
}

impl ClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn member_points(&self, cluster: usize) -> Vec<Point2> {
        self.clusters[cluster].members.iter().map(|&i| self.users[i]).collect()
    }

    /// Cluster index of every user, `None` if unassigned.
    pub fn assignment(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.users.len()];
        for (c, cluster) in self.clusters.iter().enumerate() {
            for &u in &cluster.members {
                out[u] = Some(c);
            }
        }
        out
    }

    /// Every user belongs to exactly one cluster.
    pub fn is_partition(&self) -> bool {
        let mut seen = vec![false; self.users.len()];
        for &u in self.clusters.iter().flat_map(|c| &c.members) {
            if u >= seen.len() || seen[u] {
                return false;
            }
            seen[u] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of users lying inside two or more cluster ellipses.
    pub fn multiply_covered_users(&self) -> usize {
        self.users
            .iter()
            .filter(|u| self.clusters.iter().filter(|c| c.ellipse.contains(u)).count() > 1)
            .count()
    }
}

/// Indices of clusters whose ellipse shares a user with another cluster's ellipse.
///
/// Clusters `m` and `m'` intersect when some user of either one lies inside
/// both ellipses.
pub fn find_intersections(cs: &ClusterSet) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for (m, first) in cs.clusters.iter().enumerate() {
        for (offset, second) in cs.clusters[m + 1..].iter().enumerate() {
            let shared = first.members.iter().chain(&second.members).any(|&u| {
                let p = &cs.users[u];
                first.ellipse.contains(p) && second.ellipse.contains(p)
            });
            if shared {
                out.insert(m);
                out.insert(m + 1 + offset);
            }
        }
    }
    out
}

/// First pair of intersecting clusters, if any.
pub fn first_intersection(cs: &ClusterSet) -> Option<(usize, usize)> {
    for (m, first) in cs.clusters.iter().enumerate() {
        for (offset, second) in cs.clusters[m + 1..].iter().enumerate() {
            let shared = first.members.iter().chain(&second.members).any(|&u| {
                let p = &cs.users[u];
                first.ellipse.contains(p) && second.ellipse.contains(p)
            });
            if shared {
                return Some((m, m + 1 + offset));
            }
        }
    }
    None
}

/// Cluster under construction, with its cached best split.
struct Growing {
    members: Vec<usize>,
    ellipse: Ellipse,
    split: Option<(Split, f64)>,
}

impl Growing {
    fn new(users: &[Point2], members: Vec<usize>, cfg: &ClusteringConfig) -> Result<Self> {
        let points: Vec<Point2> = members.iter().map(|&i| users[i]).collect();
        let ellipse = mvee(&points, &cfg.fit)?;
        let salt = seed::fold(cfg.rng_seed, members.iter().map(|&m| m as u64));
        let split = split_cluster(&points, salt).map(|s| {
            let d = s.centroid_gap(&points) / (2.0 * ellipse.semi_axes().0);
            (s, d)
        });
        Ok(Self { members, ellipse, split })
    }

    fn score(&self) -> f64 {
        self.split.as_ref().map_or(f64::NEG_INFINITY, |(_, d)| *d)
    }
}

/// Grows the users in `subset` from one ellipse to `k_origin` clusters, or
/// fewer if every cluster becomes unsplittable first.
fn grow_subset(
    users: &[Point2],
    subset: Vec<usize>,
    k_origin: usize,
    cfg: &ClusteringConfig,
) -> Result<Vec<Cluster>> {
    let mut clusters = vec![Growing::new(users, subset, cfg)?];
    while clusters.len() < k_origin {
        let mut target = None;
        let mut best = f64::NEG_INFINITY;
        for (m, c) in clusters.iter().enumerate() {
            let d = c.score();
            if d > best {
                best = d;
                target = Some(m);
            }
        }
        let Some(t) = target else {
            break;
        };
        let (split, _) = clusters[t].split.take().expect("target has a split");
        let parent = std::mem::take(&mut clusters[t].members);
        let first = split.first.iter().map(|&i| parent[i]).collect();
        let second = split.second.iter().map(|&i| parent[i]).collect();
        clusters[t] = Growing::new(users, first, cfg)?;
        clusters.push(Growing::new(users, second, cfg)?);
    }
    Ok(clusters
        .into_iter()
        .map(|c| Cluster { members: c.members, ellipse: c.ellipse })
        .collect())
}

/// Splits `points` into up to `k_origin` clusters by repeated maximal-gap splits.
pub fn grow_to_k(points: &[Point2], k_origin: usize, cfg: &ClusteringConfig) -> Result<ClusterSet> {
    if points.is_empty() {
        return Err(Error::NoPoints);
    }
    if k_origin == 0 {
        return Err(Error::InvalidArgument("K_origin must be at least 1".into()));
    }
    let clusters = grow_subset(points, (0..points.len()).collect(), k_origin, cfg)?;
    Ok(ClusterSet { users: points.to_vec(), clusters })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    /// Cluster count from the silhouette of Ward partitions.
    Silhouette = 1,
    /// Cluster count forced to one more than the previous overlap count.
    Forced = 2,
}

/// One outer iteration of the clustering loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Users still unassigned when the iteration started.
    pub u_cond: usize,
    pub phase: Phase,
    pub k_origin: usize,
    /// Clusters actually produced (below `k_origin` only when splits ran out).
    pub clusters_formed: usize,
    /// Positions, among the clusters formed, of those sent back.
    pub intersecting: Vec<usize>,
    pub finalized: usize,
    /// Users still unassigned after the iteration.
    pub remaining: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmTrace {
    pub iterations: Vec<IterationRecord>,
}

impl AlgorithmTrace {
    /// `|U_cond|` at the start of each iteration followed by the final count.
    pub fn u_cond_sequence(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = self.iterations.iter().map(|r| r.u_cond).collect();
        if let Some(last) = self.iterations.last() {
            seq.push(last.remaining);
        }
        seq
    }

    pub fn converged(&self) -> bool {
        self.iterations.last().is_some_and(|r| r.remaining == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusteringOutcome {
    pub cluster_set: ClusterSet,
    pub trace: AlgorithmTrace,
}

impl ClusteringOutcome {
    /// Number of UAVs, one per final cluster.
    pub fn num_uavs(&self) -> usize {
        self.cluster_set.len()
    }
}

/// Partitions `users` into clusters whose ellipses share no user.
///
/// A cluster formed in the current iteration is also sent back when its
/// ellipse contains a user finalized in an earlier iteration, so the final
/// ellipses are pairwise disjoint over the whole user set.
pub fn ellipse_clustering(users: &[Point2], cfg: &ClusteringConfig) -> Result<ClusteringOutcome> {
    if users.is_empty() {
        return Err(Error::NoPoints);
    }
    if let Some(p) = users.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidPoint { x: p.x, y: p.y });
    }
    cfg.validate()?;

    let mut pending: Vec<usize> = (0..users.len()).collect();
    let mut finalized: Vec<Cluster> = Vec::new();
    let mut is_final = vec![false; users.len()];
    let mut trace = AlgorithmTrace::default();
    let mut phase = Phase::Silhouette;
    let mut k_max = cfg.k_max;

    for iteration in 1..=cfg.max_outer_iterations {
        if pending.is_empty() {
            break;
        }
        let k_origin = match phase {
            Phase::Silhouette => {
                let points: Vec<Point2> = pending.iter().map(|&i| users[i]).collect();
                select_k(&points, k_max + SILHOUETTE_BUFFER)
            }
            Phase::Forced => k_max + 1,
        };
        let u_cond = pending.len();
        let formed = grow_subset(users, std::mem::take(&mut pending), k_origin, cfg)?;

        let current = ClusterSet { users: users.to_vec(), clusters: formed };
        let mut intersecting = find_intersections(&current);
        for (m, c) in current.clusters.iter().enumerate() {
            let swallows_final = users
                .iter()
                .zip(&is_final)
                .any(|(p, &f)| f && c.ellipse.contains(p));
            if swallows_final {
                intersecting.insert(m);
            }
        }

        let formed_count = current.clusters.len();
        let mut finalized_now = 0;
        for (m, cluster) in current.clusters.into_iter().enumerate() {
            if intersecting.contains(&m) {
                pending.extend(cluster.members);
            } else {
                for &u in &cluster.members {
                    is_final[u] = true;
                }
                finalized.push(cluster);
                finalized_now += 1;
            }
        }
        pending.sort_unstable();

        trace.iterations.push(IterationRecord {
            iteration,
            u_cond,
            phase,
            k_origin,
            clusters_formed: formed_count,
            intersecting: intersecting.iter().copied().collect(),
            finalized: finalized_now,
            remaining: pending.len(),
        });
        tracing::debug!(
            iteration,
            u_cond,
            k_origin,
            formed = formed_count,
            overlapping = intersecting.len(),
            "clustering iteration"
        );

        k_max = intersecting.len();
        // phase 2 is sticky: falling back to the silhouette restarts the count climb
        let all_overlap = !intersecting.is_empty() && intersecting.len() == formed_count;
        phase = if all_overlap || phase == Phase::Forced {
            Phase::Forced
        } else {
            Phase::Silhouette
        };
    }

    if !pending.is_empty() {
        return Err(Error::NoConvergence { trace: Box::new(trace) });
    }
    Ok(ClusteringOutcome {
        cluster_set: ClusterSet { users: users.to_vec(), clusters: finalized },
        trace,
    })
}
