//! Per-cluster UAV placement and plan evaluation.
//!
//! Each UAV hovers over its cluster's ellipse center. The altitude minimizes
//! the gain-free averaged path loss to the cell-edge user within
//! `[h_min, h_max]`; the beam is then chosen so the main-lobe footprint is
//! exactly the cluster ellipse, and the transmit power is the smallest that
//! puts the edge user at the SNR threshold.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    avg_path_loss, avg_path_loss_gain_free, dbm_to_mw, db_to_linear, linear_to_db, Beam,
    Environment, RadioConfig,
};
use crate::clustering::{first_intersection, ClusterSet};
use crate::error::{Error, Result};
use crate::geometry::{edge_distance, Ellipse, Point2};

/// Lowest elevation angle at which the LoS model is valid.
pub const MIN_ELEVATION_RAD: f64 = PI / 12.0;

/// Golden-section interval width at which the altitude search stops, meters.
pub const ALTITUDE_TOLERANCE_M: f64 = 0.5;
pub const ALTITUDE_MAX_ITERATIONS: usize = 200;

/// Slack on SNR comparisons against the threshold, dB.
pub const SNR_TOLERANCE_DB: f64 = 1e-9;

pub const DEFAULT_H_MAX: f64 = 1000.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AltitudeBounds {
    pub h_min: f64,
    pub h_max: f64,
}

impl AltitudeBounds {
    pub fn new(h_min: f64, h_max: f64) -> Result<Self> {
        if !(h_min > 0.0 && h_min <= h_max && h_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "invalid altitude bounds [{h_min}, {h_max}]"
            )));
        }
        Ok(Self { h_min, h_max })
    }

    /// `h_min = r₁·tan(π/12)` with `r₁` the footprint's semi-major axis.
    pub fn for_footprint(footprint: &Ellipse, h_max: f64) -> Result<Self> {
        Self::new(footprint.semi_axes().0 * MIN_ELEVATION_RAD.tan(), h_max)
    }
}

/// Argmin of a unimodal `f` on `[lo, hi]` by golden-section search.
pub fn golden_section_min<F>(f: F, lo: f64, hi: f64, tolerance: f64, max_iterations: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..max_iterations {
        if b - a <= tolerance {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Altitude minimizing the gain-free averaged path loss at horizontal
/// distance `edge_distance`.
///
/// Golden-section search over the bounds; when the result is not better than
/// both bounds, the better bound is returned instead.
pub fn optimal_altitude(
    edge_distance: f64,
    env: &Environment,
    bounds: &AltitudeBounds,
    radio: &RadioConfig,
) -> Result<f64> {
    if !(edge_distance >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "edge distance must be non-negative, got {edge_distance}"
        )));
    }
    let bounds = AltitudeBounds::new(bounds.h_min, bounds.h_max)?;
    let loss = |h: f64| {
        avg_path_loss_gain_free(h, edge_distance, env, radio).expect("altitude is positive")
    };
    let interior = golden_section_min(
        loss,
        bounds.h_min,
        bounds.h_max,
        ALTITUDE_TOLERANCE_M,
        ALTITUDE_MAX_ITERATIONS,
    );
    let candidates = [interior, bounds.h_min, bounds.h_max];
    Ok(candidates
        .into_iter()
        .map(|h| (h, loss(h)))
        .fold((interior, f64::INFINITY), |best, (h, l)| if l < best.1 { (h, l) } else { best })
        .0)
}

/// Half-beamwidths whose main-lobe footprint at altitude `altitude` is the
/// given ellipse: `Θᵢ = atan(rᵢ / H)`.
pub fn beam_from_footprint(altitude: f64, footprint: &Ellipse) -> Result<Beam> {
    if !(altitude > 0.0) {
        return Err(Error::InvalidArgument(format!("altitude must be positive, got {altitude}")));
    }
    let (major, minor) = footprint.semi_axes();
    Beam::new(
        (major / altitude).atan().to_degrees(),
        (minor / altitude).atan().to_degrees(),
    )
}

/// Transmit power (dBm) that puts a user at `edge_distance` exactly at the SNR threshold.
pub fn required_power(
    altitude: f64,
    edge_distance: f64,
    env: &Environment,
    beam: &Beam,
    radio: &RadioConfig,
) -> Result<f64> {
    let loss = avg_path_loss(altitude, edge_distance, env, beam, radio)?;
    Ok(radio.threshold_power_dbm() + linear_to_db(loss))
}

/// SNR (dB) of a main-lobe user at horizontal distance `horizontal`.
pub fn snr_db(
    tx_power_dbm: f64,
    altitude: f64,
    horizontal: f64,
    env: &Environment,
    beam: &Beam,
    radio: &RadioConfig,
) -> Result<f64> {
    let loss = avg_path_loss(altitude, horizontal, env, beam, radio)?;
    Ok(tx_power_dbm - linear_to_db(loss) - radio.noise_power_dbm())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub h: f64,
}

impl Position3 {
    pub fn ground(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UavDeployment {
    pub position: Position3,
    /// Azimuth of the footprint's major axis, radians in `[0, π)`.
    pub orientation: f64,
    pub beam: Beam,
    pub tx_power_dbm: f64,
    pub footprint: Ellipse,
    pub members: Vec<usize>,
}

impl UavDeployment {
    pub fn tx_power_mw(&self) -> f64 {
        dbm_to_mw(self.tx_power_dbm)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeploymentPlan {
    pub uavs: Vec<UavDeployment>,
    pub environment: Environment,
    pub radio: RadioConfig,
    pub total_power_mw: f64,
}

impl DeploymentPlan {
    pub fn new(uavs: Vec<UavDeployment>, environment: Environment, radio: RadioConfig) -> Self {
        let total_power_mw = uavs.iter().map(UavDeployment::tx_power_mw).sum();
        Self { uavs, environment, radio, total_power_mw }
    }

    /// UAV serving each of `num_users` users, `None` if unassigned.
    pub fn assignment(&self, num_users: usize) -> Result<Vec<Option<usize>>> {
        let mut out = vec![None; num_users];
        for (m, uav) in self.uavs.iter().enumerate() {
            for &u in &uav.members {
                let slot = out.get_mut(u).ok_or_else(|| {
                    Error::InvalidArgument(format!("plan references user {u} of {num_users}"))
                })?;
                if slot.is_some() {
                    return Err(Error::InvalidArgument(format!("user {u} assigned twice")));
                }
                *slot = Some(m);
            }
        }
        Ok(out)
    }
}

/// Places one UAV per cluster of a disjoint cluster set.
pub fn deploy(
    cs: &ClusterSet,
    env: &Environment,
    radio: &RadioConfig,
    h_max: f64,
) -> Result<DeploymentPlan> {
    env.validate()?;
    radio.validate()?;
    if let Some((first, second)) = first_intersection(cs) {
        return Err(Error::InterferenceRisk { first, second });
    }
    let uavs = cs
        .clusters
        .par_iter()
        .enumerate()
        .map(|(m, cluster)| {
            let points = cs.member_points(m);
            let footprint = cluster.ellipse;
            let d_e = edge_distance(&footprint, &points)?;
            let bounds = AltitudeBounds::for_footprint(&footprint, h_max)?;
            let h = optimal_altitude(d_e, env, &bounds, radio)?;
            let beam = beam_from_footprint(h, &footprint)?;
            let tx_power_dbm = required_power(h, d_e, env, &beam, radio)?;
            let center = footprint.center();
            Ok(UavDeployment {
                position: Position3 { x: center.x, y: center.y, h },
                orientation: footprint.orientation(),
                beam,
                tx_power_dbm,
                footprint,
                members: cluster.members.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DeploymentPlan::new(uavs, *env, *radio))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanMetrics {
    pub num_uavs: usize,
    pub num_users: usize,
    pub covered_users: usize,
    pub coverage_probability: f64,
    pub total_power_mw: f64,
    /// `-inf` for users outside their UAV's footprint or unassigned.
    pub per_user_snr_db: Vec<f64>,
    pub per_user_throughput_bps: Vec<f64>,
}

impl PlanMetrics {
    /// Empirical CDF of per-user throughput as `(throughput, probability)`,
    /// sorted ascending.
    pub fn throughput_cdf(&self) -> Vec<(f64, f64)> {
        let mut sorted = self.per_user_throughput_bps.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        sorted
            .into_iter()
            .enumerate()
            .map(|(i, t)| (t, (i + 1) as f64 / n))
            .collect()
    }
}

/// Per-user SNR and throughput under `plan`, with the coverage fraction.
///
/// A user is covered when it is inside its UAV's footprint and its SNR meets
/// the threshold. Throughput splits each UAV's bandwidth equally among its
/// members and applies the Shannon rate.
pub fn evaluate(plan: &DeploymentPlan, users: &[Point2]) -> Result<PlanMetrics> {
    let assignment = plan.assignment(users.len())?;
    let radio = &plan.radio;
    let mut snr = Vec::with_capacity(users.len());
    let mut throughput = Vec::with_capacity(users.len());
    let mut covered = 0;
    for (user, slot) in users.iter().zip(&assignment) {
        let served = slot
            .map(|m| &plan.uavs[m])
            .filter(|uav| uav.footprint.contains(user));
        let Some(uav) = served else {
            snr.push(f64::NEG_INFINITY);
            throughput.push(0.0);
            continue;
        };
        let r = user.distance(&uav.position.ground());
        let s = snr_db(uav.tx_power_dbm, uav.position.h, r, &plan.environment, &uav.beam, radio)?;
        if s >= radio.snr_threshold_db - SNR_TOLERANCE_DB {
            covered += 1;
        }
        let share = radio.bandwidth_hz / uav.members.len() as f64;
        snr.push(s);
        throughput.push(share * (1.0 + db_to_linear(s)).log2());
    }
    Ok(PlanMetrics {
        num_uavs: plan.uavs.len(),
        num_users: users.len(),
        covered_users: covered,
        coverage_probability: if users.is_empty() { 0.0 } else { covered as f64 / users.len() as f64 },
        total_power_mw: plan.total_power_mw,
        per_user_snr_db: snr,
        per_user_throughput_bps: throughput,
    })
}
