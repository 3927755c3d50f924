//! Comparators for the ellipse-clustering pipeline.
//!
//! - [`circle_pack_deploy`]: equal, disjoint circular cells on a hexagonal
//!   lattice with a fixed altitude and transmit power.
//! - [`brute_force_optimum`]: exhaustive search over user partitions for
//!   tiny instances, scored exactly like the pipeline.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::channel::{avg_path_loss_gain_free, dbm_to_mw, Beam, Environment, RadioConfig};
use crate::deployment::{
    beam_from_footprint, optimal_altitude, required_power, AltitudeBounds, DeploymentPlan,
    Position3, UavDeployment, DEFAULT_H_MAX,
};
use crate::error::{Error, Result};
use crate::geometry::{edge_distance, mvee, Ellipse, FitConfig, Point2};
use crate::scenario::{Region, Scenario};

pub const DEFAULT_BASELINE_ALTITUDE: f64 = 150.0;

/// Hard caps on the brute-force search.
pub const BRUTE_FORCE_MAX_USERS: usize = 10;
pub const BRUTE_FORCE_MAX_UAVS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CirclePackingConfig {
    pub num_uavs: usize,
    pub fixed_altitude: f64,
    pub fixed_power_dbm: f64,
    /// Equal half-widths; the footprint radius is `altitude · tan(θ)`.
    pub beam: Beam,
}

impl CirclePackingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_uavs == 0 || !(self.fixed_altitude > 0.0) || !self.fixed_power_dbm.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid circle-packing config {self:?}")));
        }
        if self.beam.theta1_deg != self.beam.theta2_deg {
            return Err(Error::InvalidArgument("circle packing needs equal half-widths".into()));
        }
        Ok(())
    }

    pub fn radius(&self) -> f64 {
        self.fixed_altitude * self.beam.theta1_deg.to_radians().tan()
    }

    /// Largest circles that still pack `num_uavs` times into `region`, at
    /// `altitude`, with the power that serves the circle edge at threshold.
    pub fn filling(
        region: &Region,
        num_uavs: usize,
        altitude: f64,
        env: &Environment,
        radio: &RadioConfig,
    ) -> Result<Self> {
        if num_uavs == 0 || !(altitude > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need at least one UAV at positive altitude, got {num_uavs} at {altitude}"
            )));
        }
        let radius = max_packing_radius(region, num_uavs);
        // the lattice is tangent at this radius; shave a hair so circles stay disjoint
        let radius = radius * (1.0 - 1e-9);
        let beam = Beam::circular((radius / altitude).atan().to_degrees())?;
        let fixed_power_dbm = required_power(altitude, radius, env, &beam, radio)?;
        Ok(Self { num_uavs, fixed_altitude: altitude, fixed_power_dbm, beam })
    }
}

/// A hexagonal lattice arrangement: `rows` rows of up to `cols` centers, odd
/// rows shifted by half a spacing.
#[derive(Clone, Copy, Debug)]
struct Lattice {
    rows: usize,
    cols: usize,
}

impl Lattice {
    fn candidates(n: usize) -> impl Iterator<Item = Lattice> {
        (1..=n).map(move |rows| Lattice { rows, cols: n.div_ceil(rows) })
    }

    /// Center-to-center extent in spacing units, `(horizontal, vertical)`.
    fn extent_units(&self) -> (f64, f64) {
        let shift = if self.rows > 1 { 0.5 } else { 0.0 };
        (
            (self.cols - 1) as f64 + shift,
            (self.rows - 1) as f64 * 3f64.sqrt() / 2.0,
        )
    }

    /// Largest radius of touching circles that fit the region.
    fn max_radius(&self, region: &Region) -> f64 {
        let (wu, hu) = self.extent_units();
        (region.width / (2.0 * wu + 2.0)).min(region.height / (2.0 * hu + 2.0))
    }

    /// Largest spacing with circles of `radius` inside the region.
    fn max_spacing(&self, region: &Region, radius: f64) -> f64 {
        let (wu, hu) = self.extent_units();
        let fit = |avail: f64, units: f64| if units > 0.0 { avail / units } else { f64::INFINITY };
        fit(region.width - 2.0 * radius, wu).min(fit(region.height - 2.0 * radius, hu))
    }
}

/// Largest equal radius for which [`hex_layout`] can place `n` disjoint circles.
pub fn max_packing_radius(region: &Region, n: usize) -> f64 {
    Lattice::candidates(n)
        .map(|l| l.max_radius(region))
        .fold(0.0, f64::max)
}

/// Centers of `n` disjoint circles of `radius` inside `region`, spread as far
/// apart as the best hexagonal lattice allows and centered in the region.
pub fn hex_layout(region: &Region, n: usize, radius: f64) -> Result<Vec<Point2>> {
    region.validate()?;
    if n == 0 || !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("cannot lay out {n} circles of radius {radius}")));
    }
    if 2.0 * radius > region.width.min(region.height) {
        return Err(Error::InfeasiblePacking(format!(
            "radius {radius:.2} m does not fit the region"
        )));
    }
    let (lattice, spacing) = Lattice::candidates(n)
        .map(|l| (l, l.max_spacing(region, radius)))
        .filter(|(_, s)| *s >= 2.0 * radius)
        .fold(None, |best: Option<(Lattice, f64)>, cand| match best {
            Some(b) if b.1 >= cand.1 => Some(b),
            _ => Some(cand),
        })
        .ok_or_else(|| {
            Error::InfeasiblePacking(format!(
                "{n} circles of radius {radius:.2} m do not fit a {}×{} m region",
                region.width, region.height
            ))
        })?;

    if spacing.is_infinite() {
        return Ok(vec![region.center()]);
    }
    let (wu, hu) = lattice.extent_units();
    let x0 = 0.5 * (region.width - wu * spacing);
    let y0 = 0.5 * (region.height - hu * spacing);
    let mut centers = Vec::with_capacity(n);
    'rows: for row in 0..lattice.rows {
        let shift = if row % 2 == 1 { 0.5 * spacing } else { 0.0 };
        for col in 0..lattice.cols {
            if centers.len() == n {
                break 'rows;
            }
            centers.push(Point2::new(
                x0 + shift + col as f64 * spacing,
                y0 + row as f64 * spacing * 3f64.sqrt() / 2.0,
            ));
        }
    }
    Ok(centers)
}

/// Fixed-altitude, fixed-power deployment on disjoint circular cells. Each
/// user joins the first circle containing it; users in no circle stay unserved.
pub fn circle_pack_deploy(scenario: &Scenario, cfg: &CirclePackingConfig) -> Result<DeploymentPlan> {
    cfg.validate()?;
    let radius = cfg.radius();
    let centers = hex_layout(&scenario.region, cfg.num_uavs, radius)?;
    let mut uavs: Vec<UavDeployment> = centers
        .iter()
        .map(|c| {
            Ok(UavDeployment {
                position: Position3 { x: c.x, y: c.y, h: cfg.fixed_altitude },
                orientation: 0.0,
                beam: cfg.beam,
                tx_power_dbm: cfg.fixed_power_dbm,
                footprint: Ellipse::circle(*c, radius)?,
                members: Vec::new(),
            })
        })
        .collect::<Result<_>>()?;
    for (u, p) in scenario.users.iter().enumerate() {
        if let Some(uav) = uavs.iter_mut().find(|uav| uav.footprint.contains(p)) {
            uav.members.push(u);
        }
    }
    Ok(DeploymentPlan::new(uavs, scenario.environment, scenario.radio))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BruteForceConfig {
    pub max_users: usize,
    pub max_uavs: usize,
    /// When set, altitudes come from a grid of this step instead of golden-section search.
    pub altitude_grid_step: Option<f64>,
    pub h_max: f64,
    pub fit: FitConfig,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        Self {
            max_users: BRUTE_FORCE_MAX_USERS,
            max_uavs: BRUTE_FORCE_MAX_UAVS,
            altitude_grid_step: None,
            h_max: DEFAULT_H_MAX,
            fit: FitConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BruteForceResult {
    /// Groups of user indices, each sorted, in order of first member.
    pub partition: Vec<Vec<usize>>,
    pub total_power_mw: f64,
    pub partitions_examined: usize,
}

/// Altitude minimizing gain-free averaged path loss on a uniform grid.
pub fn grid_altitude(
    edge_distance: f64,
    env: &Environment,
    bounds: &AltitudeBounds,
    radio: &RadioConfig,
    step: f64,
) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("grid step must be positive, got {step}")));
    }
    let steps = ((bounds.h_max - bounds.h_min) / step).floor() as usize;
    let mut best = (bounds.h_min, f64::INFINITY);
    for h in (0..=steps).map(|i| bounds.h_min + i as f64 * step).chain([bounds.h_max]) {
        let loss = avg_path_loss_gain_free(h, edge_distance, env, radio)?;
        if loss < best.1 {
            best = (h, loss);
        }
    }
    Ok(best.0)
}

/// Transmit power (mW) the pipeline would spend on one group of users.
fn group_power_mw(
    points: &[Point2],
    ellipse: &Ellipse,
    env: &Environment,
    radio: &RadioConfig,
    cfg: &BruteForceConfig,
) -> Result<f64> {
    let d_e = edge_distance(ellipse, points)?;
    let bounds = AltitudeBounds::for_footprint(ellipse, cfg.h_max)?;
    let h = match cfg.altitude_grid_step {
        Some(step) => grid_altitude(d_e, env, &bounds, radio, step)?,
        None => optimal_altitude(d_e, env, &bounds, radio)?,
    };
    let beam = beam_from_footprint(h, ellipse)?;
    Ok(dbm_to_mw(required_power(h, d_e, env, &beam, radio)?))
}

/// Restricted-growth strings of length `n` with at most `max_blocks` blocks,
/// in lexicographic order.
pub fn restricted_growth_strings(n: usize, max_blocks: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, n: usize, max_blocks: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let used = prefix.iter().max().map_or(0, |m| m + 1);
        for b in 0..=used.min(max_blocks - 1) {
            prefix.push(b);
            extend(prefix, n, max_blocks, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 && max_blocks > 0 {
        extend(&mut Vec::with_capacity(n), n, max_blocks, &mut out);
    }
    out
}

/// Minimum-total-power partition of `users` into at most `max_uavs` groups
/// whose fitted ellipses hold no foreign user.
pub fn brute_force_optimum(
    users: &[Point2],
    max_uavs: usize,
    env: &Environment,
    radio: &RadioConfig,
    cfg: &BruteForceConfig,
) -> Result<BruteForceResult> {
    let user_cap = cfg.max_users.min(BRUTE_FORCE_MAX_USERS);
    let uav_cap = cfg.max_uavs.min(BRUTE_FORCE_MAX_UAVS);
    if users.is_empty() {
        return Err(Error::NoPoints);
    }
    if users.len() > user_cap || max_uavs == 0 || max_uavs > uav_cap {
        return Err(Error::InvalidArgument(format!(
            "brute force limited to {user_cap} users and {uav_cap} UAVs, got {} and {max_uavs}",
            users.len()
        )));
    }

    // per-group results keyed by member bitmask; None marks an infeasible group
    let mut groups: HashMap<u32, Option<f64>> = HashMap::new();
    let mut evaluate_group = |mask: u32| -> Result<Option<f64>> {
        if let Some(v) = groups.get(&mask) {
            return Ok(*v);
        }
        let points: Vec<Point2> = (0..users.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| users[i])
            .collect();
        let ellipse = mvee(&points, &cfg.fit)?;
        let foreign = (0..users.len())
            .any(|i| mask & (1 << i) == 0 && ellipse.contains(&users[i]));
        let v = if foreign {
            None
        } else {
            Some(group_power_mw(&points, &ellipse, env, radio, cfg)?)
        };
        groups.insert(mask, v);
        Ok(v)
    };

    let strings = restricted_growth_strings(users.len(), max_uavs);
    let mut best: Option<(f64, &Vec<usize>)> = None;
    'partitions: for rgs in &strings {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut masks = vec![0u32; blocks];
        for (i, &b) in rgs.iter().enumerate() {
            masks[b] |= 1 << i;
        }
        let mut total = 0.0;
        for mask in masks {
            match evaluate_group(mask)? {
                Some(p) => total += p,
                None => continue 'partitions,
            }
        }
        if best.is_none_or(|(b, _)| total < b) {
            best = Some((total, rgs));
        }
    }
    let (total_power_mw, rgs) = best.ok_or_else(|| {
        Error::InfeasiblePacking("no partition yields disjoint ellipses".into())
    })?;
    let blocks = rgs.iter().max().map_or(0, |m| m + 1);
    let mut partition = vec![Vec::new(); blocks];
    for (i, &b) in rgs.iter().enumerate() {
        partition[b].push(i);
    }
    Ok(BruteForceResult { partition, total_power_mw, partitions_examined: strings.len() })
}
