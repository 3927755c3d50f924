//! Method dispatch shared by `deploy` and `sweep`.

use skycell::baseline::{
    brute_force_optimum, circle_pack_deploy, BruteForceConfig, CirclePackingConfig,
    BRUTE_FORCE_MAX_UAVS, BRUTE_FORCE_MAX_USERS, DEFAULT_BASELINE_ALTITUDE,
};
use skycell::clustering::ellipse_clustering;
use skycell::deployment::deploy;
use skycell::geometry::mvee;
use skycell::{AlgorithmTrace, Cluster, ClusterSet, DeploymentPlan, Scenario};

use crate::{CliError, Method};

/// Method-specific knobs.
#[derive(Clone, Copy, Debug, Default)]
pub struct PlanOptions {
    /// Circle count; `None` matches the ellipse pipeline's UAV count.
    pub num_uavs: Option<usize>,
    /// Circle altitude in meters; `None` uses the baseline default.
    pub altitude: Option<f64>,
    /// Group cap for the brute-force search.
    pub max_uavs: Option<usize>,
}

pub struct Planned {
    pub plan: DeploymentPlan,
    /// Present for the ellipse method.
    pub trace: Option<AlgorithmTrace>,
}

pub fn plan_ellipse(scenario: &Scenario, h_max: f64) -> Result<Planned, CliError> {
    let outcome = ellipse_clustering(&scenario.users, &scenario.clustering)?;
    let plan = deploy(&outcome.cluster_set, &scenario.environment, &scenario.radio, h_max)?;
    Ok(Planned { plan, trace: Some(outcome.trace) })
}

pub fn plan_circle(scenario: &Scenario, num_uavs: usize, altitude: Option<f64>) -> Result<Planned, CliError> {
    let cfg = CirclePackingConfig::filling(
        &scenario.region,
        num_uavs,
        altitude.unwrap_or(DEFAULT_BASELINE_ALTITUDE),
        &scenario.environment,
        &scenario.radio,
    )?;
    let plan = circle_pack_deploy(scenario, &cfg)?;
    Ok(Planned { plan, trace: None })
}

pub fn plan_brute(scenario: &Scenario, max_uavs: Option<usize>, h_max: f64) -> Result<Planned, CliError> {
    let max_uavs = max_uavs.unwrap_or(BRUTE_FORCE_MAX_UAVS);
    if scenario.users.len() > BRUTE_FORCE_MAX_USERS || max_uavs == 0 || max_uavs > BRUTE_FORCE_MAX_UAVS {
        return Err(CliError::Baseline(format!(
            "brute force handles at most {BRUTE_FORCE_MAX_USERS} users and {BRUTE_FORCE_MAX_UAVS} UAVs, \
             got {} users and {max_uavs} UAVs",
            scenario.users.len()
        )));
    }
    let cfg = BruteForceConfig { h_max, fit: scenario.clustering.fit, ..BruteForceConfig::default() };
    let best = brute_force_optimum(&scenario.users, max_uavs, &scenario.environment, &scenario.radio, &cfg)?;
    let clusters = best
        .partition
        .iter()
        .map(|members| {
            let points: Vec<_> = members.iter().map(|&u| scenario.users[u]).collect();
            Ok(Cluster { members: members.clone(), ellipse: mvee(&points, &cfg.fit)? })
        })
        .collect::<Result<Vec<_>, skycell::Error>>()?;
    let cs = ClusterSet { users: scenario.users.clone(), clusters };
    let plan = deploy(&cs, &scenario.environment, &scenario.radio, h_max)?;
    Ok(Planned { plan, trace: None })
}

pub fn plan(scenario: &Scenario, method: Method, opts: &PlanOptions, h_max: f64) -> Result<Planned, CliError> {
    match method {
        Method::Ellipse => plan_ellipse(scenario, h_max),
        Method::Circle => {
            let n = match opts.num_uavs {
                Some(n) => n,
                None => plan_ellipse(scenario, h_max)?.plan.uavs.len(),
            };
            plan_circle(scenario, n, opts.altitude)
        }
        Method::Brute => plan_brute(scenario, opts.max_uavs, h_max),
    }
}
