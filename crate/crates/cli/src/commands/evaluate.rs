use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use skycell::deployment::evaluate;
use skycell::scenario::load_scenario;
use skycell::{DeploymentPlan, PlanMetrics};

use crate::output::{ensure_dir, read_json, write_csv};
use crate::CliError;

#[derive(Clone, Debug, Args)]
pub struct EvaluateArgs {
    /// Plan JSON written by `deploy`.
    #[arg(long)]
    pub plan: PathBuf,
    /// Scenario the plan was made for.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// One row of metrics.csv.
#[derive(Clone, Debug, Serialize)]
pub struct MetricsRow {
    pub num_uavs: usize,
    pub num_users: usize,
    pub covered_users: usize,
    pub coverage_probability: f64,
    pub total_power_mw: f64,
    pub mean_throughput_bps: f64,
    pub min_snr_db: f64,
}

impl From<&PlanMetrics> for MetricsRow {
    fn from(m: &PlanMetrics) -> Self {
        let n = m.per_user_throughput_bps.len().max(1) as f64;
        Self {
            num_uavs: m.num_uavs,
            num_users: m.num_users,
            covered_users: m.covered_users,
            coverage_probability: m.coverage_probability,
            total_power_mw: m.total_power_mw,
            mean_throughput_bps: m.per_user_throughput_bps.iter().sum::<f64>() / n,
            min_snr_db: m.per_user_snr_db.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
struct CdfRow {
    throughput_bps: f64,
    cdf: f64,
}

pub fn run(args: &EvaluateArgs) -> Result<(), CliError> {
    let plan: DeploymentPlan = read_json(&args.plan)?;
    let scenario = load_scenario(&args.scenario)?;
    let metrics = evaluate(&plan, &scenario.users)?;
    ensure_dir(&args.out)?;
    write_csv(&args.out.join("metrics.csv"), &[MetricsRow::from(&metrics)])?;
    let cdf: Vec<CdfRow> = metrics
        .throughput_cdf()
        .into_iter()
        .map(|(throughput_bps, cdf)| CdfRow { throughput_bps, cdf })
        .collect();
    write_csv(&args.out.join("throughput_cdf.csv"), &cdf)?;
    tracing::info!(
        coverage = metrics.coverage_probability,
        total_power_mw = metrics.total_power_mw,
        "evaluation written"
    );
    Ok(())
}
