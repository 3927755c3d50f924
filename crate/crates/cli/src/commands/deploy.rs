use std::path::PathBuf;

use clap::Args;
use skycell::scenario::load_scenario;

use super::planning::{plan, PlanOptions};
use crate::output::{ensure_dir, write_json};
use crate::{CliError, GlobalArgs, Method};

#[derive(Clone, Debug, Args)]
pub struct DeployArgs {
    /// Scenario JSON file.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Circle count for `--method circle`; defaults to the ellipse plan's UAV count.
    #[arg(long)]
    pub num_uavs: Option<usize>,
    /// Fixed altitude for `--method circle`, meters.
    #[arg(long)]
    pub altitude: Option<f64>,
    /// Group cap for `--method brute`.
    #[arg(long)]
    pub max_uavs: Option<usize>,
}

pub fn run(global: &GlobalArgs, args: &DeployArgs) -> Result<(), CliError> {
    let mut scenario = load_scenario(&args.scenario)?;
    global.apply(&mut scenario);
    scenario.validate()?;
    ensure_dir(&args.out)?;

    let opts = PlanOptions { num_uavs: args.num_uavs, altitude: args.altitude, max_uavs: args.max_uavs };
    let planned = match plan(&scenario, global.method, &opts, global.h_max) {
        Err(CliError::Core(skycell::Error::NoConvergence { trace })) if global.method == Method::Ellipse => {
            write_json(&args.out.join("trace.json"), &trace)?;
            return Err(skycell::Error::NoConvergence { trace }.into());
        }
        other => other?,
    };
    write_json(&args.out.join("plan.json"), &planned.plan)?;
    if let Some(trace) = &planned.trace {
        write_json(&args.out.join("trace.json"), trace)?;
    }
    tracing::info!(
        method = global.method.as_str(),
        uavs = planned.plan.uavs.len(),
        total_power_mw = planned.plan.total_power_mw,
        "deployment written"
    );
    Ok(())
}
