use std::path::PathBuf;

use clap::Args;
use skycell::scenario::save_scenario;
use skycell::{ClusteringConfig, Environment, PcpConfig, RadioConfig, Region, Scenario};

use crate::output::ensure_dir;
use crate::{CliError, GlobalArgs};

#[derive(Clone, Debug, Args)]
pub struct GenerateArgs {
    /// Number of scenario files to write.
    #[arg(long)]
    pub count: usize,
    /// Directory for the scenario files.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Region width in meters.
    #[arg(long, default_value_t = 1000.0)]
    pub width: f64,
    /// Region height in meters.
    #[arg(long, default_value_t = 1000.0)]
    pub height: f64,
    /// Cluster centers per square meter.
    #[arg(long, default_value_t = PcpConfig::default().parent_intensity)]
    pub parent_intensity: f64,
    /// Radius of each user cluster, meters.
    #[arg(long, default_value_t = PcpConfig::default().cluster_radius)]
    pub cluster_radius: f64,
    /// Mean users per cluster.
    #[arg(long, default_value_t = PcpConfig::default().mean_daughters)]
    pub mean_daughters: f64,
}

/// File name of the `index`-th generated scenario.
pub fn scenario_file_name(index: usize) -> String {
    format!("scenario_{index:04}.json")
}

/// Scenario `index` of a generated batch: PCP seed derived from the master seed.
pub fn build_scenario(global: &GlobalArgs, args: &GenerateArgs, index: usize) -> Result<Scenario, CliError> {
    let master = global.seed.unwrap_or(0);
    let pcp = PcpConfig {
        parent_intensity: args.parent_intensity,
        cluster_radius: args.cluster_radius,
        mean_daughters: args.mean_daughters,
        seed: skycell::seed::derive(master, index as u64),
    };
    let region = Region { width: args.width, height: args.height };
    let mut scenario = Scenario::generate(
        region,
        pcp,
        Environment::urban(),
        RadioConfig::default(),
        ClusteringConfig::default(),
    )?;
    // the master seed selects users; the clustering seed stays at its default
    let overrides = GlobalArgs { seed: None, ..global.clone() };
    overrides.apply(&mut scenario);
    scenario.validate()?;
    Ok(scenario)
}

pub fn run(global: &GlobalArgs, args: &GenerateArgs) -> Result<(), CliError> {
    if args.count == 0 {
        tracing::info!("count is 0; nothing to generate");
        return Ok(());
    }
    ensure_dir(&args.out_dir)?;
    for index in 0..args.count {
        let scenario = build_scenario(global, args, index)?;
        let path = args.out_dir.join(scenario_file_name(index));
        save_scenario(&path, &scenario)?;
        tracing::debug!(path = %path.display(), users = scenario.users.len(), "wrote scenario");
    }
    tracing::info!(count = args.count, dir = %args.out_dir.display(), "generated scenarios");
    Ok(())
}
