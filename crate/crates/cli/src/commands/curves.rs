use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use skycell::channel::{avg_path_loss_gain_free, linear_to_db, EnvironmentKind};
use skycell::deployment::{optimal_altitude, AltitudeBounds, MIN_ELEVATION_RAD};
use skycell::{Environment, RadioConfig};

use crate::output::{ensure_dir, write_csv};
use crate::{CliError, GlobalArgs};

#[derive(Clone, Debug, Args)]
pub struct CurvesArgs {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Altitude of the distance sweep, meters.
    #[arg(long, default_value_t = 300.0)]
    pub altitude: f64,
    /// Horizontal distance of the altitude sweep, meters.
    #[arg(long, default_value_t = 200.0)]
    pub horizontal: f64,
    /// Upper end of both sweeps, meters.
    #[arg(long, default_value_t = 1000.0)]
    pub max_range: f64,
    /// Sample spacing, meters.
    #[arg(long, default_value_t = 10.0)]
    pub step: f64,
}

/// Path loss (dB, no antenna gain) per environment at one sweep position.
#[derive(Clone, Debug, Serialize)]
struct LossRow {
    meters: f64,
    suburban_db: f64,
    urban_db: f64,
    dense_urban_db: f64,
    high_rise_db: f64,
}

#[derive(Clone, Debug, Serialize)]
struct AltitudeRow {
    edge_distance_m: f64,
    environment: EnvironmentKind,
    altitude_m: f64,
    path_loss_db: f64,
}

fn sweep(max: f64, step: f64, start: f64) -> Vec<f64> {
    let n = ((max - start) / step).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

fn loss_row(meters: f64, loss: impl Fn(&Environment) -> skycell::Result<f64>) -> skycell::Result<LossRow> {
    let db = |kind| loss(&Environment::preset(kind)).map(linear_to_db);
    Ok(LossRow {
        meters,
        suburban_db: db(EnvironmentKind::Suburban)?,
        urban_db: db(EnvironmentKind::Urban)?,
        dense_urban_db: db(EnvironmentKind::DenseUrban)?,
        high_rise_db: db(EnvironmentKind::HighRise)?,
    })
}

pub fn run(global: &GlobalArgs, args: &CurvesArgs) -> Result<(), CliError> {
    if !(args.step > 0.0 && args.max_range > 0.0 && args.altitude > 0.0 && args.horizontal >= 0.0) {
        return Err(CliError::Usage("curve ranges must be positive".into()));
    }
    let mut radio = RadioConfig::default();
    if let Some(b) = global.bandwidth_hz {
        radio.bandwidth_hz = b;
    }
    ensure_dir(&args.out)?;

    let by_distance = sweep(args.max_range, args.step, 0.0)
        .into_iter()
        .map(|r| loss_row(r, |env| avg_path_loss_gain_free(args.altitude, r, env, &radio)))
        .collect::<skycell::Result<Vec<_>>>()?;
    write_csv(&args.out.join("path_loss_vs_distance.csv"), &by_distance)?;

    let by_altitude = sweep(args.max_range, args.step, args.step)
        .into_iter()
        .map(|h| loss_row(h, |env| avg_path_loss_gain_free(h, args.horizontal, env, &radio)))
        .collect::<skycell::Result<Vec<_>>>()?;
    write_csv(&args.out.join("path_loss_vs_altitude.csv"), &by_altitude)?;

    let mut optimal = Vec::new();
    for kind in EnvironmentKind::ALL {
        let env = Environment::preset(kind);
        for d_e in sweep(args.max_range.min(global.h_max), args.step, args.step) {
            let bounds = AltitudeBounds::new(d_e * MIN_ELEVATION_RAD.tan(), global.h_max)?;
            let h = optimal_altitude(d_e, &env, &bounds, &radio)?;
            optimal.push(AltitudeRow {
                edge_distance_m: d_e,
                environment: kind,
                altitude_m: h,
                path_loss_db: linear_to_db(avg_path_loss_gain_free(h, d_e, &env, &radio)?),
            });
        }
    }
    write_csv(&args.out.join("optimal_altitude.csv"), &optimal)?;
    tracing::info!(dir = %args.out.display(), "curves written");
    Ok(())
}
