use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;
use skycell::deployment::evaluate;
use skycell::scenario::load_scenario;
use skycell::{ClusteringConfig, Environment, PcpConfig, Scenario};

use super::planning::{plan, plan_circle, plan_ellipse, PlanOptions};
use crate::manifest::RunManifest;
use crate::output::{ensure_dir, write_csv};
use crate::{CliError, GlobalArgs, Method};

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    /// JSON run manifest.
    #[arg(long)]
    pub manifest: PathBuf,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunRow {
    pub scenario: String,
    pub method: Method,
    pub status: &'static str,
    pub num_users: usize,
    pub num_uavs: Option<usize>,
    pub total_power_mw: Option<f64>,
    pub coverage_probability: Option<f64>,
    pub iterations: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AggregateRow {
    pub method: Method,
    pub runs: usize,
    pub succeeded: usize,
    pub no_convergence: usize,
    pub mean_power_mw: Option<f64>,
    pub median_power_mw: Option<f64>,
    pub mean_coverage: Option<f64>,
    pub mean_uavs: Option<f64>,
    pub mean_iterations: Option<f64>,
    pub max_iterations: Option<usize>,
}

enum Source {
    File(PathBuf),
    Seed(u64),
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::File(p) => p.display().to_string(),
            Source::Seed(s) => format!("seed:{s}"),
        }
    }

    fn load(&self, manifest: &RunManifest) -> Result<Scenario, CliError> {
        Ok(match self {
            Source::File(p) => load_scenario(p)?,
            Source::Seed(seed) => Scenario::generate(
                manifest.region,
                PcpConfig { seed: *seed, ..manifest.pcp },
                Environment::urban(),
                Default::default(),
                ClusteringConfig::default(),
            )?,
        })
    }
}

fn prepare(source: &Source, manifest: &RunManifest, global: &GlobalArgs) -> Result<Scenario, CliError> {
    let mut scenario = source.load(manifest)?;
    let o = &manifest.overrides;
    let from_manifest = GlobalArgs {
        seed: o.clustering_seed,
        env: o.environment,
        bandwidth_hz: o.bandwidth_hz,
        snr_threshold_db: o.snr_threshold_db,
        k_max: o.k_max,
        ..global.clone()
    };
    from_manifest.apply(&mut scenario);
    global.apply(&mut scenario);
    scenario.validate()?;
    Ok(scenario)
}

fn row(label: &str, method: Method, scenario: &Scenario, result: Result<(usize, f64, f64, Option<usize>), &CliError>) -> RunRow {
    let mut r = RunRow {
        scenario: label.to_string(),
        method,
        status: "ok",
        num_users: scenario.users.len(),
        num_uavs: None,
        total_power_mw: None,
        coverage_probability: None,
        iterations: None,
    };
    match result {
        Ok((uavs, power, coverage, iterations)) => {
            r.num_uavs = Some(uavs);
            r.total_power_mw = Some(power);
            r.coverage_probability = Some(coverage);
            r.iterations = iterations;
        }
        Err(e) => {
            r.status = match e {
                CliError::Core(skycell::Error::NoConvergence { trace }) => {
                    r.iterations = Some(trace.iterations.len());
                    "no-convergence"
                }
                CliError::Baseline(_) | CliError::Core(skycell::Error::InfeasiblePacking(_)) => "infeasible",
                _ => "error",
            };
            tracing::warn!(scenario = label, method = method.as_str(), error = %e, "run failed");
        }
    }
    r
}

fn run_scenario(source: &Source, manifest: &RunManifest, global: &GlobalArgs) -> Result<Vec<RunRow>, CliError> {
    let scenario = prepare(source, manifest, global)?;
    let label = source.label();
    let h_max = manifest.overrides.h_max.unwrap_or(global.h_max);
    let needs_ellipse = manifest.methods.iter().any(|m| matches!(m, Method::Ellipse | Method::Circle));
    let ellipse = needs_ellipse.then(|| plan_ellipse(&scenario, h_max));
    let score = |planned: &super::planning::Planned| -> Result<(usize, f64, f64, Option<usize>), CliError> {
        let m = evaluate(&planned.plan, &scenario.users)?;
        Ok((m.num_uavs, m.total_power_mw, m.coverage_probability, planned.trace.as_ref().map(|t| t.iterations.len())))
    };

    let mut rows = Vec::with_capacity(manifest.methods.len());
    for &method in &manifest.methods {
        let result = match (method, &ellipse) {
            (Method::Ellipse, Some(Ok(p))) => score(p),
            (Method::Ellipse, Some(Err(e))) => {
                rows.push(row(&label, method, &scenario, Err(e)));
                continue;
            }
            (Method::Circle, Some(Ok(p))) => {
                plan_circle(&scenario, p.plan.uavs.len(), manifest.circle_altitude).and_then(|c| score(&c))
            }
            (Method::Circle, Some(Err(e))) => {
                rows.push(row(&label, method, &scenario, Err(e)));
                continue;
            }
            _ => {
                let opts = PlanOptions { max_uavs: manifest.brute_max_uavs, ..PlanOptions::default() };
                plan(&scenario, method, &opts, h_max).and_then(|p| score(&p))
            }
        };
        rows.push(row(&label, method, &scenario, result.as_ref().map(|v| *v)));
    }
    Ok(rows)
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn median(values: &[f64]) -> Option<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(v[n / 2]),
        _ => Some(0.5 * (v[n / 2 - 1] + v[n / 2])),
    }
}

pub fn aggregate(methods: &[Method], rows: &[RunRow]) -> Vec<AggregateRow> {
    methods
        .iter()
        .map(|&method| {
            let mine: Vec<&RunRow> = rows.iter().filter(|r| r.method == method).collect();
            let ok: Vec<&&RunRow> = mine.iter().filter(|r| r.status == "ok").collect();
            let power: Vec<f64> = ok.iter().filter_map(|r| r.total_power_mw).collect();
            let coverage: Vec<f64> = ok.iter().filter_map(|r| r.coverage_probability).collect();
            let uavs: Vec<f64> = ok.iter().filter_map(|r| r.num_uavs.map(|n| n as f64)).collect();
            let iterations: Vec<usize> = mine.iter().filter_map(|r| r.iterations).collect();
            AggregateRow {
                method,
                runs: mine.len(),
                succeeded: ok.len(),
                no_convergence: mine.iter().filter(|r| r.status == "no-convergence").count(),
                mean_power_mw: mean(&power),
                median_power_mw: median(&power),
                mean_coverage: mean(&coverage),
                mean_uavs: mean(&uavs),
                mean_iterations: mean(&iterations.iter().map(|&i| i as f64).collect::<Vec<_>>()),
                max_iterations: iterations.iter().copied().max(),
            }
        })
        .collect()
}

pub fn run(global: &GlobalArgs, args: &SweepArgs) -> Result<(), CliError> {
    let manifest = RunManifest::load(&args.manifest)?;
    let sources: Vec<Source> = manifest
        .scenarios
        .iter()
        .cloned()
        .map(Source::File)
        .chain(manifest.seeds.iter().copied().map(Source::Seed))
        .collect();

    let per_scenario = sources
        .par_iter()
        .map(|s| run_scenario(s, &manifest, global))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<RunRow> = per_scenario.into_iter().flatten().collect();
    let summary = aggregate(&manifest.methods, &rows);

    ensure_dir(&manifest.out_dir)?;
    write_csv(&manifest.out_dir.join("per_scenario.csv"), &rows)?;
    write_csv(&manifest.out_dir.join("aggregate.csv"), &summary)?;
    for s in &summary {
        tracing::info!(
            method = s.method.as_str(),
            runs = s.runs,
            mean_power_mw = s.mean_power_mw,
            max_iterations = s.max_iterations,
            "sweep summary"
        );
    }

    let failed = rows.iter().filter(|r| r.status == "no-convergence").count();
    if failed > 0 {
        return Err(CliError::SweepNoConvergence { failed, total: rows.len() });
    }
    Ok(())
}
