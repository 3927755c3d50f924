//! Sweep manifest: which scenarios to run, with which methods, where to write.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use skycell::{EnvironmentKind, PcpConfig, Region};

use crate::output::read_json;
use crate::{CliError, Method};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Overrides {
    pub environment: Option<EnvironmentKind>,
    pub bandwidth_hz: Option<f64>,
    pub snr_threshold_db: Option<f64>,
    pub h_max: Option<f64>,
    pub k_max: Option<usize>,
    pub clustering_seed: Option<u64>,
}

/// A batch run. Relative paths resolve against the manifest's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    /// Existing scenario files.
    #[serde(default)]
    pub scenarios: Vec<PathBuf>,
    /// One generated scenario per seed (the PCP seed).
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Process parameters for generated scenarios; the seed field is ignored.
    #[serde(default)]
    pub pcp: PcpConfig,
    #[serde(default)]
    pub region: Region,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    pub out_dir: PathBuf,
    #[serde(default)]
    pub overrides: Overrides,
    /// Fixed altitude of the circle baseline, meters.
    #[serde(default)]
    pub circle_altitude: Option<f64>,
    /// Group cap of the brute-force method.
    #[serde(default)]
    pub brute_max_uavs: Option<usize>,
}

fn default_methods() -> Vec<Method> {
    vec![Method::Ellipse]
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let mut manifest: RunManifest = read_json(path)?;
        let invalid = |reason: &str| CliError::Manifest { path: path.to_path_buf(), reason: reason.into() };
        if manifest.scenarios.is_empty() && manifest.seeds.is_empty() {
            return Err(invalid("needs at least one scenario path or seed"));
        }
        if manifest.methods.is_empty() {
            return Err(invalid("needs at least one method"));
        }
        let base = path.parent().unwrap_or(Path::new("."));
        for p in manifest.scenarios.iter_mut().chain([&mut manifest.out_dir]) {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(manifest)
    }
}
