//! User scenarios: Matérn cluster process generation and the JSON scenario file.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::channel::{Environment, RadioConfig};
use crate::clustering::ClusteringConfig;
use crate::error::{Error, Result};
use crate::geometry::Point2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub width: f64,
    pub height: f64,
}

impl Default for Region {
    fn default() -> Self {
        Self { width: 1000.0, height: 1000.0 }
    }
}

impl Region {
    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Closed rectangle `[0, width] × [0, height]`.
    pub fn contains(&self, p: &Point2) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * self.width, 0.5 * self.height)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid region {self:?}")))
        }
    }
}

/// Matérn cluster process parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PcpConfig {
    /// Parent points per square meter.
    pub parent_intensity: f64,
    pub cluster_radius: f64,
    pub mean_daughters: f64,
    pub seed: u64,
}

impl Default for PcpConfig {
    fn default() -> Self {
        Self {
            parent_intensity: 9e-6,
            cluster_radius: 80.0,
            mean_daughters: 36.0,
            seed: 0,
        }
    }
}

impl PcpConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.parent_intensity, self.cluster_radius, self.mean_daughters];
        if positive.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid PCP config {self:?}")))
        }
    }
}

/// One Matérn cluster process realization over `region`.
///
/// Parents are Poisson with mean `intensity · area` and uniform over the
/// region; each parent gets Poisson(`mean_daughters`) offspring uniform in a
/// disk of `cluster_radius`. Offspring outside the region are dropped. The
/// random stream is ChaCha8 seeded with `cfg.seed`.
pub fn generate_pcp(region: &Region, cfg: &PcpConfig) -> Result<Vec<Point2>> {
    region.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let parent_count = poisson(&mut rng, cfg.parent_intensity * region.area())?;
    let daughters = Poisson::new(cfg.mean_daughters)
        .map_err(|e| Error::InvalidArgument(format!("daughter mean: {e}")))?;
    let mut users = Vec::new();
    for _ in 0..parent_count {
        let parent = Point2::new(
            rng.random::<f64>() * region.width,
            rng.random::<f64>() * region.height,
        );
        let count = daughters.sample(&mut rng) as u64;
        for _ in 0..count {
            let r = cfg.cluster_radius * rng.random::<f64>().sqrt();
            let t = 2.0 * PI * rng.random::<f64>();
            let p = Point2::new(parent.x + r * t.cos(), parent.y + r * t.sin());
            if region.contains(&p) {
                users.push(p);
            }
        }
    }
    Ok(users)
}

fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> Result<u64> {
    Ok(Poisson::new(mean)
        .map_err(|e| Error::InvalidArgument(format!("parent mean: {e}")))?
        .sample(rng) as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub region: Region,
    pub users: Vec<Point2>,
    pub environment: Environment,
    pub radio: RadioConfig,
    pub clustering: ClusteringConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pcp: Option<PcpConfig>,
}

impl Scenario {
    /// Generates users by PCP, redrawing with successive seeds while the
    /// realization is empty.
    pub fn generate(
        region: Region,
        pcp: PcpConfig,
        environment: Environment,
        radio: RadioConfig,
        clustering: ClusteringConfig,
    ) -> Result<Self> {
        let mut cfg = pcp;
        for _ in 0..1000 {
            let users = generate_pcp(&region, &cfg)?;
            if !users.is_empty() {
                return Ok(Self { region, users, environment, radio, clustering, pcp: Some(cfg) });
            }
            cfg.seed = crate::seed::derive(cfg.seed, 1);
        }
        Err(Error::InvalidArgument("PCP realizations keep coming up empty".into()))
    }

    pub fn validate(&self) -> Result<()> {
        self.region.validate()?;
        self.environment.validate()?;
        self.radio.validate()?;
        self.clustering.validate()?;
        if self.users.is_empty() {
            return Err(Error::InvalidScenario("scenario has no users".into()));
        }
        if let Some((i, p)) = self
            .users
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || !self.region.contains(p))
        {
            return Err(Error::InvalidScenario(format!(
                "user {i} at ({}, {}) lies outside the region",
                p.x, p.y
            )));
        }
        Ok(())
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses and validates a scenario; unknown fields are returned as warnings.
    pub fn from_json(text: &str) -> Result<(Self, Vec<String>)> {
        let mut ignored = Vec::new();
        let mut de = serde_json::Deserializer::from_str(text);
        let scenario: Scenario =
            serde_ignored::deserialize(&mut de, |path| ignored.push(path.to_string()))?;
        de.end()?;
        scenario.validate()?;
        Ok((scenario, ignored))
    }
}

pub fn save_scenario(path: &Path, scenario: &Scenario) -> Result<()> {
    fs::write(path, scenario.to_json()?)?;
    Ok(())
}

/// Reads a scenario file, logging a warning for each unknown field.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path)?;
    let (scenario, ignored) = Scenario::from_json(&text)?;
    for field in ignored {
        tracing::warn!(path = %path.display(), field, "ignoring unknown scenario field");
    }
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_users() {
        let cfg = PcpConfig { seed: 11, ..PcpConfig::default() };
        let a = generate_pcp(&Region::default(), &cfg).unwrap();
        let b = generate_pcp(&Region::default(), &cfg).unwrap();
        assert_eq!(a, b);
        let c = generate_pcp(&Region::default(), &PcpConfig { seed: 12, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn users_stay_in_region() {
        let region = Region { width: 300.0, height: 200.0 };
        for seed in 0..20 {
            let cfg = PcpConfig { seed, parent_intensity: 1e-4, ..PcpConfig::default() };
            let users = generate_pcp(&region, &cfg).unwrap();
            assert!(users.iter().all(|p| (0.0..=300.0).contains(&p.x) && (0.0..=200.0).contains(&p.y)));
        }
    }

    #[test]
    fn default_scale_is_hundreds_of_users() {
        let counts: Vec<usize> = (0..20)
            .map(|seed| {
                generate_pcp(&Region::default(), &PcpConfig { seed, ..PcpConfig::default() })
                    .unwrap()
                    .len()
            })
            .collect();
        let mean = counts.iter().sum::<usize>() as f64 / counts.len() as f64;
        assert!(mean > 150.0 && mean < 450.0, "mean {mean}");
    }

    fn sample() -> Scenario {
        Scenario::generate(
            Region::default(),
            PcpConfig { seed: 3, ..PcpConfig::default() },
            Environment::urban(),
            RadioConfig::default(),
            ClusteringConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let s = sample();
        let text = s.to_json().unwrap();
        let (back, warnings) = Scenario::from_json(&text).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(back, s);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn missing_field_is_named() {
        let mut v: serde_json::Value = serde_json::from_str(&sample().to_json().unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("environment");
        let err = Scenario::from_json(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("environment"), "{err}");
    }

    #[test]
    fn unknown_fields_warn() {
        let mut v: serde_json::Value = serde_json::from_str(&sample().to_json().unwrap()).unwrap();
        v.as_object_mut().unwrap().insert("comment".into(), "hello".into());
        let (_, warnings) = Scenario::from_json(&v.to_string()).unwrap();
        assert_eq!(warnings, vec!["comment".to_string()]);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = Scenario::from_json("{\n  \"region\": {\"width\": 1000,\n").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn user_outside_region_is_rejected() {
        let mut s = sample();
        s.users.push(Point2::new(-5.0, 10.0));
        assert!(matches!(Scenario::from_json(&s.to_json().unwrap()), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        let s = sample();
        save_scenario(&path, &s).unwrap();
        assert_eq!(load_scenario(&path).unwrap(), s);
    }
}
