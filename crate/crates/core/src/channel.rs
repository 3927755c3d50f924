//! Air-to-ground link budget: directional antenna gain, free-space path
//! loss, LoS probability, and the LoS/NLoS-averaged path loss.
//!
//! Losses in dB are combined on the linear scale exactly once, in
//! [`avg_path_loss`]. Every other quantity stays in dB.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Peak-gain constant of the sectored antenna model, in degrees².
pub const ANTENNA_GAIN_CONSTANT: f64 = 30_000.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvironmentKind {
    Suburban,
    Urban,
    DenseUrban,
    HighRise,
}

impl EnvironmentKind {
    pub const ALL: [EnvironmentKind; 4] = [
        EnvironmentKind::Suburban,
        EnvironmentKind::Urban,
        EnvironmentKind::DenseUrban,
        EnvironmentKind::HighRise,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EnvironmentKind::Suburban => "suburban",
            EnvironmentKind::Urban => "urban",
            EnvironmentKind::DenseUrban => "dense-urban",
            EnvironmentKind::HighRise => "high-rise",
        }
    }
}

impl fmt::Display for EnvironmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvironmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown environment `{s}`")))
    }
}

/// Propagation environment: LoS sigmoid constants and excess losses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub name: EnvironmentKind,
    /// Sigmoid constant `a` (dimensionless).
    pub sigmoid_a: f64,
    /// Sigmoid slope `b`, 1/degree.
    pub sigmoid_b: f64,
    pub excess_los_db: f64,
    pub excess_nlos_db: f64,
}

impl Environment {
    /// Default sigmoid constants for each environment; excess losses are 3 dB
    /// (LoS) and 34 dB (NLoS) everywhere.
    pub fn preset(kind: EnvironmentKind) -> Self {
        let (a, b) = match kind {
            EnvironmentKind::Suburban => (4.88, 0.43),
            EnvironmentKind::Urban => (9.61, 0.16),
            EnvironmentKind::DenseUrban => (12.08, 0.11),
            EnvironmentKind::HighRise => (27.23, 0.08),
        };
        Self {
            name: kind,
            sigmoid_a: a,
            sigmoid_b: b,
            excess_los_db: 3.0,
            excess_nlos_db: 34.0,
        }
    }

    pub fn urban() -> Self {
        Self::preset(EnvironmentKind::Urban)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.sigmoid_a > 0.0
            && self.sigmoid_b > 0.0
            && self.excess_los_db >= 0.0
            && self.excess_nlos_db >= self.excess_los_db
            && self.excess_nlos_db.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid environment {self:?}")))
        }
    }
}

impl Default for Environment {
    fn default() -> Self {
        Self::urban()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadioConfig {
    pub carrier_frequency_hz: f64,
    pub noise_psd_dbm_hz: f64,
    pub bandwidth_hz: f64,
    pub snr_threshold_db: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            carrier_frequency_hz: 2e9,
            noise_psd_dbm_hz: -170.0,
            bandwidth_hz: 20e6,
            snr_threshold_db: 0.0,
        }
    }
}

impl RadioConfig {
    /// Receiver noise power `N₀ + 10·log10(B)`, dBm.
    pub fn noise_power_dbm(&self) -> f64 {
        self.noise_psd_dbm_hz + linear_to_db(self.bandwidth_hz)
    }

    /// Received power at which the SNR equals the threshold, dBm.
    pub fn threshold_power_dbm(&self) -> f64 {
        self.snr_threshold_db + self.noise_power_dbm()
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.carrier_frequency_hz > 0.0
            && self.bandwidth_hz > 0.0
            && self.carrier_frequency_hz.is_finite()
            && self.bandwidth_hz.is_finite()
            && self.noise_psd_dbm_hz.is_finite()
            && self.snr_threshold_db.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid radio config {self:?}")))
        }
    }
}

/// Half-power half-beamwidths in degrees: azimuth `theta1` ≥ elevation `theta2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Beam {
    pub theta1_deg: f64,
    pub theta2_deg: f64,
}

impl Beam {
    pub fn new(theta1_deg: f64, theta2_deg: f64) -> Result<Self> {
        if !(0.0 < theta2_deg && theta2_deg <= theta1_deg && theta1_deg < 90.0) {
            return Err(Error::InvalidArgument(format!(
                "beam half-widths must satisfy 0 < θ₂ ≤ θ₁ < 90°, got ({theta1_deg}, {theta2_deg})"
            )));
        }
        Ok(Self { theta1_deg, theta2_deg })
    }

    /// Symmetric beam with equal half-widths.
    pub fn circular(theta_deg: f64) -> Result<Self> {
        Self::new(theta_deg, theta_deg)
    }
}

/// Main-lobe gain `10·log10(G₀ / (Θ₁·Θ₂))`, Θ in degrees.
pub fn antenna_gain_db(beam: &Beam) -> f64 {
    linear_to_db(ANTENNA_GAIN_CONSTANT / (beam.theta1_deg * beam.theta2_deg))
}

pub fn fspl_db(distance_m: f64, frequency_hz: f64) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::InvalidArgument(format!("distance must be positive, got {distance_m}")));
    }
    Ok(20.0 * (4.0 * PI * distance_m * frequency_hz / SPEED_OF_LIGHT).log10())
}

/// Elevation angle (degrees) of a UAV at `altitude` seen from `horizontal` meters away.
pub fn elevation_deg(altitude: f64, horizontal: f64) -> f64 {
    altitude.atan2(horizontal).to_degrees()
}

/// Sigmoid LoS probability `1 / (1 + a·exp(−b·(θ − a)))`, θ the elevation in degrees.
pub fn los_probability(altitude: f64, horizontal: f64, env: &Environment) -> Result<f64> {
    if !(altitude > 0.0) {
        return Err(Error::InvalidArgument(format!("altitude must be positive, got {altitude}")));
    }
    if !(horizontal >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "horizontal distance must be non-negative, got {horizontal}"
        )));
    }
    let theta = elevation_deg(altitude, horizontal);
    Ok(1.0 / (1.0 + env.sigmoid_a * (-env.sigmoid_b * (theta - env.sigmoid_a)).exp()))
}

/// Averaged path loss without antenna gain, linear.
pub fn avg_path_loss_gain_free(
    altitude: f64,
    horizontal: f64,
    env: &Environment,
    radio: &RadioConfig,
) -> Result<f64> {
    let p_los = los_probability(altitude, horizontal, env)?;
    let fspl = fspl_db(altitude.hypot(horizontal), radio.carrier_frequency_hz)?;
    let excess =
        p_los * db_to_linear(env.excess_los_db) + (1.0 - p_los) * db_to_linear(env.excess_nlos_db);
    Ok(db_to_linear(fspl) * excess)
}

/// LoS/NLoS-averaged path loss including main-lobe gain, linear:
/// `10^((FSPL − G)/10) · (P_LoS·10^(ε_LoS/10) + P_NLoS·10^(ε_NLoS/10))`.
pub fn avg_path_loss(
    altitude: f64,
    horizontal: f64,
    env: &Environment,
    beam: &Beam,
    radio: &RadioConfig,
) -> Result<f64> {
    Ok(avg_path_loss_gain_free(altitude, horizontal, env, radio)?
        / db_to_linear(antenna_gain_db(beam)))
}
