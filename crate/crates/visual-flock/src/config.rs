//! TOML configuration covering the model, run and sweep settings; every
//! field can also be overridden from the CLI.

use crate::params::{ModelParams, Variant};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct RunSettings {
    pub seed: u64,
    /// Trajectory/trace recording cadence in steps (0 disables trajectories).
    pub record_every: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            seed: 1,
            record_every: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct SweepSettings {
    pub k_attract_min: f64,
    pub k_attract_max: f64,
    pub k_align_min: f64,
    pub k_align_max: f64,
    /// Cells per axis.
    pub grid: usize,
    pub replicates: usize,
    pub variant: Variant,
    /// Worker threads (0 = all cores).
    pub workers: usize,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            k_attract_min: 0.0,
            k_attract_max: 0.3,
            k_align_min: 0.0,
            k_align_max: 0.3,
            grid: 7,
            replicates: 10,
            variant: Variant::Delay,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct Config {
    pub model: ModelParams,
    pub run: RunSettings,
    pub sweep: SweepSettings,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{AvoidMode, ObjectAveraging};

    #[test]
    fn empty_config_is_all_defaults() {
        let c = Config::parse("").unwrap();
        assert_eq!(c, Config::default());
    }

    #[test]
    fn sections_override_selected_keys() {
        let c = Config::parse(
            r#"
[model]
k_attract = 0.25
k_align = 0.04
tau = 0.0
averaging = "sum"
avoid_mode = "angular-width"

[run]
seed = 99

[sweep]
grid = 3
replicates = 2
variant = "original"
"#,
        )
        .unwrap();
        assert_eq!(c.model.k_attract, 0.25);
        assert_eq!(c.model.k_align, 0.04);
        assert_eq!(c.model.tau, 0.0);
        assert_eq!(c.model.averaging, ObjectAveraging::Sum);
        assert_eq!(c.model.avoid_mode, AvoidMode::AngularWidth);
        assert_eq!(c.model.dt, 0.1, "untouched keys keep defaults");
        assert_eq!(c.run.seed, 99);
        assert_eq!(c.sweep.grid, 3);
        assert_eq!(c.sweep.replicates, 2);
        assert_eq!(c.sweep.variant, Variant::Original);
    }

    #[test]
    fn config_round_trips_through_toml() {
        let mut c = Config::default();
        c.model.k_noise = 0.0;
        c.sweep.grid = 31;
        let parsed = Config::parse(&c.to_toml()).unwrap();
        assert_eq!(parsed, c);
    }

    #[test]
    fn bad_toml_is_a_config_error() {
        assert!(matches!(
            Config::parse("model = nonsense"),
            Err(Error::Config(_))
        ));
    }
}
