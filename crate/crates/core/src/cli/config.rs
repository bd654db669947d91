//! Run and sweep configuration files (TOML).

use crate::error::{Error, Result};
use crate::estimates::{check_admissible, EstimateParams, DEFAULT_C0};
use crate::flow::FlowConfig;
use crate::scenarios::ScenarioSpec;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

fn default_deltas() -> Vec<f64> {
    vec![0.1, 0.2]
}

fn default_sigmas() -> Vec<f64> {
    vec![0.01, 0.02, 0.05]
}

fn default_ps() -> Vec<f64> {
    vec![2.0, 10.0]
}

fn default_witness_deltas() -> Vec<f64> {
    vec![0.1, 0.2, 0.3]
}

fn default_c0() -> f64 {
    DEFAULT_C0
}

fn default_dir() -> PathBuf {
    PathBuf::from("run")
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateGrid {
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default = "default_sigmas")]
    pub sigmas: Vec<f64>,
    #[serde(default = "default_ps")]
    pub ps: Vec<f64>,
    #[serde(default = "default_c0")]
    pub c0: f64,
    /// Fixed ε; omitted means `δ / (4 n^4 Λ^2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Levels for the level-set table; omitted means `K0 * {1, 2, 4, 8}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<f64>>,
    /// Frozen growth constant from a training run; omitted means fit here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_hat: Option<f64>,
    #[serde(default = "default_witness_deltas")]
    pub witness_deltas: Vec<f64>,
}

impl Default for EstimateGrid {
    fn default() -> Self {
        EstimateGrid {
            deltas: default_deltas(),
            sigmas: default_sigmas(),
            ps: default_ps(),
            c0: DEFAULT_C0,
            epsilon: None,
            levels: None,
            c_hat: None,
            witness_deltas: default_witness_deltas(),
        }
    }
}

impl EstimateGrid {
    /// Every `(δ, σ, p)` combination, δ-major.
    pub fn cells(&self) -> Vec<EstimateParams> {
        let mut out = Vec::new();
        for &delta in &self.deltas {
            for &sigma in &self.sigmas {
                for &p in &self.ps {
                    out.push(EstimateParams {
                        delta,
                        sigma,
                        p,
                        c0: self.c0,
                        epsilon: self.epsilon,
                        level: None,
                    });
                }
            }
        }
        out
    }

    fn check_nonempty(&self) -> Result<(), String> {
        for (name, v) in [
            ("deltas", &self.deltas),
            ("sigmas", &self.sigmas),
            ("ps", &self.ps),
            ("witness_deltas", &self.witness_deltas),
        ] {
            if v.is_empty() {
                return Err(format!("estimates.{name} must not be empty"));
            }
        }
        if matches!(&self.levels, Some(l) if l.is_empty()) {
            return Err("estimates.levels must not be empty".into());
        }
        if matches!(self.c_hat, Some(c) if !(c >= 0.0 && c.is_finite())) {
            return Err("estimates.c_hat must be a finite nonnegative number".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "yes")]
    pub frames: bool,
    #[serde(default = "yes")]
    pub plots: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: default_dir(),
            frames: true,
            plots: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioSpec,
    #[serde(default)]
    pub flow: FlowConfig,
    #[serde(default)]
    pub estimates: EstimateGrid,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenarios: Vec<ScenarioSpec>,
    #[serde(default)]
    pub flow: FlowConfig,
    #[serde(default)]
    pub estimates: EstimateGrid,
    #[serde(default)]
    pub output: OutputConfig,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn config_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| config_error(path, e.to_string().trim_end().to_string()))
}

impl RunConfig {
    /// Parses and checks the schema; grids must be nonempty.
    pub fn from_str(path: &Path, text: &str) -> Result<Self> {
        let cfg: RunConfig = parse(path, text)?;
        cfg.estimates.check_nonempty().map_err(|m| config_error(path, m))?;
        cfg.flow.validate().map_err(|e| config_error(path, e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_str(path, &read(path)?)
    }

    /// Every `(σ, p)` pair must satisfy the admissibility window.
    pub fn check_admissible(&self, path: &Path) -> Result<()> {
        for cell in self.estimates.cells() {
            check_admissible(cell.sigma, cell.p, cell.c0).map_err(|e| config_error(path, e.to_string()))?;
            cell.validate().map_err(|e| config_error(path, e.to_string()))?;
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }
}

impl SweepConfig {
    pub fn from_str(path: &Path, text: &str) -> Result<Self> {
        let cfg: SweepConfig = parse(path, text)?;
        cfg.flow.validate().map_err(|e| config_error(path, e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_str(path, &read(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = RunConfig::from_str(Path::new("x.toml"), "[scenario]\nkind = \"circle\"\nradius = 1.0\nn = 64\n").unwrap();
        assert_eq!(cfg.flow, FlowConfig::default());
        assert_eq!(cfg.estimates.cells().len(), 12);
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = RunConfig::from_str(
            Path::new("x.toml"),
            "[scenario]\nkind = \"circle\"\nradius = 1.0\nn = 64\n[flow]\nclf = 0.1\n",
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("clf") && msg.contains("line"), "{msg}");
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig::from_str(Path::new("x.toml"), "[scenario]\nkind = \"sphere\"\nradius = 1.0\nn = 33\n").unwrap();
        let again = RunConfig::from_str(Path::new("x.toml"), &cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);
    }
}
