use crate::agents::AgentConfig;
use crate::env::{ChainSpec, GridSpec};
use crate::error::{ConfigError, Error};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;

fn default_runs() -> usize {
    10
}
fn default_cycles() -> u32 {
    200
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EnvConfig {
    #[serde(rename_all = "camelCase")]
    Gridworld {
        /// Path to a text grid, relative to the config file.
        grid_file: PathBuf,
        /// Overrides the file's dispenser payout probability.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
    Chain {
        #[serde(default)]
        chain: ChainSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub agent: AgentConfig,
    pub env: EnvConfig,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_cycles")]
    pub cycles: u32,
    #[serde(default)]
    pub seed: u64,
}

/// A resolved environment description, ready to instantiate per run.
#[derive(Clone, Debug, PartialEq)]
pub enum EnvSetup {
    Grid(Arc<GridSpec>),
    Chain(ChainSpec),
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config and makes its grid path absolute.
    pub fn load(path: &Path) -> Result<Self, Error> {
        let mut cfg = Self::from_json(&std::fs::read_to_string(path)?)?;
        if let EnvConfig::Gridworld { grid_file, .. } = &mut cfg.env {
            if grid_file.is_relative() {
                let dir = path.parent().unwrap_or_else(|| Path::new("."));
                *grid_file = dir.join(&*grid_file);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.runs == 0 {
            return Err(ConfigError::Invalid("runs must be at least 1".into()));
        }
        if self.cycles == 0 {
            return Err(ConfigError::Invalid("cycles must be at least 1".into()));
        }
        self.agent.planner().validate()?;
        if let EnvConfig::Chain { chain } = &self.env {
            chain.validate()?;
        }
        Ok(())
    }

    pub fn environment(&self) -> Result<EnvSetup, Error> {
        match &self.env {
            EnvConfig::Gridworld { grid_file, theta } => {
                let text = std::fs::read_to_string(grid_file).map_err(|e| {
                    ConfigError::Invalid(format!("cannot read grid file {}: {e}", grid_file.display()))
                })?;
                let mut spec = GridSpec::parse(&text)?;
                if let Some(theta) = theta {
                    spec = spec.with_theta(*theta)?;
                }
                Ok(EnvSetup::Grid(Arc::new(spec)))
            }
            EnvConfig::Chain { chain } => Ok(EnvSetup::Chain(*chain)),
        }
    }

    /// Seed of run `i`.
    pub fn run_seed(&self, run: usize) -> u64 {
        self.seed.wrapping_add(run as u64)
    }
}
