//! Config file handling: TOML sections per module, environment overrides
//! under the AMA_ prefix, and assembly into the core experiment config.

use std::fs;
use std::path::Path;

use ama_core::ansatz::{EvalOptions, ResourceModel};
use ama_core::bench::{Algorithm, ExperimentConfig, GraphFamily};
use ama_core::optimizer::OptimizerConfig;
use ama_core::AmaConfig;
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

pub const ENV_PREFIX: &str = "AMA_";

/// The `[experiment]` section: campaign shape plus the shared evaluation
/// switch. Algorithm-specific knobs live in their own sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub graph_family: GraphFamily,
    pub sizes: Vec<usize>,
    pub graphs_per_size: usize,
    pub algorithms: Vec<Algorithm>,
    pub depths: Vec<usize>,
    pub runs_per_setting: usize,
    pub master_seed: u64,
    pub er_edge_prob: f64,
    pub mixers_per_layer: Option<usize>,
    pub runtime_constant: f64,
    pub cost_runs_factor: usize,
    pub cost_runs_ama_factor: usize,
    pub mixer_phase_exact: bool,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        let base = ExperimentConfig::default();
        ExperimentSection {
            graph_family: base.graph_family,
            sizes: base.sizes,
            graphs_per_size: base.graphs_per_size,
            algorithms: base.algorithms,
            depths: base.depths,
            runs_per_setting: base.runs_per_setting,
            master_seed: base.master_seed,
            er_edge_prob: base.er_edge_prob,
            mixers_per_layer: base.mixers_per_layer,
            runtime_constant: base.runtime_constant,
            cost_runs_factor: base.cost_runs_factor,
            cost_runs_ama_factor: base.cost_runs_ama_factor,
            mixer_phase_exact: base.eval.mixer_phase_exact,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: ExperimentSection,
    pub ama: AmaConfig,
    pub optimizer: OptimizerConfig,
    pub resource: ResourceModel,
}

impl FileConfig {
    /// Loads the file (or defaults), then applies AMA_SECTION_KEY
    /// environment overrides.
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let mut table = match path {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| {
                    CliError::Runtime(format!("cannot read config {}: {e}", p.display()))
                })?;
                text.parse::<toml::Table>().map_err(|e| {
                    CliError::Config(format!("invalid config {}: {e}", p.display()))
                })?
            }
            None => toml::Table::new(),
        };
        apply_env_overrides(&mut table, std::env::vars())?;
        toml::Value::Table(table)
            .try_into::<FileConfig>()
            .map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    /// Makes the per-section values consistent: the `[optimizer]` section
    /// and the shared evaluation switch govern every algorithm.
    pub fn normalize(&mut self) {
        self.ama.optimizer = self.optimizer.clone();
        self.ama.eval.mixer_phase_exact = self.experiment.mixer_phase_exact;
    }

    /// Assembles the core experiment config.
    pub fn resolve(&self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig {
            graph_family: self.experiment.graph_family,
            sizes: self.experiment.sizes.clone(),
            graphs_per_size: self.experiment.graphs_per_size,
            algorithms: self.experiment.algorithms.clone(),
            depths: self.experiment.depths.clone(),
            runs_per_setting: self.experiment.runs_per_setting,
            master_seed: self.experiment.master_seed,
            er_edge_prob: self.experiment.er_edge_prob,
            mixers_per_layer: self.experiment.mixers_per_layer,
            runtime_constant: self.experiment.runtime_constant,
            cost_runs_factor: self.experiment.cost_runs_factor,
            cost_runs_ama_factor: self.experiment.cost_runs_ama_factor,
            ama: self.ama.clone(),
            optimizer: self.optimizer.clone(),
            resource: self.resource.clone(),
            eval: EvalOptions {
                mixer_phase_exact: self.experiment.mixer_phase_exact,
            },
        };
        cfg.ama.optimizer = cfg.optimizer.clone();
        cfg.ama.eval = cfg.eval;
        cfg
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string_pretty(self)
            .map_err(|e| CliError::Runtime(format!("cannot render config: {e}")))
    }
}

/// Parses an environment value as the closest TOML literal.
fn parse_env_value(raw: &str) -> toml::Value {
    if let Ok(b) = raw.parse::<bool>() {
        return toml::Value::Boolean(b);
    }
    if let Ok(i) = raw.parse::<i64>() {
        return toml::Value::Integer(i);
    }
    if let Ok(f) = raw.parse::<f64>() {
        return toml::Value::Float(f);
    }
    if raw.trim_start().starts_with('[') {
        if let Ok(v) = format!("value = {raw}").parse::<toml::Table>() {
            if let Some(v) = v.get("value") {
                return v.clone();
            }
        }
    }
    toml::Value::String(raw.to_string())
}

const SECTIONS: [&str; 4] = ["experiment", "ama", "optimizer", "resource"];

/// Applies AMA_SECTION_KEY=value pairs onto the raw config table. The first
/// underscore-separated segment selects the section, the rest is the key.
pub fn apply_env_overrides(
    table: &mut toml::Table,
    env: impl Iterator<Item = (String, String)>,
) -> CliResult<()> {
    for (name, value) in env {
        let Some(rest) = name.strip_prefix(ENV_PREFIX) else {
            continue;
        };
        let Some((section_raw, key_raw)) = rest.split_once('_') else {
            return Err(CliError::Config(format!(
                "environment override {name} lacks a section and key"
            )));
        };
        let section = section_raw.to_ascii_lowercase();
        let key = key_raw.to_ascii_lowercase();
        if !SECTIONS.contains(&section.as_str()) {
            return Err(CliError::Config(format!(
                "environment override {name}: unknown section '{section}'"
            )));
        }
        let entry = table
            .entry(section.clone())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        let Some(section_table) = entry.as_table_mut() else {
            return Err(CliError::Config(format!(
                "config section '{section}' is not a table"
            )));
        };
        section_table.insert(key, parse_env_value(&value));
    }
    Ok(())
}
