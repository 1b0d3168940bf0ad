//! Run configuration: a single JSON document with the game parameters and
//! one optional block per subcommand. Scalar fields can be overridden on the
//! command line with `--set path=value`.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::Value;

use ransom_game::hacker_payoff::GridSpec;
use ransom_game::{GameParams, GameVariant};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub variant: GameVariant,
    pub params: GameParams,
    /// Root seed; `--seed` takes precedence.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub thresholds: Option<ThresholdsConfig>,
    #[serde(default)]
    pub best_response: Option<BestResponseConfig>,
    #[serde(default)]
    pub equilibrium: Option<EquilibriumConfig>,
    #[serde(default)]
    pub payoff_curve: Option<PayoffCurveConfig>,
    #[serde(default)]
    pub simulate: Option<SimulateConfig>,
    #[serde(default)]
    pub check: Option<CheckConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdsConfig {
    /// Ransoms to evaluate the thresholds at.
    pub r: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BestResponseConfig {
    /// The ransom the victim faces.
    pub r: f64,
    /// Valuations to classify.
    #[serde(default)]
    pub x: Vec<f64>,
    /// Ransom grid for the boundary-curve sweep.
    #[serde(default)]
    pub sweep: Option<GridSpecConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumConfig {
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

fn default_grid_points() -> usize {
    4096
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffCurveConfig {
    pub grid: GridSpecConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub r: f64,
    pub n: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Write one CSV row per playout to this path, for debugging.
    #[serde(default)]
    pub dump: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    #[serde(default = "default_check_points")]
    pub points: usize,
}

fn default_check_points() -> usize {
    30
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { points: default_check_points() }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpecConfig {
    Ransom { max: f64, points: usize },
    Transformed { points: usize },
}

impl From<GridSpecConfig> for GridSpec {
    fn from(value: GridSpecConfig) -> Self {
        match value {
            GridSpecConfig::Ransom { max, points } => GridSpec::Ransom { max, points },
            GridSpecConfig::Transformed { points } => GridSpec::Transformed { points },
        }
    }
}

/// Loads the config, applies `--set path=value` overrides on the raw JSON,
/// then validates the parameters in one pass.
pub fn load(path: &Path, sets: &[String]) -> Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    for set in sets {
        apply_set(&mut value, set)?;
    }
    let config: RunConfig = serde_json::from_value(value).context("interpreting config")?;
    config.params.validate()?;
    config.params.recovery(config.variant)?;
    Ok(config)
}

/// Sets a dotted path in the raw config to a JSON scalar (or to a string
/// when the value does not parse as JSON).
fn apply_set(root: &mut Value, spec: &str) -> Result<()> {
    let Some((path, raw)) = spec.split_once('=') else {
        bail!("--set needs the form path=value, got `{spec}`");
    };
    let parsed: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cursor = root;
    let segments: Vec<&str> = path.split('.').collect();
    let (last, parents) = segments.split_last().expect("split_once guarantees content");
    for segment in parents {
        cursor = cursor
            .as_object_mut()
            .with_context(|| format!("`{segment}` in `{path}` is not an object"))?
            .entry(segment.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    cursor
        .as_object_mut()
        .with_context(|| format!("`{path}` does not point into an object"))?
        .insert(last.to_string(), parsed);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_overrides_nested_scalars() {
        let mut v: Value = serde_json::from_str(r#"{"params":{"p":0.9}}"#).unwrap();
        apply_set(&mut v, "params.p=0.5").unwrap();
        apply_set(&mut v, "params.willingness.type=exp_decay").unwrap();
        assert_eq!(v["params"]["p"], Value::from(0.5));
        assert_eq!(v["params"]["willingness"]["type"], Value::from("exp_decay"));
        assert!(apply_set(&mut v, "no-equals-sign").is_err());
    }
}
