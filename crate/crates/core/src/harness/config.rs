//! Run configuration, loadable from a flat TOML document whose keys are the
//! field names of the thresholds, constants, objective weights and run
//! settings.

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::ilp::{Ablation, ModelConstants, ModelParams, ObjectiveWeights, Thresholds};
use crate::knowledge::{DEFAULT_ROWS, DEFAULT_TABLES};
use crate::solver::DEFAULT_TIME_LIMIT;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    /// Objectives closer than this count as a tie.
    pub tie_epsilon: f64,
    pub time_limit_secs: f64,
    /// Relative optimality gap for pruning; zero proves optimality.
    pub gap: f64,
    pub k_tables: usize,
    pub n_rows: usize,
    pub use_open_ie: bool,
    pub ablation: Ablation,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            tie_epsilon: 1e-6,
            time_limit_secs: DEFAULT_TIME_LIMIT.as_secs_f64(),
            gap: 0.0,
            k_tables: DEFAULT_TABLES,
            n_rows: DEFAULT_ROWS,
            use_open_ie: true,
            ablation: Ablation::None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub model: ModelParams,
    pub run: RunSettings,
}

fn object(v: impl Serialize) -> Map<String, Value> {
    match serde_json::to_value(v).expect("settings serialize") {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

impl Config {
    pub fn time_limit(&self) -> Duration {
        Duration::from_secs_f64(self.run.time_limit_secs.max(0.0))
    }

    /// All settings as one flat key/value map.
    pub fn to_flat(&self) -> Map<String, Value> {
        let mut flat = object(&self.model.thresholds);
        flat.extend(object(&self.model.constants));
        flat.extend(object(&self.model.weights));
        flat.extend(object(&self.run));
        flat
    }

    /// Applies overrides from a flat TOML document. Unknown keys and
    /// mistyped values are errors.
    pub fn apply_toml(&self, src: &str) -> Result<Config> {
        let doc: toml::Table = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;
        let mut flat = self.to_flat();
        for (key, value) in doc {
            if !flat.contains_key(&key) {
                return Err(Error::Config(format!("unknown key {key:?}")));
            }
            let value = serde_json::to_value(value).map_err(|e| Error::Config(e.to_string()))?;
            flat.insert(key, value);
        }
        let flat = Value::Object(flat);
        let parse = |what: &str| -> Box<dyn Fn(serde_json::Error) -> Error> {
            let what = what.to_owned();
            Box::new(move |e| Error::Config(format!("{what}: {e}")))
        };
        Ok(Config {
            model: ModelParams {
                thresholds: Thresholds::deserialize(&flat).map_err(parse("thresholds"))?,
                constants: ModelConstants::deserialize(&flat).map_err(parse("constants"))?,
                weights: ObjectiveWeights::deserialize(&flat).map_err(parse("weights"))?,
            },
            run: RunSettings::deserialize(&flat).map_err(parse("run settings"))?,
        })
    }

    pub fn from_toml(src: &str) -> Result<Config> {
        Config::default().apply_toml(src)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Config::from_toml(&src)
    }
}
