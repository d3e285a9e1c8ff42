use mfg_core::model::PARAM_KEYS;
use mfg_core::{Error, ModelParams};
use serde::Deserialize;

use crate::args::Common;

/// Reads `--config` (if any), applies the `--set` overrides in order and
/// validates the result. Parse problems are config errors; out-of-range
/// values are validation errors.
pub fn load(common: &Common) -> Result<ModelParams, Error> {
    let mut table = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            text.parse::<toml::Table>().map_err(|e| Error::Config(e.message().to_string()))?
        }
        None => toml::Table::new(),
    };
    for (key, value) in &common.overrides {
        if !PARAM_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown parameter key `{key}`")));
        }
        table.insert(key.clone(), toml::Value::Float(*value));
    }
    let missing: Vec<&str> = PARAM_KEYS.iter().copied().filter(|k| !table.contains_key(*k)).collect();
    if !missing.is_empty() {
        return Err(Error::Config(format!("missing parameter keys: {}", missing.join(", "))));
    }
    let params = ModelParams::deserialize(toml::Value::Table(table)).map_err(|e| Error::Config(e.to_string()))?;
    params.validated()
}
