//! JSON scenario configs: a flat object with the `ScenarioConfig` field
//! names. Missing fields take the default profile; unknown fields are
//! rejected.

use std::fs;
use std::path::Path;

use hetnet_core::ScenarioConfig;

use crate::{HarnessError, Result};

pub fn parse_config(text: &str) -> std::result::Result<ScenarioConfig, serde_json::Error> {
    serde_json::from_str(text)
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let config = parse_config(&text).map_err(|source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    config.validate()?;
    Ok(config)
}

pub fn to_json(config: &ScenarioConfig) -> String {
    serde_json::to_string_pretty(config).expect("config serialises")
}
