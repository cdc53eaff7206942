//! Run manifests written next to every output file.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::holonomy::IntegratorSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub library_version: String,
    pub integrator: IntegratorSpec,
    /// ISO-8601, UTC.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, integrator: IntegratorSpec) -> Self {
        RunManifest {
            command: command.into(),
            parameters: BTreeMap::new(),
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            integrator,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.parameters.insert(key.to_string(), v);
        self
    }

    /// `out.csv` → `out.manifest.json`
    pub fn path_for(output: &Path) -> PathBuf {
        output.with_extension("manifest.json")
    }

    pub fn write_for(&self, output: &Path) -> io::Result<PathBuf> {
        let path = Self::path_for(output);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }

    pub fn read(path: &Path) -> io::Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}
