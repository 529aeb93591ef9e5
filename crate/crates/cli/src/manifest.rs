use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use nofdm_core::berlab::Format;
use serde::{Deserialize, Serialize};

use crate::config::Settings;

/// Everything needed to regenerate an output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub format: Format,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub outputs: Vec<String>,
    pub settings: Settings,
}

impl RunManifest {
    pub fn new(command: &str, settings: Settings, format: Format, outputs: Vec<String>) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed: settings.seed,
            format,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            outputs,
            settings,
        }
    }

    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write(&self, path: &Path) -> Result<(), String> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| e.to_string())?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut m: RunManifest =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        // The seed is stored twice for readability; the settings copy wins.
        m.seed = m.settings.seed;
        Ok(m)
    }
}
