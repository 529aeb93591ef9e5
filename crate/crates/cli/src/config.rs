//! Sectioned `key = value` run configuration.
//!
//! ```text
//! # comment
//! alpha = 0.8            # keys may appear before any section
//!
//! [sweep]
//! alphas = 1.0, 0.9, 0.8
//! ebn0_db = 0:2:20       # inclusive range start:step:end
//! ```
//!
//! Every key has a home section and may appear either there or before the
//! first section header. Keys given twice, unknown keys and unknown sections
//! are rejected with line numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nofdm_core::berlab::SweepSpec;
use nofdm_core::capacity::CapacityParams;
use nofdm_core::equalize::ThresholdOrder;
use nofdm_core::modem::ModemConfig;
use nofdm_core::stats::db_to_linear;
use nofdm_core::TransformKind;
use serde::{Deserialize, Serialize};

pub const SECTIONS: &[&str] = &["modem", "sweep", "run", "capacity", "psd", "ici", "corr"];

/// `(key, home section)`.
pub const KEYS: &[(&str, &str)] = &[
    ("n", "modem"),
    ("alpha", "modem"),
    ("kind", "modem"),
    ("pam_order", "modem"),
    ("cp_len", "modem"),
    ("data_symbols_per_frame", "modem"),
    ("training_symbols", "modem"),
    ("sync_symbols", "modem"),
    ("sample_rate", "modem"),
    ("alphas", "sweep"),
    ("ebn0_db", "sweep"),
    ("iterations", "sweep"),
    ("kinds", "sweep"),
    ("max_bits", "sweep"),
    ("min_errors", "sweep"),
    ("min_bits", "sweep"),
    ("batch_symbols", "sweep"),
    ("threshold_order", "sweep"),
    ("seed", "run"),
    ("bandwidth_hz", "capacity"),
    ("snr_db", "capacity"),
    ("ici_power", "capacity"),
    ("symbol_duration", "capacity"),
    ("frames", "psd"),
    ("segment", "psd"),
    ("overlap", "psd"),
    ("symbols", "ici"),
    ("k", "corr"),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    File { path: PathBuf, line: usize },
    Flag(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::File { path, line } => write!(f, "{}:{line}", path.display()),
            Origin::Flag(flag) => write!(f, "{flag}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub origin: Option<Origin>,
    pub message: String,
}

impl ConfigError {
    fn at(origin: &Origin, message: impl Into<String>) -> Self {
        ConfigError {
            origin: Some(origin.clone()),
            message: message.into(),
        }
    }

    fn bare(message: impl Into<String>) -> Self {
        ConfigError {
            origin: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.origin {
            Some(o) => write!(f, "{o}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Raw entries keyed by name, before defaults and validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Entries(BTreeMap<String, Entry>);

impl Entries {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::<String, Entry>::new();
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let origin = Origin::File {
                path: path.to_path_buf(),
                line,
            };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(&origin, "unterminated section header"))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(ConfigError::at(
                        &origin,
                        format!("unknown section [{name}] (expected one of {})", SECTIONS.join(", ")),
                    ));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::at(&origin, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::at(&origin, "missing key before `=`"));
            }
            if value.is_empty() {
                return Err(ConfigError::at(&origin, format!("missing value for `{key}`")));
            }
            let home = KEYS
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, s)| *s)
                .ok_or_else(|| ConfigError::at(&origin, format!("unknown key `{key}`")))?;
            if let Some(current) = &section {
                if current != home {
                    return Err(ConfigError::at(
                        &origin,
                        format!("key `{key}` belongs in [{home}], not [{current}]"),
                    ));
                }
            }
            if let Some(prev) = entries.get(key) {
                let Origin::File { line: first, .. } = prev.origin else { unreachable!() };
                return Err(ConfigError::at(
                    &origin,
                    format!("duplicate key `{key}` (lines {first} and {line})"),
                ));
            }
            entries.insert(
                key.to_string(),
                Entry {
                    value: value.to_string(),
                    origin,
                },
            );
        }
        Ok(Entries(entries))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::bare(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    /// Command-line values take precedence over the file.
    pub fn set_flag(&mut self, key: &str, flag: &str, value: String) {
        debug_assert!(KEYS.iter().any(|(k, _)| *k == key), "{key}");
        self.0.insert(
            key.to_string(),
            Entry {
                value,
                origin: Origin::Flag(flag.to_string()),
            },
        );
    }

    pub fn origin(&self, key: &str) -> Option<&Origin> {
        self.0.get(key).map(|e| &e.origin)
    }

    fn scalar<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(e) => parse_scalar(&e.value)
                .map(Some)
                .map_err(|m| ConfigError::at(&e.origin, format!("{key}: {m}"))),
        }
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(e) => parse_list(&e.value)
                .map(Some)
                .map_err(|m| ConfigError::at(&e.origin, format!("{key}: {m}"))),
        }
    }
}

fn parse_scalar<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    s.trim().parse::<T>().map_err(|e| format!("cannot parse `{}`: {e}", s.trim()))
}

/// Comma list whose numeric items may be inclusive ranges `start:step:end`.
fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    let mut out = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err("empty list item".into());
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.len() {
            1 => out.push(parse_scalar(item)?),
            3 => {
                let [a, step, b] = [parts[0], parts[1], parts[2]].map(|p| p.trim().parse::<f64>());
                let (a, step, b) = match (a, step, b) {
                    (Ok(a), Ok(s), Ok(b)) => (a, s, b),
                    _ => return Err(format!("range `{item}` must be numeric start:step:end")),
                };
                if !(step > 0.0) || b < a {
                    return Err(format!("range `{item}` needs step > 0 and end >= start"));
                }
                let count = ((b - a) / step + 1e-9).floor() as usize + 1;
                for i in 0..count {
                    let v = a + i as f64 * step;
                    // Print through the shortest form so 0.1 steps parse cleanly.
                    let rounded = format!("{}", (v * 1e9).round() / 1e9);
                    out.push(parse_scalar(&rounded)?);
                }
            }
            _ => return Err(format!("cannot parse list item `{item}`")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    /// Cyclic prefix used by BER sweeps; 0 unless `cp_len` is set.
    pub cp_len: usize,
    pub alphas: Vec<f64>,
    pub ebn0_db: Vec<f64>,
    pub iterations: Vec<usize>,
    pub kinds: Vec<TransformKind>,
    pub max_bits: u64,
    pub min_errors: u64,
    pub min_bits: u64,
    pub batch_symbols: usize,
    pub threshold_order: ThresholdOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacitySettings {
    pub bandwidth_hz: f64,
    pub snr_db: f64,
    /// ICI power as a fraction of the signal power.
    pub ici_power: f64,
    pub symbol_duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdSettings {
    pub frames: usize,
    pub segment: usize,
    pub overlap: f64,
}

/// Fully resolved configuration; this is what a manifest records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub seed: u64,
    pub modem: ModemConfig,
    pub sweep: SweepSettings,
    pub capacity: CapacitySettings,
    pub psd: PsdSettings,
    pub ici_symbols: usize,
    pub corr_k: usize,
}

impl Settings {
    /// Applies defaults to `entries` and checks every bound.
    pub fn resolve(entries: &Entries) -> Result<Self, ConfigError> {
        let mut modem = ModemConfig::baseline(entries.scalar("alpha")?.unwrap_or(1.0));
        if let Some(v) = entries.scalar("n")? {
            modem.n = v;
        }
        if let Some(v) = entries.scalar("kind")? {
            modem.kind = v;
        }
        if let Some(v) = entries.scalar("pam_order")? {
            modem.pam_order = v;
        }
        if let Some(v) = entries.scalar("cp_len")? {
            modem.cp_len = v;
        }
        if let Some(v) = entries.scalar("data_symbols_per_frame")? {
            modem.data_symbols_per_frame = v;
        }
        if let Some(v) = entries.scalar("training_symbols")? {
            modem.training_symbols = v;
        }
        if let Some(v) = entries.scalar("sync_symbols")? {
            modem.sync_symbols = v;
        }
        if let Some(v) = entries.scalar("sample_rate")? {
            modem.sample_rate = v;
        }
        let cp_default = modem.n / 16;
        if entries.origin("cp_len").is_none() {
            modem.cp_len = cp_default;
        }

        let defaults = SweepSpec::new(modem.clone());
        let threshold_order = match entries.0.get("threshold_order") {
            None => ThresholdOrder::default(),
            Some(e) => match e.value.as_str() {
                "map_then_update" => ThresholdOrder::MapThenUpdate,
                "update_then_map" => ThresholdOrder::UpdateThenMap,
                other => {
                    return Err(ConfigError::at(
                        &e.origin,
                        format!("threshold_order: unknown value `{other}` (expected map_then_update or update_then_map)"),
                    ))
                }
            },
        };
        let sweep = SweepSettings {
            cp_len: entries.scalar("cp_len")?.unwrap_or(0),
            alphas: entries.list("alphas")?.unwrap_or(defaults.alphas),
            ebn0_db: entries.list("ebn0_db")?.unwrap_or(defaults.ebn0_db),
            iterations: entries.list("iterations")?.unwrap_or(defaults.iterations),
            kinds: entries.list("kinds")?.unwrap_or(defaults.kinds),
            max_bits: entries.scalar("max_bits")?.unwrap_or(defaults.max_bits),
            min_errors: entries.scalar("min_errors")?.unwrap_or(defaults.min_errors),
            min_bits: entries.scalar("min_bits")?.unwrap_or(defaults.min_bits),
            batch_symbols: entries.scalar("batch_symbols")?.unwrap_or(defaults.batch_symbols),
            threshold_order,
        };

        let symbol_duration_default = modem.n as f64 / modem.sample_rate;
        let capacity = CapacitySettings {
            bandwidth_hz: entries
                .scalar("bandwidth_hz")?
                .unwrap_or(modem.sample_rate / 2.0),
            snr_db: entries.scalar("snr_db")?.unwrap_or(10.0),
            ici_power: entries.scalar("ici_power")?.unwrap_or(0.0),
            symbol_duration: entries.scalar("symbol_duration")?.unwrap_or(symbol_duration_default),
        };
        let psd = PsdSettings {
            frames: entries.scalar("frames")?.unwrap_or(4),
            segment: entries.scalar("segment")?.unwrap_or(1024),
            overlap: entries.scalar("overlap")?.unwrap_or(0.5),
        };
        let settings = Settings {
            seed: entries.scalar("seed")?.unwrap_or(0),
            corr_k: entries.scalar("k")?.unwrap_or(modem.n / 2),
            ici_symbols: entries.scalar("symbols")?.unwrap_or(4096),
            modem,
            sweep,
            capacity,
            psd,
        };
        settings.validate().map_err(|e| match entries.origin(e.field) {
            Some(o) => ConfigError::at(o, e.message),
            None => ConfigError::bare(e.message),
        })?;
        Ok(settings)
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        fn core(e: nofdm_core::Error) -> FieldError {
            let field = match &e {
                nofdm_core::Error::Parameter { field, .. } => field,
                _ => "",
            };
            FieldError {
                field,
                message: e.to_string(),
            }
        }
        self.modem.validate().map_err(core)?;
        self.sweep_spec().validate().map_err(core)?;
        self.capacity_params().validate().map_err(core)?;
        if self.corr_k >= self.modem.n {
            return Err(FieldError {
                field: "k",
                message: format!("k must be below n = {}, got {}", self.modem.n, self.corr_k),
            });
        }
        if self.ici_symbols == 0 {
            return Err(FieldError {
                field: "symbols",
                message: "symbols must be at least 1".into(),
            });
        }
        if self.psd.frames == 0 {
            return Err(FieldError {
                field: "frames",
                message: "frames must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            base: ModemConfig {
                cp_len: self.sweep.cp_len,
                ..self.modem.clone()
            },
            alphas: self.sweep.alphas.clone(),
            ebn0_db: self.sweep.ebn0_db.clone(),
            iterations: self.sweep.iterations.clone(),
            kinds: self.sweep.kinds.clone(),
            max_bits: self.sweep.max_bits,
            min_errors: self.sweep.min_errors,
            min_bits: self.sweep.min_bits,
            seed: self.seed,
            batch_symbols: self.sweep.batch_symbols,
            threshold_order: self.sweep.threshold_order,
        }
    }

    pub fn capacity_params(&self) -> CapacityParams {
        let signal_power = db_to_linear(self.capacity.snr_db);
        CapacityParams {
            bandwidth_hz: self.capacity.bandwidth_hz,
            signal_power,
            noise_power: 1.0,
            ici_power: self.capacity.ici_power * signal_power,
            alpha: self.modem.alpha,
            symbol_duration: self.capacity.symbol_duration,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: &'static str,
    pub message: String,
}
