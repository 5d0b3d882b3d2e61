use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Result, ZenoError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    BubbleSweep,
    OysterSweep,
    Spectrum,
    Verify,
}

impl FromStr for Mode {
    type Err = ZenoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "bubble" | "bubble-sweep" => Ok(Mode::BubbleSweep),
            "oyster" | "oyster-sweep" => Ok(Mode::OysterSweep),
            "spectrum" => Ok(Mode::Spectrum),
            "verify" => Ok(Mode::Verify),
            other => Err(config_error(
                "mode",
                format!("unknown mode `{other}` (expected bubble, oyster, spectrum or verify)"),
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::BubbleSweep => "bubble",
            Mode::OysterSweep => "oyster",
            Mode::Spectrum => "spectrum",
            Mode::Verify => "verify",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ZenoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(config_error("format", format!("unknown format `{other}` (csv or json)"))),
        }
    }
}

/// Everything a sweep needs. Built from defaults, then a config file, then
/// command-line flags, each layer overriding the previous one.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub n_min: u32,
    pub n_max: u32,
    pub potential: f64,
    pub energy: f64,
    pub energy_chain: Vec<f64>,
    pub delta_t: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_steps: usize,
    pub delta: f64,
    pub tolerance: f64,
    pub format: OutputFormat,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            mode: Mode::BubbleSweep,
            n_min: 1,
            n_max: 20,
            potential: 1.0,
            energy: 1.0,
            energy_chain: vec![0.0, 1.0, 2.5],
            delta_t: 1.0,
            omega_min: 0.0,
            omega_max: 4.0,
            omega_steps: 101,
            delta: 1e-3,
            tolerance: 1e-6,
            format: OutputFormat::Csv,
            output: None,
        }
    }
}

pub(crate) fn config_error(field: impl Into<String>, reason: impl Into<String>) -> ZenoError {
    ZenoError::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| config_error(key, format!("cannot parse `{}`", value.trim())))
}

/// Keys accepted by [`SweepConfig::set`]; hyphens and underscores are
/// interchangeable.
pub const CONFIG_KEYS: [&str; 14] = [
    "mode",
    "n_min",
    "n_max",
    "potential",
    "epsilon",
    "energies",
    "delta_t",
    "omega_min",
    "omega_max",
    "omega_steps",
    "delta",
    "tolerance",
    "format",
    "out",
];

impl SweepConfig {
    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let k = key.as_str();
        match k {
            "mode" => self.mode = value.parse()?,
            "n_min" => self.n_min = parse(k, value)?,
            "n_max" => self.n_max = parse(k, value)?,
            "potential" => self.potential = parse(k, value)?,
            "epsilon" => self.energy = parse(k, value)?,
            "energies" => {
                self.energy_chain = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse(k, s))
                    .collect::<Result<_>>()?
            }
            "delta_t" => self.delta_t = parse(k, value)?,
            "omega_min" => self.omega_min = parse(k, value)?,
            "omega_max" => self.omega_max = parse(k, value)?,
            "omega_steps" => self.omega_steps = parse(k, value)?,
            "delta" => self.delta = parse(k, value)?,
            "tolerance" => self.tolerance = parse(k, value)?,
            "format" => self.format = value.parse()?,
            "out" => {
                let v = value.trim();
                self.output = if v.is_empty() || v == "-" { None } else { Some(PathBuf::from(v)) };
            }
            _ => return Err(config_error(key.clone(), "unknown key")),
        }
        Ok(())
    }

    /// Applies a `key = value` text, one entry per line, `#` starting a
    /// comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                config_error(format!("line {}", index + 1), format!("expected `key = value`, got `{line}`"))
            })?;
            self.set(key, value).map_err(|e| match e {
                ZenoError::Config { field, reason } => {
                    config_error(format!("line {}: {field}", index + 1), reason)
                }
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error("config", format!("{}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("potential", self.potential),
            ("epsilon", self.energy),
            ("delta_t", self.delta_t),
            ("omega_min", self.omega_min),
            ("omega_max", self.omega_max),
            ("delta", self.delta),
            ("tolerance", self.tolerance),
        ];
        if let Some((name, _)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err(config_error(*name, "must be finite"));
        }
        if self.n_min < 1 || self.n_min > self.n_max {
            return Err(config_error("n_min", format!("range {}..={} is empty or starts below 1", self.n_min, self.n_max)));
        }
        if !(0.0..=1.0).contains(&self.potential) {
            return Err(config_error("potential", "must lie in [0, 1]"));
        }
        if self.delta_t < 0.0 {
            return Err(config_error("delta_t", "must be >= 0"));
        }
        if self.omega_steps < 2 {
            return Err(config_error("omega_steps", "must be at least 2"));
        }
        if self.omega_min >= self.omega_max {
            return Err(config_error("omega_min", "must be below omega_max"));
        }
        if self.delta <= 0.0 {
            return Err(config_error("delta", "must be > 0"));
        }
        if self.tolerance <= 0.0 {
            return Err(config_error("tolerance", "must be > 0"));
        }
        if self.energy_chain.len() < 2 || self.energy_chain.iter().any(|e| !e.is_finite()) {
            return Err(config_error("energies", "needs at least two finite levels"));
        }
        Ok(())
    }
}
