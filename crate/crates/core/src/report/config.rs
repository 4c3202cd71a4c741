use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ParameterTag;
use crate::numerics::{linear_grid, log_grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::Config(format!("unknown output format `{other}` (csv, json, svg)"))),
        }
    }
}

/// Which command a configuration is for; selects the defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Table,
    FigureFrequency,
    FigureTemperature,
    Bound,
    Strategy,
}

impl Command {
    /// Stem used for output file names.
    pub fn stem(self) -> &'static str {
        match self {
            Command::Table => "table",
            Command::FigureFrequency => "figure-fre",
            Command::FigureTemperature => "figure-temp",
            Command::Bound => "bound",
            Command::Strategy => "strategy",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.stem())
    }
}

/// Everything a command needs. Precedence: command defaults, then the
/// config file, then command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub target: ParameterTag,
    pub gamma: f64,
    pub n_env: f64,
    /// Mean photon number `N` of the probe.
    pub photons: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// Single evaluation time; replaces the grid when set.
    pub time: Option<f64>,
    pub cutoff: Option<usize>,
    pub outdir: String,
    pub formats: Vec<Format>,
    pub seed: u64,
    pub strategy: Option<String>,
    /// Squeezing parameter `r` of squeezed probes.
    pub squeeze: f64,
    /// Signal strength used for the cat protocol validity window.
    pub epsilon: f64,
}

pub const CONFIG_KEYS: [&str; 16] = [
    "target", "gamma", "n_env", "photons", "t_min", "t_max", "points", "spacing", "time", "cutoff",
    "outdir", "formats", "seed", "strategy", "squeeze", "epsilon",
];

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let base = Self {
            command,
            target: ParameterTag::Frequency,
            gamma: 1.0,
            n_env: 0.0,
            photons: 10.0,
            t_min: 1e-3,
            t_max: 10.0,
            points: 200,
            spacing: Spacing::Log,
            time: None,
            cutoff: None,
            outdir: "out".into(),
            formats: vec![Format::Csv, Format::Json, Format::Svg],
            seed: 0,
            strategy: None,
            squeeze: 1.0,
            epsilon: 0.01,
        };
        match command {
            Command::Table | Command::FigureFrequency => base,
            Command::FigureTemperature => Self {
                target: ParameterTag::Temperature,
                n_env: 0.1,
                photons: 5.0,
                t_max: 50.0,
                points: 120,
                ..base
            },
            Command::Bound => Self {
                n_env: 0.1,
                photons: 5.0,
                ..base
            },
            Command::Strategy => Self { points: 100, ..base },
        }
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", no + 1)))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", no + 1)))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        match key.as_str() {
            "target" => self.target = value.parse()?,
            "gamma" => self.gamma = real(&key, value)?,
            "n_env" => self.n_env = real(&key, value)?,
            "photons" | "n" => self.photons = real(&key, value)?,
            "t_min" => self.t_min = real(&key, value)?,
            "t_max" => self.t_max = real(&key, value)?,
            "points" => self.points = integer(&key, value)?,
            "spacing" => {
                self.spacing = match value.to_ascii_lowercase().as_str() {
                    "log" => Spacing::Log,
                    "linear" | "lin" => Spacing::Linear,
                    other => return Err(Error::Config(format!("spacing must be log or linear, got `{other}`"))),
                }
            }
            "time" => self.time = optional(value).map(|v| real(&key, v)).transpose()?,
            "cutoff" => self.cutoff = optional(value).map(|v| integer(&key, v)).transpose()?,
            "outdir" => self.outdir = value.to_string(),
            "formats" => {
                let mut f = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(Format::from_str)
                    .collect::<Result<Vec<_>>>()?;
                f.sort();
                f.dedup();
                self.formats = f;
            }
            "seed" => self.seed = value.parse().map_err(|_| Error::Config(format!("seed must be an unsigned integer, got `{value}`")))?,
            "strategy" => self.strategy = optional(value).map(str::to_string),
            "squeeze" => self.squeeze = real(&key, value)?,
            "epsilon" => self.epsilon = real(&key, value)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown key `{other}` (known: {})",
                    CONFIG_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be positive, got {}", self.gamma));
        }
        if !(self.n_env >= 0.0 && self.n_env.is_finite()) {
            return bad(format!("n_env must be non-negative, got {}", self.n_env));
        }
        if !(self.photons >= 0.0 && self.photons.is_finite()) {
            return bad(format!("photons must be non-negative, got {}", self.photons));
        }
        if self.points < 2 {
            return bad(format!("points must be at least 2, got {}", self.points));
        }
        if !(self.t_min >= 0.0 && self.t_max > self.t_min && self.t_max.is_finite()) {
            return bad(format!("need 0 ≤ t_min < t_max, got [{}, {}]", self.t_min, self.t_max));
        }
        if self.spacing == Spacing::Log && self.t_min <= 0.0 {
            return bad("log spacing needs t_min > 0".into());
        }
        if let Some(t) = self.time {
            if !(t >= 0.0 && t.is_finite()) {
                return bad(format!("time must be non-negative, got {t}"));
            }
        }
        if let Some(d) = self.cutoff {
            if d < 2 {
                return bad(format!("cutoff must be at least 2, got {d}"));
            }
        }
        if self.formats.is_empty() {
            return bad("formats must not be empty".into());
        }
        if !(self.squeeze >= 0.0 && self.squeeze.is_finite()) {
            return bad(format!("squeeze must be non-negative, got {}", self.squeeze));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        Ok(())
    }

    /// Evaluation times in units of `1/Γ` scaled by the configured `Γ`.
    pub fn times(&self) -> Vec<f64> {
        if let Some(t) = self.time {
            return vec![t];
        }
        let (lo, hi) = (self.t_min / self.gamma, self.t_max / self.gamma);
        match self.spacing {
            Spacing::Log => log_grid(lo, hi, self.points),
            Spacing::Linear => linear_grid(lo, hi, self.points),
        }
    }
}

fn optional(value: &str) -> Option<&str> {
    match value.trim() {
        "" | "none" | "-" => None,
        v => Some(v),
    }
}

fn real(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("`{key}` must be a number, got `{value}`")))
}

fn integer(key: &str, value: &str) -> Result<usize> {
    value
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("`{key}` must be a non-negative integer, got `{value}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_then_flags() {
        let mut c = RunConfig::defaults(Command::FigureTemperature);
        assert_eq!((c.photons, c.n_env, c.points), (5.0, 0.1, 120));
        c.apply_text("# comment\nphotons = 7   # inline\nformats = json,csv\n\ntime = 0.5\n")
            .unwrap();
        assert_eq!(c.photons, 7.0);
        assert_eq!(c.formats, vec![Format::Csv, Format::Json]);
        c.set("photons", "3").unwrap();
        assert_eq!(c.photons, 3.0);
        assert_eq!(c.times(), vec![0.5]);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::defaults(Command::Table);
        assert!(matches!(c.apply_text("photons 3"), Err(Error::Config(_))));
        assert!(matches!(c.set("colour", "red"), Err(Error::Config(_))));
        assert!(c.set("points", "-2").is_err());
        c.points = 1;
        assert!(c.validate().is_err());
        let mut c = RunConfig::defaults(Command::Table);
        c.formats.clear();
        assert!(c.validate().is_err());
        let mut c = RunConfig::defaults(Command::Table);
        c.n_env = -0.1;
        assert!(c.validate().is_err());
    }

    #[test]
    fn grids() {
        let c = RunConfig::defaults(Command::FigureFrequency);
        let t = c.times();
        assert_eq!(t.len(), 200);
        assert!((t[0] - 1e-3).abs() < 1e-15 && (t[199] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let c = RunConfig::defaults(Command::Bound);
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(c, back);
    }
}
