//! Run configuration: a flat `key = value` file overlaid by command-line
//! flags.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use maryland_core::{Complex64, LaurentOperator};
use serde::Serialize;

/// A problem with the configuration or flags; reported with exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Qklr,
    Dunlap,
    Custom,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Every setting the subcommands understand. Unset fields are `None`; each
/// subcommand fills its own defaults before running, and the filled-in
/// value is what gets written to the JSON summaries.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: Option<Model>,
    pub k: Option<f64>,
    pub tau: Option<f64>,
    pub p: Option<u64>,
    pub q: Option<u64>,
    #[serde(rename = "T")]
    pub hopping: Option<f64>,
    #[serde(rename = "E")]
    pub field: Option<f64>,
    pub periods: Option<u64>,
    pub kicks: Option<u64>,
    pub dim: Option<usize>,
    pub window: Option<i64>,
    pub margin: Option<usize>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub scan_lo: Option<f64>,
    pub scan_hi: Option<f64>,
    pub scan_points: Option<usize>,
    pub scan_tol: Option<f64>,
    /// Custom model: `offset:re:im` entries for offsets `≥ 0`, comma
    /// separated; negative offsets are the hermitian partners.
    pub coupling: Option<String>,
    pub omega: Option<f64>,
    pub time: Option<f64>,
    pub format: Option<Format>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, UsageError> {
    value
        .parse()
        .map_err(|_| UsageError(format!("invalid value for `{key}`: `{value}`")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, UsageError> {
    T::from_str(value, true).map_err(|_| UsageError(format!("invalid value for `{key}`: `{value}`")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return usage(format!("line {}: expected `key = value`, got `{line}`", lineno + 1));
            };
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        match key {
            "model" => self.model = Some(parse_enum(key, value)?),
            "k" => self.k = Some(parse_value(key, value)?),
            "tau" => self.tau = Some(parse_value(key, value)?),
            "p" => self.p = Some(parse_value(key, value)?),
            "q" => self.q = Some(parse_value(key, value)?),
            "T" => self.hopping = Some(parse_value(key, value)?),
            "E" => self.field = Some(parse_value(key, value)?),
            "periods" => self.periods = Some(parse_value(key, value)?),
            "kicks" => self.kicks = Some(parse_value(key, value)?),
            "dim" => self.dim = Some(parse_value(key, value)?),
            "window" => self.window = Some(parse_value(key, value)?),
            "margin" => self.margin = Some(parse_value(key, value)?),
            "tolerance" => self.tolerance = Some(parse_value(key, value)?),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "scan_lo" => self.scan_lo = Some(parse_value(key, value)?),
            "scan_hi" => self.scan_hi = Some(parse_value(key, value)?),
            "scan_points" => self.scan_points = Some(parse_value(key, value)?),
            "scan_tol" => self.scan_tol = Some(parse_value(key, value)?),
            "coupling" => self.coupling = Some(value.to_string()),
            "omega" => self.omega = Some(parse_value(key, value)?),
            "time" => self.time = Some(parse_value(key, value)?),
            "format" => self.format = Some(parse_enum(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return usage(format!("unknown config key `{key}`")),
        }
        Ok(())
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(self, flags: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: flags.$f.or(self.$f)),* } };
        }
        pick!(
            model, k, tau, p, q, hopping, field, periods, kicks, dim, window, margin, tolerance, seed, scan_lo,
            scan_hi, scan_points, scan_tol, coupling, omega, time, format, out
        )
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn require_model(&self, expected: Model) -> Result<(), UsageError> {
        match self.model {
            Some(m) if m != expected => usage(format!(
                "config selects model `{}` but the subcommand runs `{}`",
                model_name(m),
                model_name(expected)
            )),
            _ => Ok(()),
        }
    }

    /// Parse `coupling` into a hermitian Laurent operator.
    pub fn coupling_operator(&self) -> Result<Option<LaurentOperator>, UsageError> {
        let Some(spec) = &self.coupling else { return Ok(None) };
        let mut pairs = Vec::new();
        for entry in spec.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let parts: Vec<&str> = entry.split(':').map(str::trim).collect();
            let [offset, re, im] = parts[..] else {
                return usage(format!("coupling entry `{entry}` must be offset:re:im"));
            };
            let offset: i64 = parse_value("coupling", offset)?;
            let c = Complex64::new(parse_value("coupling", re)?, parse_value("coupling", im)?);
            if offset < 0 {
                return usage("coupling offsets must be ≥ 0; negative offsets are implied");
            }
            if offset == 0 {
                if c.im != 0.0 {
                    return usage("the diagonal coupling must be real");
                }
                pairs.push((0, c));
            } else {
                pairs.push((offset, c));
                pairs.push((-offset, c.conj()));
            }
        }
        if pairs.is_empty() {
            return usage("coupling is empty");
        }
        Ok(Some(LaurentOperator::from_pairs(pairs)))
    }
}

pub fn model_name(m: Model) -> &'static str {
    match m {
        Model::Qklr => "qklr",
        Model::Dunlap => "dunlap",
        Model::Custom => "custom",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let cfg = RunConfig::parse("# comment\nk = 1.5\n\ntau=0.25  # trailing\nT = 2\nformat = json\n").unwrap();
        assert_eq!(cfg.k, Some(1.5));
        assert_eq!(cfg.tau, Some(0.25));
        assert_eq!(cfg.hopping, Some(2.0));
        assert_eq!(cfg.format(), Format::Json);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(RunConfig::parse("k 1").is_err());
        assert!(RunConfig::parse("k = one").is_err());
        assert!(RunConfig::parse("unknown = 1").is_err());
        assert!(RunConfig::parse("model = rotor").is_err());
    }

    #[test]
    fn flags_win() {
        let file = RunConfig::parse("k = 1\ntau = 2\n").unwrap();
        let flags = RunConfig {
            k: Some(3.0),
            ..Default::default()
        };
        let cfg = file.overlay(flags);
        assert_eq!(cfg.k, Some(3.0));
        assert_eq!(cfg.tau, Some(2.0));
    }

    #[test]
    fn coupling_spec() {
        let cfg = RunConfig::parse("coupling = 0:0.5:0, 2:0.1:-0.2").unwrap();
        let op = cfg.coupling_operator().unwrap().unwrap();
        assert_eq!(op.bandwidth(), 2);
        assert_eq!(op.coeff(-2), Complex64::new(0.1, 0.2));
        assert!(op.is_hermitian());
        assert!(RunConfig::parse("coupling = 1:2").unwrap().coupling_operator().is_err());
        assert!(RunConfig::parse("coupling = 0:1:1").unwrap().coupling_operator().is_err());
    }

    #[test]
    fn model_mismatch() {
        let cfg = RunConfig::parse("model = dunlap").unwrap();
        assert!(cfg.require_model(Model::Qklr).is_err());
        assert!(cfg.require_model(Model::Dunlap).is_ok());
    }
}
