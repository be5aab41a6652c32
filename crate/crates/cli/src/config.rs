//! key=value configuration files. Flags win over the file, the file wins over
//! built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;

use crate::args::{parse_complex, Format, GridArgs, Params};
use crate::error::CliError;

pub const DIM_ENV: &str = "FOCKBENCH_DIM";
pub const DEFAULT_DIM: usize = 64;

const KEYS: &[&str] = &[
    "alpha", "r", "phi", "theta", "s", "zeta", "q", "k", "xi", "lambda", "z", "m", "t", "dim",
    "levels", "x-min", "x-max", "points", "format", "tol",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("config line {}: expected key=value", no + 1)));
            };
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", no + 1)));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    fn get<T>(&self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, CliError> {
        self.entries
            .get(key)
            .map(|v| parse(v).map_err(|e| CliError::Usage(format!("config {key}: {e}"))))
            .transpose()
    }

    fn fill<T>(&self, slot: &mut Option<T>, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<(), CliError> {
        if slot.is_none() {
            *slot = self.get(key, parse)?;
        }
        Ok(())
    }

    pub fn apply_params(&self, p: &mut Params) -> Result<(), CliError> {
        self.fill(&mut p.alpha, "alpha", parse_complex)?;
        self.fill(&mut p.r, "r", num)?;
        self.fill(&mut p.phi, "phi", num)?;
        self.fill(&mut p.theta, "theta", num)?;
        self.fill(&mut p.s, "s", num)?;
        self.fill(&mut p.zeta, "zeta", parse_complex)?;
        self.fill(&mut p.q, "q", num)?;
        self.fill(&mut p.k, "k", num)?;
        self.fill(&mut p.xi, "xi", parse_complex)?;
        self.fill(&mut p.lambda, "lambda", num)?;
        self.fill(&mut p.z, "z", parse_complex)?;
        self.fill(&mut p.m, "m", num)?;
        self.fill(&mut p.t, "t", num)?;
        self.fill(&mut p.dim, "dim", num)?;
        self.fill(&mut p.levels, "levels", num)
    }

    pub fn apply_grid(&self, g: &mut GridArgs) -> Result<(), CliError> {
        self.fill(&mut g.x_min, "x-min", num)?;
        self.fill(&mut g.x_max, "x-max", num)?;
        self.fill(&mut g.points, "points", num)
    }

    pub fn apply_format(&self, f: &mut Option<Format>) -> Result<(), CliError> {
        self.fill(f, "format", |s| Format::from_str(s, true))
    }

    pub fn apply_tol(&self, t: &mut Option<f64>) -> Result<(), CliError> {
        self.fill(t, "tol", num)
    }
}

fn num<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("cannot parse {s:?}"))
}

/// Default basis size when neither flag nor config gives one.
pub fn env_dim() -> Result<usize, CliError> {
    match std::env::var(DIM_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{DIM_ENV}={v:?} is not a dimension"))),
        Err(_) => Ok(DEFAULT_DIM),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fockbench::C64;

    #[test]
    fn flags_beat_file() {
        let cfg = ConfigFile::parse("# defaults\nr = 0.5\nphi=1\nalpha=1+2i\n\nx_min = -8\n").unwrap();
        let mut p = Params {
            r: Some(0.9),
            ..Default::default()
        };
        cfg.apply_params(&mut p).unwrap();
        assert_eq!(p.r, Some(0.9));
        assert_eq!(p.phi, Some(1.0));
        assert_eq!(p.alpha, Some(C64::new(1.0, 2.0)));
        assert_eq!(p.theta, None);
        let mut g = GridArgs::default();
        cfg.apply_grid(&mut g).unwrap();
        assert_eq!(g.x_min, Some(-8.0));
    }

    #[test]
    fn bad_lines() {
        assert!(ConfigFile::parse("r 0.5").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        let cfg = ConfigFile::parse("dim = many").unwrap();
        assert!(cfg.apply_params(&mut Params::default()).is_err());
    }

    #[test]
    fn format_key() {
        let cfg = ConfigFile::parse("format = CSV").unwrap();
        let mut f = None;
        cfg.apply_format(&mut f).unwrap();
        assert_eq!(f, Some(Format::Csv));
    }
}
