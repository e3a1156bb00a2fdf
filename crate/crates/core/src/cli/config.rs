//! Run configuration: defaults, a flat `key = value` file, then flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
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
            other => Err(Error::domain(format!("unknown format {other:?}, expected csv, json or svg"))),
        }
    }
}

/// Env var naming the default output directory.
pub const OUT_DIR_ENV: &str = "SUBSOL_OUT_DIR";

/// Every knob a subcommand may read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub alpha: f64,
    pub b: f64,
    /// Replaces the derived log coefficient `a` of the ansatz.
    pub a: Option<f64>,
    pub r0: f64,
    /// Initial energy; defaults to that of the truncated vortex.
    pub e0: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: usize,
    pub output_dir: PathBuf,
    pub format: Format,
    pub tol_quad: f64,
    /// Threshold on finite-difference residuals.
    pub tol_fd: f64,
    pub beta: f64,
    pub log_y: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 1.0,
            b: 0.0,
            a: None,
            r0: 1.0,
            e0: None,
            t_min: None,
            t_max: None,
            steps: 100,
            output_dir: PathBuf::from("out"),
            format: Format::Csv,
            tol_quad: 1e-11,
            tol_fd: 1e-5,
            beta: 1.0,
            log_y: false,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::domain(format!("config key {key}: cannot parse {value:?}")))
}

impl RunConfig {
    /// Defaults with the output directory taken from `SUBSOL_OUT_DIR` when set.
    pub fn from_env() -> Self {
        let mut cfg = RunConfig::default();
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
            if !dir.is_empty() {
                cfg.output_dir = PathBuf::from(dir);
            }
        }
        cfg
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        match key.as_str() {
            "alpha" => self.alpha = parse(&key, value)?,
            "b" => self.b = parse(&key, value)?,
            "a" => self.a = Some(parse(&key, value)?),
            "r0" => self.r0 = parse(&key, value)?,
            "e0" | "E0" => self.e0 = Some(parse(&key, value)?),
            "t_min" => self.t_min = Some(parse(&key, value)?),
            "t_max" => self.t_max = Some(parse(&key, value)?),
            "steps" | "t_steps" => self.steps = parse(&key, value)?,
            "out" | "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "format" => self.format = value.parse()?,
            "tol_quad" => self.tol_quad = parse(&key, value)?,
            "tol_fd" => self.tol_fd = parse(&key, value)?,
            "beta" => self.beta = parse(&key, value)?,
            "log_y" => self.log_y = parse(&key, value)?,
            _ => return Err(Error::domain(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat config text. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::domain(format!("config line {}: expected key = value", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_text(&text)
    }

    pub fn out_path(&self, stem: &str) -> PathBuf {
        self.output_dir.join(format!("{stem}.{}", self.format.extension()))
    }
}
