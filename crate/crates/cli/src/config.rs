//! Run settings merged from defaults, an optional key=value file, the
//! environment and command-line flags, in increasing priority.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use geolab::oracle::{DEFAULT_LAMBDA_A, DEFAULT_LAMBDA_B};
use geolab::SurfaceKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub surface: Option<SurfaceKind>,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub length_cap: usize,
    pub k_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            surface: None,
            lambda_a: DEFAULT_LAMBDA_A,
            lambda_b: DEFAULT_LAMBDA_B,
            format: None,
            workers: None,
            length_cap: 14,
            k_cap: 60,
        }
    }
}

fn positive(key: &str, v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{key} must be positive, got {v}"))
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |e: &dyn std::fmt::Display| format!("{key}={value}: {e}");
        match key {
            "surface" => self.surface = Some(value.parse().map_err(|e| bad(&e))?),
            "lambda_a" => self.lambda_a = positive(key, value.parse().map_err(|e| bad(&e))?)?,
            "lambda_b" => self.lambda_b = positive(key, value.parse().map_err(|e| bad(&e))?)?,
            "format" => self.format = Some(value.parse().map_err(|e: String| bad(&e))?),
            "workers" => self.workers = Some(value.parse().map_err(|e| bad(&e))?),
            "length_cap" => self.length_cap = value.parse().map_err(|e| bad(&e))?,
            "k_cap" => self.k_cap = value.parse().map_err(|e| bad(&e))?,
            other => return Err(format!("unknown config key {other:?}")),
        }
        Ok(())
    }

    pub fn parse_file(&mut self, text: &str) -> Result<(), String> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", n + 1))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(())
    }

    pub fn load(&mut self, path: &Path) -> Result<(), String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        self.parse_file(&text)
    }
}
