//! Run configuration: command-line flags, optionally overridden by a TOML
//! file.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, Duration, Utc};
use netroles::graph::{Interval, UserId};
use netroles::metrics::{Execution, PathMode};
use netroles::roles::RoleThresholds;
use netroles::temporal::{AnalysisOptions, WindowPlan};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(try_from = "String")]
pub enum WindowMode {
    CalendarMonth,
    Days(u32),
}

impl FromStr for WindowMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "calendar-month" {
            return Ok(WindowMode::CalendarMonth);
        }
        let days = s
            .strip_prefix("duration:")
            .ok_or_else(|| format!("expected calendar-month or duration:<days>, got {s:?}"))?;
        match days.parse::<u32>() {
            Ok(n) if n > 0 => Ok(WindowMode::Days(n)),
            _ => Err(format!(
                "window duration must be a positive day count, got {days:?}"
            )),
        }
    }
}

impl TryFrom<String> for WindowMode {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl fmt::Display for WindowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowMode::CalendarMonth => f.write_str("calendar-month"),
            WindowMode::Days(n) => write!(f, "duration:{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exports {
    pub json: bool,
    pub csv: bool,
    pub gexf: bool,
    pub dot: bool,
}

impl Default for Exports {
    fn default() -> Self {
        Exports {
            json: true,
            csv: true,
            gexf: false,
            dot: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub window: WindowMode,
    pub span: Option<Interval>,
    pub thresholds: RoleThresholds,
    pub seed_user: Option<UserId>,
    pub louvain_seed: u64,
    pub centrality: PathMode,
    pub execution: Execution,
    pub out_dir: PathBuf,
    pub exports: Exports,
    pub strict: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            window: WindowMode::CalendarMonth,
            span: None,
            thresholds: RoleThresholds::default(),
            seed_user: None,
            louvain_seed: 0,
            centrality: PathMode::default(),
            execution: Execution::Parallel,
            out_dir: PathBuf::from("out"),
            exports: Exports::default(),
            strict: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.inputs.is_empty() {
            return Err(CliError::Config("no input file given".into()));
        }
        if self.out_dir.is_file() {
            return Err(CliError::Config(format!(
                "output path {} is a file",
                self.out_dir.display()
            )));
        }
        self.thresholds
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn plan(&self) -> WindowPlan {
        match self.window {
            WindowMode::CalendarMonth => WindowPlan::CalendarMonths { span: self.span },
            WindowMode::Days(n) => WindowPlan::Fixed {
                duration: Duration::days(n.into()),
                span: self.span,
            },
        }
    }

    pub fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            thresholds: self.thresholds.clone(),
            seed_user: self.seed_user.clone(),
            louvain_seed: self.louvain_seed,
            centrality: self.centrality,
            execution: self.execution,
        }
    }

    /// Applies a TOML configuration file on top of the current values.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = read_config(path)?;
        let file: ConfigFile = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        file.apply(self)
    }
}

fn read_config(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Loads a thresholds file; keys left out keep their defaults.
pub fn load_thresholds(path: &Path) -> Result<RoleThresholds, CliError> {
    let text = read_config(path)?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn parse_user(raw: &str) -> Result<UserId, CliError> {
    UserId::new(raw).map_err(|e| CliError::Config(e.to_string()))
}

pub fn parse_span(
    start: Option<DateTime<Utc>>,
    end: Option<DateTime<Utc>>,
) -> Result<Option<Interval>, CliError> {
    match (start, end) {
        (None, None) => Ok(None),
        (Some(s), Some(e)) => Interval::new(s, e)
            .map(Some)
            .map_err(|e| CliError::Config(e.to_string())),
        _ => Err(CliError::Config(
            "span_start and span_end must be given together".into(),
        )),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    input: Option<Vec<PathBuf>>,
    window: Option<WindowMode>,
    span_start: Option<DateTime<Utc>>,
    span_end: Option<DateTime<Utc>>,
    top_k: Option<usize>,
    seed_user: Option<String>,
    louvain_seed: Option<u64>,
    centrality: Option<PathMode>,
    parallel: Option<bool>,
    out: Option<PathBuf>,
    json: Option<bool>,
    csv: Option<bool>,
    gexf: Option<bool>,
    dot: Option<bool>,
    strict: Option<bool>,
    thresholds: Option<toml::Table>,
}

impl ConfigFile {
    fn apply(self, c: &mut RunConfig) -> Result<(), CliError> {
        if let Some(v) = self.input {
            c.inputs = v;
        }
        if let Some(v) = self.window {
            c.window = v;
        }
        if self.span_start.is_some() || self.span_end.is_some() {
            c.span = parse_span(self.span_start, self.span_end)?;
        }
        if let Some(table) = self.thresholds {
            // keys present in the file replace the current values one by one
            let mut merged = toml::Table::try_from(&c.thresholds)
                .map_err(|e| CliError::Config(e.to_string()))?;
            merged.extend(table);
            c.thresholds = merged
                .try_into()
                .map_err(|e| CliError::Config(format!("thresholds: {e}")))?;
        }
        if let Some(v) = self.top_k {
            c.thresholds.top_k = v;
        }
        if let Some(v) = self.seed_user {
            c.seed_user = Some(parse_user(&v)?);
        }
        if let Some(v) = self.louvain_seed {
            c.louvain_seed = v;
        }
        if let Some(v) = self.centrality {
            c.centrality = v;
        }
        if let Some(v) = self.parallel {
            c.execution = if v {
                Execution::Parallel
            } else {
                Execution::Serial
            };
        }
        if let Some(v) = self.out {
            c.out_dir = v;
        }
        let e = &mut c.exports;
        for (slot, v) in [
            (&mut e.json, self.json),
            (&mut e.csv, self.csv),
            (&mut e.gexf, self.gexf),
            (&mut e.dot, self.dot),
            (&mut c.strict, self.strict),
        ] {
            if let Some(v) = v {
                *slot = v;
            }
        }
        Ok(())
    }
}
