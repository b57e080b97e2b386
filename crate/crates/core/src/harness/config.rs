//! Plain-text `key=value` run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::dynamics::{advance, Mode, Model, RunOptions};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::record::RunRecord;
use crate::thermo::{InitialData, LightSpeed, PhysParams};

#[derive(Debug, Clone, PartialEq)]
pub enum InitSource {
    Demo,
    File(PathBuf),
}

impl std::fmt::Display for InitSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitSource::Demo => write!(f, "builtin:demo"),
            InitSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl std::str::FromStr for InitSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "builtin:demo" {
            Ok(InitSource::Demo)
        } else if let Some(p) = s.strip_prefix("file:") {
            Ok(InitSource::File(PathBuf::from(p)))
        } else {
            Err(Error::Config(format!("unknown init source `{s}` (builtin:demo | file:PATH)")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub mode: Mode,
    pub gamma: f64,
    pub c: LightSpeed,
    pub mu: f64,
    pub cfl: f64,
    pub n_cells: usize,
    pub delta: f64,
    pub t_end: f64,
    pub output_every: f64,
    pub init: InitSource,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            mode: Mode::Relativistic,
            gamma: 2.0,
            c: LightSpeed::Finite(16.0),
            mu: 0.0,
            cfl: 0.5,
            n_cells: 128,
            delta: 0.1,
            t_end: 0.1,
            output_every: 0.01,
            init: InitSource::Demo,
        }
    }
}

pub const KEYS: [&str; 10] = [
    "mode",
    "gamma",
    "c",
    "mu",
    "cfl",
    "n_cells",
    "delta",
    "t_end",
    "output_every",
    "init",
];

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value for `{key}`: `{v}`")))
}

impl Config {
    /// Parse `key=value` lines over the defaults. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "mode" => {
                self.mode = match value {
                    "relativistic" => Mode::Relativistic,
                    "classical" => Mode::Classical,
                    other => return Err(Error::Config(format!("unknown mode `{other}`"))),
                }
            }
            "gamma" => self.gamma = num(key, value)?,
            "c" => self.c = value.parse()?,
            "mu" => self.mu = num(key, value)?,
            "cfl" => self.cfl = num(key, value)?,
            "n_cells" => self.n_cells = num(key, value)?,
            "delta" => self.delta = num(key, value)?,
            "t_end" => self.t_end = num(key, value)?,
            "output_every" => self.output_every = num(key, value)?,
            "init" => self.init = value.parse()?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mode = match self.mode {
            Mode::Relativistic => "relativistic",
            Mode::Classical => "classical",
        };
        [
            ("mode", mode.to_string()),
            ("gamma", self.gamma.to_string()),
            ("c", self.c.to_string()),
            ("mu", self.mu.to_string()),
            ("cfl", self.cfl.to_string()),
            ("n_cells", self.n_cells.to_string()),
            ("delta", self.delta.to_string()),
            ("t_end", self.t_end.to_string()),
            ("output_every", self.output_every.to_string()),
            ("init", self.init.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    pub fn to_text(&self) -> String {
        self.to_map().iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n_cells, self.delta)
    }

    pub fn params(&self) -> Result<PhysParams> {
        PhysParams::new(self.c, self.gamma, self.mu, self.cfl)
    }

    pub fn initial_data(&self, grid: &Grid) -> Result<InitialData> {
        match &self.init {
            InitSource::Demo => InitialData::demo(grid, self.gamma),
            InitSource::File(p) => {
                let text = std::fs::read_to_string(p)?;
                InitialData::from_columns(&text, grid, self.gamma)
            }
        }
    }

    /// Grid, data and parameters, with the admissibility gate applied.
    pub fn model(&self) -> Result<Model> {
        if !(self.t_end > 0.0) {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        let grid = self.grid()?;
        let init = self.initial_data(&grid)?;
        Model::new(grid, init, self.params()?, self.mode)
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions::new(self.t_end, self.output_every)
    }
}

/// Full adaptive run of a configuration; the record carries the
/// configuration in its metadata.
pub fn run_simulation(cfg: &Config) -> Result<RunRecord> {
    let model = cfg.model()?;
    let (_, mut record) = advance(&model, model.initial_state(), &cfg.run_options())?;
    record.meta = cfg.to_map();
    Ok(record)
}
