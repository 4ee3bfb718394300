//! Run configuration: a flat `key = value` document with `#` comments.
//!
//! Values are strings, numbers, or booleans; list-valued keys take
//! comma-separated entries. Unknown keys and constraint violations are
//! rejected with the offending key named. Omitted keys default to the
//! standard parameters (N=100, M=8, S=15, Q=4, 500 generations).

use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evolution::{ModelParams, Strategy};
use crate::experiments::{ClusterOptions, SweepSpec};

/// Full configuration for the command-line front end.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Population size N.
    pub n: usize,
    /// Meaning count M.
    pub m: usize,
    /// Signal count S.
    pub s: usize,
    /// Sampling size Q.
    pub q: usize,
    /// Strategy used by `run`.
    pub strategy: Strategy,
    /// Relative imitation-set size used by `run`.
    pub r: f64,
    pub generations: usize,
    pub include_parent: bool,
    pub fitness_includes_self: bool,
    pub seed: u64,
    /// Realizations per sweep cell (and per `run` invocation's cell).
    pub realizations: usize,
    /// Strategies scanned by `sweep`.
    pub models: Vec<Strategy>,
    /// Population sizes scanned by `sweep`.
    pub n_values: Vec<usize>,
    /// Relative imitation-set sizes scanned by `sweep`.
    pub r_grid: Vec<f64>,
    pub k_min: usize,
    pub k_max: usize,
    pub restarts: usize,
    pub max_passes: usize,
    /// Minimum r included in power-law fits.
    pub r_cutoff: f64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 100,
            m: 8,
            s: 15,
            q: 4,
            strategy: Strategy::ModelA,
            r: 0.1,
            generations: 500,
            include_parent: true,
            fitness_includes_self: true,
            seed: 42,
            realizations: 100,
            models: Strategy::ALL.to_vec(),
            n_values: vec![50, 100, 150, 200],
            r_grid: vec![
                0.01, 0.02, 0.03, 0.05, 0.07, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.7,
            ],
            k_min: 1,
            k_max: 10,
            restarts: 10,
            max_passes: 100,
            r_cutoff: 0.03,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, expected: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("expected {expected}, got `{value}`")))
}

fn parse_list<T: FromStr>(key: &str, value: &str, expected: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|item| !item.is_empty())
        .map(|item| parse_value(key, item, expected))
        .collect()
}

impl RunConfig {
    /// Applies a single `key = value` assignment.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n" => self.n = parse_value(key, value, "an integer")?,
            "m" => self.m = parse_value(key, value, "an integer")?,
            "s" => self.s = parse_value(key, value, "an integer")?,
            "q" => self.q = parse_value(key, value, "an integer")?,
            "strategy" => {
                self.strategy = Strategy::from_str(value).map_err(|e| Error::config(key, e))?
            }
            "r" => self.r = parse_value(key, value, "a number")?,
            "generations" => self.generations = parse_value(key, value, "an integer")?,
            "include_parent" => self.include_parent = parse_value(key, value, "true or false")?,
            "fitness_includes_self" => {
                self.fitness_includes_self = parse_value(key, value, "true or false")?
            }
            "seed" => self.seed = parse_value(key, value, "an unsigned integer")?,
            "realizations" => self.realizations = parse_value(key, value, "an integer")?,
            "models" => {
                self.models = value
                    .split(',')
                    .map(str::trim)
                    .filter(|item| !item.is_empty())
                    .map(|item| Strategy::from_str(item).map_err(|e| Error::config(key, e)))
                    .collect::<Result<Vec<_>>>()?
            }
            "n_values" => self.n_values = parse_list(key, value, "an integer")?,
            "r_grid" => self.r_grid = parse_list(key, value, "a number")?,
            "k_min" => self.k_min = parse_value(key, value, "an integer")?,
            "k_max" => self.k_max = parse_value(key, value, "an integer")?,
            "restarts" => self.restarts = parse_value(key, value, "an integer")?,
            "max_passes" => self.max_passes = parse_value(key, value, "an integer")?,
            "r_cutoff" => self.r_cutoff = parse_value(key, value, "a number")?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Checks every constraint the simulation and analysis modules impose.
    pub fn validate(&self) -> Result<()> {
        self.model_params().validate()?;
        self.cluster_options().validate()?;
        if self.realizations < 1 {
            return Err(Error::config("realizations", "must be at least 1"));
        }
        if self.models.is_empty() {
            return Err(Error::config("models", "must name at least one model"));
        }
        if self.n_values.is_empty() {
            return Err(Error::config("n_values", "must name at least one N"));
        }
        for &n in &self.n_values {
            if n < 1 {
                return Err(Error::config("n_values", "population sizes must be >= 1"));
            }
        }
        if self.r_grid.is_empty() {
            return Err(Error::config("r_grid", "must name at least one r"));
        }
        for &r in &self.r_grid {
            if !(r.is_finite() && r > 0.0 && r <= 1.0) {
                return Err(Error::config("r_grid", "values must be in (0, 1]"));
            }
        }
        if !(self.r_cutoff.is_finite() && self.r_cutoff >= 0.0) {
            return Err(Error::config("r_cutoff", "must be a nonnegative number"));
        }
        Ok(())
    }

    /// Parameters for a single `run` invocation.
    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            n: self.n,
            m: self.m,
            s: self.s,
            q: self.q,
            strategy: self.strategy,
            r_rel: self.r,
            generations: self.generations,
            include_parent: self.include_parent,
            fitness_includes_self: self.fitness_includes_self,
            seed: self.seed,
        }
    }

    pub fn cluster_options(&self) -> ClusterOptions {
        ClusterOptions {
            k_min: self.k_min,
            k_max: self.k_max,
            restarts: self.restarts,
            max_passes: self.max_passes,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            models: self.models.clone(),
            n_values: self.n_values.clone(),
            r_grid: self.r_grid.clone(),
            realizations: self.realizations,
            base_seed: self.seed,
            base: self.model_params(),
            cluster: self.cluster_options(),
        }
    }
}

/// Parses a flat key-value document into a validated configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    for (index, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Malformed {
            path: "<config>".to_string(),
            line: index + 1,
            reason: format!("expected `key = value`, got `{line}`"),
        })?;
        config.apply(key.trim(), value.trim())?;
    }
    config.validate()?;
    Ok(config)
}
