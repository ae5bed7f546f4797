//! Experiment configuration files.
//!
//! A config is a TOML file with five required top-level keys and optional
//! sections. Omitted keys take these defaults:
//!
//! | key                         | default                                  |
//! |-----------------------------|------------------------------------------|
//! | `initial.a_u` .. `b_v`      | 0.5 (data `a + b r²`)                    |
//! | `solver.nodes`              | 201                                      |
//! | `solver.cfl`                | 0.4                                      |
//! | `solver.growth_cap`         | 0.1                                      |
//! | `solver.u_stop`             | 25 (exp_power), 600 (power), 4.5 (exp_linear) |
//! | `solver.t_end`              | none                                     |
//! | `solver.record_every`       | 1                                        |
//! | `solver.max_steps`          | 20000000                                 |
//! | `solver.snapshot_every`     | 10                                       |
//! | `analysis.a`                | R/2                                      |
//! | `analysis.min_growth`       | 2                                        |
//! | `analysis.min_samples`      | 20                                       |
//! | `analysis.max_residual`     | 0.1                                      |
//! | `analysis.trend_tolerance`  | 1.2                                      |
//! | `analysis.plateau_tolerance`| 0.05                                     |
//! | `analysis.dominance`        | true                                     |
//! | `sweep.max_runs`            | 64                                       |
//! | `output.dir`                | `out`                                    |

use std::fs;
use std::path::{Path, PathBuf};

use blowup_core::analysis::FitOptions;
use blowup_core::model::{FluxFamily, InitialDataSpec, ProblemParams};
use blowup_core::solver::{default_u_stop, SolverConfig};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("sweep axis `{0}` is empty")]
    EmptyAxis(&'static str),
    #[error("sweep has {runs} runs, more than the cap of {cap}")]
    TooManyRuns { runs: usize, cap: usize },
}

fn invalid(key: &str, reason: impl ToString) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), reason: reason.to_string() }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p: Option<f64>,
    q: Option<f64>,
    #[serde(rename = "R")]
    radius: Option<f64>,
    n: Option<usize>,
    flux: Option<String>,
    #[serde(default)]
    initial: RawInitial,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    analysis: RawAnalysis,
    sweep: Option<RawSweep>,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    a_u: Option<f64>,
    b_u: Option<f64>,
    a_v: Option<f64>,
    b_v: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    nodes: Option<usize>,
    cfl: Option<f64>,
    growth_cap: Option<f64>,
    u_stop: Option<f64>,
    t_end: Option<f64>,
    record_every: Option<usize>,
    max_steps: Option<usize>,
    snapshot_every: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalysis {
    a: Option<f64>,
    min_growth: Option<f64>,
    min_samples: Option<usize>,
    max_residual: Option<f64>,
    trend_tolerance: Option<f64>,
    plateau_tolerance: Option<f64>,
    dominance: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    p: Option<Vec<f64>>,
    q: Option<Vec<f64>>,
    nodes: Option<Vec<usize>>,
    flux: Option<Vec<String>>,
    max_runs: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

/// `a + b r²` coefficients of the initial data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialSection {
    pub a_u: f64,
    pub b_u: f64,
    pub a_v: f64,
    pub b_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverSection {
    pub nodes: usize,
    pub cfl: f64,
    pub growth_cap: f64,
    pub u_stop: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    pub record_every: usize,
    pub max_steps: usize,
    pub snapshot_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisSection {
    pub a: f64,
    pub min_growth: f64,
    pub min_samples: usize,
    pub max_residual: f64,
    pub trend_tolerance: f64,
    pub plateau_tolerance: f64,
    pub dominance: bool,
}

/// Axes of a parameter sweep. An absent axis keeps the base value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "flux_names")]
    pub flux: Option<Vec<FluxFamily>>,
    pub max_runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSection {
    pub dir: PathBuf,
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub p: f64,
    pub q: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub n: usize,
    #[serde(serialize_with = "flux_name")]
    pub flux: FluxFamily,
    pub initial: InitialSection,
    pub solver: SolverSection,
    pub analysis: AnalysisSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    pub output: OutputSection,
}

fn flux_name<S: serde::Serializer>(f: &FluxFamily, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(f.name())
}

fn flux_names<S: serde::Serializer>(f: &Option<Vec<FluxFamily>>, s: S) -> Result<S::Ok, S::Error> {
    let names: Vec<&str> = f.iter().flatten().map(|x| x.name()).collect();
    names.serialize(s)
}

fn parse_flux(key: &str, name: &str) -> Result<FluxFamily, ConfigError> {
    name.parse().map_err(|e: blowup_core::error::Error| invalid(key, e))
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

/// Parses and validates config text.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))?;
    let p = raw.p.ok_or(ConfigError::Missing("p"))?;
    let q = raw.q.ok_or(ConfigError::Missing("q"))?;
    let radius = raw.radius.ok_or(ConfigError::Missing("R"))?;
    let n = raw.n.ok_or(ConfigError::Missing("n"))?;
    let flux = parse_flux("flux", &raw.flux.ok_or(ConfigError::Missing("flux"))?)?;

    let i = raw.initial;
    let s = raw.solver;
    let a = raw.analysis;
    let sweep = match raw.sweep {
        None => None,
        Some(sw) => {
            let flux = match sw.flux {
                None => None,
                Some(names) => Some(names.iter().map(|f| parse_flux("sweep.flux", f)).collect::<Result<Vec<_>, _>>()?),
            };
            Some(SweepSection { p: sw.p, q: sw.q, nodes: sw.nodes, flux, max_runs: sw.max_runs.unwrap_or(64) })
        }
    };
    let config = ExperimentConfig {
        p,
        q,
        radius,
        n,
        flux,
        initial: InitialSection {
            a_u: i.a_u.unwrap_or(0.5),
            b_u: i.b_u.unwrap_or(0.5),
            a_v: i.a_v.unwrap_or(0.5),
            b_v: i.b_v.unwrap_or(0.5),
        },
        solver: SolverSection {
            nodes: s.nodes.unwrap_or(201),
            cfl: s.cfl.unwrap_or(0.4),
            growth_cap: s.growth_cap.unwrap_or(0.1),
            u_stop: s.u_stop.unwrap_or_else(|| default_u_stop(flux)),
            t_end: s.t_end,
            record_every: s.record_every.unwrap_or(1),
            max_steps: s.max_steps.unwrap_or(20_000_000),
            snapshot_every: s.snapshot_every.unwrap_or(10),
        },
        analysis: AnalysisSection {
            a: a.a.unwrap_or(radius * 0.5),
            min_growth: a.min_growth.unwrap_or(2.0),
            min_samples: a.min_samples.unwrap_or(20),
            max_residual: a.max_residual.unwrap_or(0.1),
            trend_tolerance: a.trend_tolerance.unwrap_or(1.2),
            plateau_tolerance: a.plateau_tolerance.unwrap_or(0.05),
            dominance: a.dominance.unwrap_or(true),
        },
        sweep,
        output: OutputSection { dir: raw.output.dir.unwrap_or_else(|| PathBuf::from("out")) },
    };
    config.validate()?;
    Ok(config)
}

impl ExperimentConfig {
    /// Checks every sub-config, including each sweep point.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let params = self.problem()?;
        self.solver_config(&params)?;
        if self.solver.record_every == 0 {
            return Err(invalid("solver.record_every", "must be at least 1"));
        }
        if let Some(t) = self.solver.t_end {
            if !(t > 0.0) {
                return Err(invalid("solver.t_end", "must be positive"));
            }
        }
        if self.analysis.min_samples < 2 {
            return Err(invalid("analysis.min_samples", "must be at least 2"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.p.as_ref().is_some_and(|v| v.is_empty()) {
                return Err(ConfigError::EmptyAxis("p"));
            }
            if sweep.q.as_ref().is_some_and(|v| v.is_empty()) {
                return Err(ConfigError::EmptyAxis("q"));
            }
            if sweep.nodes.as_ref().is_some_and(|v| v.is_empty()) {
                return Err(ConfigError::EmptyAxis("nodes"));
            }
            if sweep.flux.as_ref().is_some_and(|v| v.is_empty()) {
                return Err(ConfigError::EmptyAxis("flux"));
            }
            let runs = self.sweep_points().len();
            if runs > sweep.max_runs {
                return Err(ConfigError::TooManyRuns { runs, cap: sweep.max_runs });
            }
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<ProblemParams<f64>, ConfigError> {
        let i = &self.initial;
        let initial = InitialDataSpec::quadratic(i.a_u, i.b_u, i.a_v, i.b_v);
        ProblemParams::new(self.p, self.q, self.radius, self.n, self.flux, initial)
            .map_err(|e| invalid(self.problem_key(&e), e))
    }

    fn problem_key(&self, e: &blowup_core::error::Error) -> &'static str {
        // constraint messages lead with the offending key, e.g. "p>1 required"
        let msg = e.to_string();
        let head = msg.rsplit(": ").next().unwrap_or("").split('>').next().unwrap_or("");
        match head {
            "p" => "p",
            "q" => "q",
            "pq" => "p, q",
            "R" => "R",
            "n" => "n",
            _ => "initial",
        }
    }

    pub fn solver_config(&self, params: &ProblemParams<f64>) -> Result<SolverConfig<f64>, ConfigError> {
        let s = &self.solver;
        let mut cfg = SolverConfig::for_params(params);
        cfg.nodes = s.nodes;
        cfg.cfl = s.cfl;
        cfg.growth_cap = s.growth_cap;
        cfg.u_stop = s.u_stop;
        cfg.t_end = s.t_end;
        cfg.record_every = s.record_every;
        cfg.max_steps = s.max_steps;
        cfg.snapshot_every = s.snapshot_every;
        cfg.interior_radius = self.analysis.a;
        cfg.validate(params).map_err(|e| {
            let key = match &e {
                blowup_core::error::Error::BadRadius { .. } => "analysis.a",
                _ => "solver",
            };
            invalid(key, e)
        })?;
        if s.nodes < blowup_core::model::MIN_NODES {
            return Err(invalid("solver.nodes", format!("at least {} nodes required", blowup_core::model::MIN_NODES)));
        }
        Ok(cfg)
    }

    pub fn fit_options(&self) -> FitOptions<f64> {
        let a = &self.analysis;
        FitOptions {
            min_growth: a.min_growth,
            min_samples: a.min_samples,
            max_residual: a.max_residual,
            trend_tolerance: a.trend_tolerance,
            plateau_tolerance: a.plateau_tolerance,
            ..FitOptions::default()
        }
    }

    /// Expanded sweep points in the order flux, p, q, nodes (last varies fastest).
    /// Each point is the base config with the axis values substituted and
    /// the family default `u_stop` when the base left it implicit.
    pub fn sweep_points(&self) -> Vec<ExperimentConfig> {
        let Some(sweep) = &self.sweep else {
            return vec![self.clone()];
        };
        let fluxes = sweep.flux.clone().unwrap_or_else(|| vec![self.flux]);
        let ps = sweep.p.clone().unwrap_or_else(|| vec![self.p]);
        let qs = sweep.q.clone().unwrap_or_else(|| vec![self.q]);
        let ns = sweep.nodes.clone().unwrap_or_else(|| vec![self.solver.nodes]);
        let implicit_stop = self.solver.u_stop == default_u_stop(self.flux);
        let mut out = Vec::with_capacity(fluxes.len() * ps.len() * qs.len() * ns.len());
        for &flux in &fluxes {
            for &p in &ps {
                for &q in &qs {
                    for &nodes in &ns {
                        let mut c = self.clone();
                        c.sweep = None;
                        c.flux = flux;
                        c.p = p;
                        c.q = q;
                        c.solver.nodes = nodes;
                        if implicit_stop {
                            c.solver.u_stop = default_u_stop(flux);
                        }
                        out.push(c);
                    }
                }
            }
        }
        out
    }

    /// The config as TOML, reloadable with [`parse_config`].
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }
}
