//! Parameter sweeps over (flux, p, q, nodes).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::experiment::{run_experiment, ExperimentError, RunSummary};
use crate::report::Status;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_HEADER: &str = "index,flux,p,q,nodes,ansatz,stop_reason,T_hat,alpha_hat,beta_hat,rate,boundary,dominance,pass,error";

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub config: ExperimentConfig,
    pub result: Result<RunSummary, String>,
}

impl SweepRow {
    pub fn status(&self) -> Status {
        match &self.result {
            Ok(s) => s.overall,
            Err(_) => Status::Fail,
        }
    }

    fn csv(&self) -> String {
        let c = &self.config;
        let ansatz = c.problem().ok().and_then(|p| blowup_core::analysis::Ansatz::for_params(&p).ok()).map(|a| a.tag());
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        match &self.result {
            Ok(s) => format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},",
                self.index,
                c.flux.name(),
                c.p,
                c.q,
                c.solver.nodes,
                s.ansatz,
                s.stop_reason.name(),
                opt(s.t_hat),
                opt(s.alpha_hat),
                opt(s.beta_hat),
                s.rate,
                s.boundary,
                s.dominance,
                s.overall,
            ),
            Err(e) => format!(
                "{},{},{},{},{},{},,,,,,,,fail,\"{}\"",
                self.index,
                c.flux.name(),
                c.p,
                c.q,
                c.solver.nodes,
                ansatz.unwrap_or(""),
                e.replace('"', "'")
            ),
        }
    }
}

/// Directory of run `index` inside `out_dir`.
pub fn run_dir(out_dir: &Path, index: usize) -> PathBuf {
    out_dir.join(format!("run_{index:03}"))
}

/// Runs every sweep point on a pool of `max_parallel` threads (all cores
/// when `None`) and writes `summary.csv`. A failed run is recorded in its
/// row and does not stop the others.
pub fn sweep(config: &ExperimentConfig, out_dir: &Path, max_parallel: Option<usize>) -> Result<Vec<SweepRow>, ExperimentError> {
    config.validate()?;
    let points = config.sweep_points();
    fs::create_dir_all(out_dir).map_err(|source| ExperimentError::Io { path: out_dir.to_path_buf(), source })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(max_parallel.unwrap_or(0))
        .build()
        .expect("thread pool");
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .into_par_iter()
            .enumerate()
            .map(|(index, cfg)| {
                let result = run_experiment(&cfg, &run_dir(out_dir, index)).map_err(|e| e.to_string());
                SweepRow { index, config: cfg, result }
            })
            .collect()
    });
    let path = out_dir.join(SUMMARY_FILE);
    let io = |source| ExperimentError::Io { path: path.clone(), source };
    let mut f = fs::File::create(&path).map_err(io)?;
    let mut text = format!("{SUMMARY_HEADER}\n");
    for row in &rows {
        text.push_str(&row.csv());
        text.push('\n');
    }
    f.write_all(text.as_bytes()).map_err(io)?;
    Ok(rows)
}
