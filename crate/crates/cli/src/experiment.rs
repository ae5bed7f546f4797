//! The single-run pipeline: simulate, fit, check, write artifacts.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use blowup_core::analysis::{
    boundary_set_check, comparison_constant, estimate_blowup_time, fit_rate, rate_bound_check, Ansatz, Verdict,
};
use blowup_core::model::{rate_exponents, FluxFamily};
use blowup_core::solver::{run, StopReason, Trajectory};
use blowup_core::supersolution::{dominance_check, C1Strategy, DominanceInput};
use blowup_core::Error as CoreError;
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{write_trajectory, Report, Status};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const REPORT_FILE: &str = "report.txt";
pub const CONFIG_FILE: &str = "config.toml";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Headline numbers of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub flux: FluxFamily,
    pub p: f64,
    pub q: f64,
    pub nodes: usize,
    pub ansatz: &'static str,
    pub stop_reason: StopReason,
    pub t_stop: f64,
    pub t_hat: Option<f64>,
    pub alpha_hat: Option<f64>,
    pub beta_hat: Option<f64>,
    pub rate: Status,
    pub boundary: Status,
    pub dominance: Status,
    pub overall: Status,
    pub report: Report,
}

impl RunSummary {
    /// 0 for pass or inconclusive, 2 when a check failed.
    pub fn exit_code(&self) -> i32 {
        if self.overall == Status::Fail {
            2
        } else {
            0
        }
    }
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<(), ExperimentError> {
    let io = |source| ExperimentError::Io { path: path.to_path_buf(), source };
    let file = fs::File::create(path).map_err(io)?;
    let mut w = BufWriter::new(file);
    f(&mut w).map_err(io)?;
    std::io::Write::flush(&mut w).map_err(io)
}

/// Runs the pipeline and writes `trajectory.csv`, `report.txt` and
/// `config.toml` into `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary, ExperimentError> {
    let params = config.problem()?;
    let solver = config.solver_config(&params)?;
    let traj = run(&params, &solver)?;
    let summary = analyse(config, &traj)?;

    fs::create_dir_all(out_dir).map_err(|source| ExperimentError::Io { path: out_dir.to_path_buf(), source })?;
    write_file(&out_dir.join(TRAJECTORY_FILE), |w| write_trajectory(&traj, w))?;
    write_file(&out_dir.join(REPORT_FILE), |w| summary.report.write_to(w))?;
    let echo = config.to_toml();
    write_file(&out_dir.join(CONFIG_FILE), |w| std::io::Write::write_all(w, echo.as_bytes()))?;
    Ok(summary)
}

fn put_flat(r: &mut Report, prefix: &str, value: &toml::Value) {
    match value {
        toml::Value::Table(t) => {
            for (k, v) in t {
                put_flat(r, &format!("{prefix}.{k}"), v);
            }
        }
        toml::Value::String(s) => r.put(prefix, s),
        other => r.put(prefix, other),
    }
}

/// Fit and checks on a finished trajectory.
pub fn analyse(config: &ExperimentConfig, traj: &Trajectory<f64>) -> Result<RunSummary, ExperimentError> {
    let params = config.problem()?;
    let opts = config.fit_options();
    let ansatz = Ansatz::for_params(&params)?;
    let a = config.analysis.a;
    let mut r = Report::new();

    r.put("run.flux", config.flux.name());
    r.put("run.p", config.p);
    r.put("run.q", config.q);
    r.put("run.R", config.radius);
    r.put("run.n", config.n);
    r.put("run.nodes", config.solver.nodes);
    r.put("run.stop_reason", traj.stop.reason.name());
    r.put("run.t_stop", traj.stop.t_stop);
    r.put("run.steps", traj.stop.steps);
    r.put("run.samples", traj.samples.len());
    r.put("run.arg_u", traj.stop.arg_u);
    r.put("run.arg_v", traj.stop.arg_v);
    r.put("run.numerical_guard", traj.stop.numerical_guard);
    r.put("blowup.ansatz", ansatz.tag());

    let blew_up = traj.stop.reason == StopReason::BlowupThreshold;
    let fit = if blew_up {
        match estimate_blowup_time(traj, &params, &opts) {
            Ok(fit) => Some(fit),
            Err(CoreError::FitFailed(msg)) => {
                r.put("blowup.diagnostic", format!("fit failed ({msg}); the run may be under-resolved"));
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        r.put("blowup.diagnostic", format!("no blow-up reached (stop reason {})", traj.stop.reason.name()));
        None
    };

    let mut t_hat = None;
    let mut alpha_hat = None;
    let mut beta_hat = None;
    let mut rate_status = if blew_up { Status::Fail } else { Status::Inconclusive };
    let mut rate_sups = None;
    if let Some(fit) = &fit {
        t_hat = Some(fit.t_hat);
        r.put("blowup.T_hat", fit.t_hat);
        r.put("blowup.C1_hat", fit.c1_hat);
        r.put("blowup.C2_hat", fit.c2_hat);
        r.put("blowup.residual", fit.residual);
        r.put("blowup.fit_t_lo", fit.window.t_lo);
        r.put("blowup.fit_t_hi", fit.window.t_hi);
        r.put("blowup.fit_samples", fit.window.samples());
        match fit_rate(traj, fit) {
            Ok((ru, rv)) => {
                let (bu, bv) = rate_bound_check(traj, fit, &opts);
                // exponents compare against 2γ of the family ansatz, with 10% slack
                let limit_u = 2.2 * ansatz.gamma_u;
                let limit_v = 2.2 * ansatz.gamma_v;
                alpha_hat = Some(ru.exponent);
                beta_hat = Some(rv.exponent);
                r.put("rate.alpha_hat", ru.exponent);
                r.put("rate.beta_hat", rv.exponent);
                r.put("rate.alpha_limit", limit_u);
                r.put("rate.beta_limit", limit_v);
                r.put("rate.sup_u", bu.sup);
                r.put("rate.sup_v", bv.sup);
                r.put("rate.trend_u", bu.trend_ratio);
                r.put("rate.trend_v", bv.trend_ratio);
                r.put("rate.variation_u", bu.variation);
                r.put("rate.variation_v", bv.variation);
                r.put("rate.half_decade_samples", bu.half_decade_samples);
                let ok = ru.exponent <= limit_u && rv.exponent <= limit_v && bu.passed && bv.passed;
                rate_status = if ok { Status::Pass } else { Status::Fail };
                rate_sups = Some((bu.sup, bv.sup));
            }
            Err(CoreError::FitFailed(msg)) => r.put("rate.diagnostic", msg),
            Err(e) => return Err(e.into()),
        }
    }
    r.put("rate.status", rate_status);

    let interior = boundary_set_check(traj, &params, a, fit.as_ref(), &opts)?;
    r.put("boundary.a", a);
    r.put("boundary.interior_sup_u", interior.interior_sup_u);
    r.put("boundary.interior_sup_v", interior.interior_sup_v);
    r.put("boundary.ratio_u", interior.ratio_u);
    r.put("boundary.ratio_v", interior.ratio_v);
    r.put_opt("boundary.plateau_growth_u", interior.plateau_growth_u);
    r.put_opt("boundary.plateau_growth_v", interior.plateau_growth_v);
    r.put("boundary.argmax_at_boundary", interior.argmax_at_boundary);
    r.put_opt("boundary.envelope_u", interior.envelope_u);
    r.put_opt("boundary.envelope_v", interior.envelope_v);
    r.put_opt("boundary.within_envelope", interior.within_envelope);
    let boundary_status = match interior.verdict {
        Verdict::Pass => Status::Pass,
        Verdict::Fail => Status::Fail,
        Verdict::Inconclusive => Status::Inconclusive,
    };
    r.put("boundary.status", boundary_status);

    let dominance_status = if !config.analysis.dominance || params.flux == FluxFamily::ExpLinear {
        Status::Skipped
    } else if let (Some(fit), Some((sup_u, sup_v))) = (&fit, rate_sups) {
        let (alpha, beta) = rate_exponents(params.p, params.q)?;
        let (m_u, m_v) = (alpha * 0.5, beta * 0.5);
        let t = traj.times();
        let input = DominanceInput {
            t_hat: fit.t_hat,
            m_u,
            m_v,
            c_u: comparison_constant(&t, &traj.max_u(), fit.t_hat, m_u, sup_u),
            c_v: comparison_constant(&t, &traj.max_v(), fit.t_hat, m_v, sup_v),
            a,
        };
        r.put("dominance.m_u", m_u);
        r.put("dominance.m_v", m_v);
        r.put("dominance.C_u", input.c_u);
        r.put("dominance.C_v", input.c_v);
        match dominance_check(&traj.states(), &traj.grid, params.dim, &input, C1Strategy::Auto) {
            Ok(rep) => {
                r.put("dominance.C1_u", rep.u.c1);
                r.put("dominance.C1_v", rep.v.c1);
                r.put("dominance.C2_u", rep.u.c2);
                r.put("dominance.C2_v", rep.v.c2);
                r.put("dominance.margin", rep.margin());
                r.put("dominance.interior_margin_u", rep.u.interior_margin);
                r.put("dominance.states", rep.states_checked);
                Status::Pass
            }
            Err(e @ CoreError::DominanceViolated { .. }) => {
                r.put("dominance.diagnostic", e);
                Status::Fail
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        Status::Inconclusive
    };
    r.put("dominance.status", dominance_status);

    let overall = rate_status.combine(boundary_status).combine(dominance_status);
    r.put("check.overall", overall);
    let echo = toml::Value::try_from(config).expect("config serialises");
    put_flat(&mut r, "config", &echo);

    Ok(RunSummary {
        flux: config.flux,
        p: config.p,
        q: config.q,
        nodes: config.solver.nodes,
        ansatz: ansatz.tag(),
        stop_reason: traj.stop.reason,
        t_stop: traj.stop.t_stop,
        t_hat,
        alpha_hat,
        beta_hat,
        rate: rate_status,
        boundary: boundary_status,
        dominance: dominance_status,
        overall,
        report: r,
    })
}
