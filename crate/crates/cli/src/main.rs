use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use blowup_cli::config::load_config;
use blowup_cli::experiment::run_experiment;
use blowup_cli::oracle::{jump_report, ode_report, JumpSetup};
use blowup_cli::report::{Report, Status};
use blowup_cli::sweep::{sweep, SUMMARY_FILE};
use blowup_core::model::{make_grid, validate_initial_data};
use blowup_core::ode::OdeParams;
use clap::{Args, Parser, Subcommand};

/// Blow-up experiments for the coupled heat system with nonlinear Neumann fluxes.
///
/// Exit status: 0 when every check passes or is inconclusive, 2 when a check
/// fails, 1 on errors.
#[derive(Parser, Debug)]
#[command(name = "blowup", version)]
struct Cli {
    /// Output directory; overrides `output.dir` from the config.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    max_parallel: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one experiment and write its artifacts.
    Run { config: PathBuf },
    /// Run every point of the `[sweep]` section.
    Sweep { config: PathBuf },
    /// Check a config and its initial data without running.
    Validate { config: PathBuf },
    /// Stand-alone oracle checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Integrate the ODE comparison system and check its growth bounds.
    Ode(OdeArgs),
    /// Check the single-layer normal-derivative jump on a sphere.
    Jump(JumpArgs),
}

#[derive(Args, Debug)]
struct OdeArgs {
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Horizon T.
    #[arg(long = "horizon", default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, default_value_t = 1.0)]
    a0: f64,
    #[arg(long, default_value_t = 1.0)]
    b0: f64,
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
    /// Fraction of `T - t0` to integrate over.
    #[arg(long, default_value_t = 0.9999)]
    frac: f64,
}

#[derive(Args, Debug)]
struct JumpArgs {
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 1.0)]
    time: f64,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    #[arg(long, default_value_t = 24)]
    levels: usize,
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
}

fn emit(report: &Report, quiet: bool) {
    if !quiet {
        print!("{}", report.render());
    }
}

fn code(status: Status) -> u8 {
    if status == Status::Fail {
        2
    } else {
        0
    }
}

fn execute(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Run { config } => {
            let cfg = load_config(&config)?;
            let out = cli.output_dir.unwrap_or_else(|| cfg.output.dir.clone());
            let summary = run_experiment(&cfg, &out).with_context(|| format!("run of {}", config.display()))?;
            emit(&summary.report, cli.quiet);
            Ok(summary.exit_code() as u8)
        }
        Command::Sweep { config } => {
            let cfg = load_config(&config)?;
            let out = cli.output_dir.unwrap_or_else(|| cfg.output.dir.clone());
            let rows = sweep(&cfg, &out, cli.max_parallel)?;
            let mut worst = Status::Skipped;
            for row in &rows {
                worst = worst.combine(row.status());
                if !cli.quiet {
                    match &row.result {
                        Ok(s) => println!("run {:03}: {} p={} q={} -> {}", row.index, s.flux.name(), s.p, s.q, s.overall),
                        Err(e) => println!("run {:03}: error: {e}", row.index),
                    }
                }
            }
            if !cli.quiet {
                println!("summary written to {}", out.join(SUMMARY_FILE).display());
            }
            Ok(code(worst))
        }
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            let params = cfg.problem()?;
            let grid = make_grid(cfg.radius, cfg.solver.nodes)?;
            let report = validate_initial_data(&params, &grid)?;
            let mut r = Report::new();
            for c in &report.conditions {
                r.put(format!("initial.{}", c.name.replace(' ', "")), if c.passed { "pass" } else { "fail" });
            }
            r.put("initial.compatibility_u", report.compatibility_u);
            r.put("initial.compatibility_v", report.compatibility_v);
            let status = if report.passed() { Status::Pass } else { Status::Fail };
            r.put("check.overall", status);
            emit(&r, cli.quiet);
            Ok(code(status))
        }
        Command::Oracle(OracleCommand::Ode(a)) => {
            let params = OdeParams { c: a.c, p: a.p, q: a.q, horizon: a.horizon, a0: a.a0, b0: a.b0, t0: a.t0 };
            let (r, status) = ode_report(&params, a.frac)?;
            emit(&r, cli.quiet);
            Ok(code(status))
        }
        Command::Oracle(OracleCommand::Jump(a)) => {
            let setup = JumpSetup {
                radius: a.radius,
                time: a.time,
                density: a.density,
                levels: a.levels,
                tolerance: a.tolerance,
                ..JumpSetup::default()
            };
            let (r, status) = jump_report(&setup)?;
            emit(&r, cli.quiet);
            Ok(code(status))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
