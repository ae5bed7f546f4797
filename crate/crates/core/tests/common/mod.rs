#![allow(dead_code)]

use blowup_core::model::{FluxFamily, InitialDataSpec, ProblemParams};
use blowup_core::solver::{run, SolverConfig, Trajectory};
use std::sync::OnceLock;

pub fn params(flux: FluxFamily, p: f64, q: f64) -> ProblemParams<f64> {
    ProblemParams::new(p, q, 1.0, 2, flux, InitialDataSpec::quadratic(0.5, 0.5, 0.5, 0.5)).unwrap()
}

pub fn reference_params() -> ProblemParams<f64> {
    params(FluxFamily::ExpPower, 2.0, 2.0)
}

/// p = q = 2, N = 201, default settings.
pub fn reference_run() -> &'static Trajectory<f64> {
    static RUN: OnceLock<Trajectory<f64>> = OnceLock::new();
    RUN.get_or_init(|| {
        let p = reference_params();
        run(&p, &SolverConfig::for_params(&p)).unwrap()
    })
}

/// Same problem at N = 801 with a quarter of the growth cap.
pub fn refined_run() -> &'static Trajectory<f64> {
    static RUN: OnceLock<Trajectory<f64>> = OnceLock::new();
    RUN.get_or_init(|| {
        let p = reference_params();
        let mut cfg = SolverConfig::for_params(&p);
        cfg.nodes = 801;
        cfg.growth_cap = 0.025;
        cfg.snapshot_every = 0;
        run(&p, &cfg).unwrap()
    })
}
