//! Stand-alone checks of the ODE comparison system and the layer potential jump.

use blowup_core::error::{Error, Result};
use blowup_core::kernel::{jump_check, surface_integral_bound, JumpOptions, SphereQuadrature};
use blowup_core::model::rate_exponents;
use blowup_core::ode::{integrate_system, self_similar_constants, verify_lemma_bounds, OdeParams};

use crate::report::{Report, Status};

/// Integrates the ODE system to `t0 + frac·(T - t0)` and checks the growth bounds.
/// An early escape is a failed check, not an error.
pub fn ode_report(params: &OdeParams<f64>, frac: f64) -> Result<(Report, Status)> {
    let mut r = Report::new();
    let (alpha, beta) = rate_exponents(params.p, params.q)?;
    let (ca, cb) = self_similar_constants(params.p, params.q, params.c)?;
    r.put("ode.alpha", alpha);
    r.put("ode.beta", beta);
    r.put("ode.C_A", ca);
    r.put("ode.C_B", cb);
    let series = integrate_system(params, frac)?;
    let last = series.len() - 1;
    r.put("ode.samples", series.len());
    r.put("ode.t_last", series.t[last]);
    r.put("ode.A_last", series.a[last]);
    r.put("ode.B_last", series.b[last]);
    r.put("ode.overflowed", series.overflowed);
    let status = match verify_lemma_bounds(&series, params) {
        Ok(rep) => {
            r.put("ode.alpha_fit", rep.alpha_fit);
            r.put("ode.beta_fit", rep.beta_fit);
            r.put("ode.sup_A_scaled", rep.c_a);
            r.put("ode.sup_B_scaled", rep.c_b);
            r.put("ode.trend_A", rep.trend_a);
            r.put("ode.trend_B", rep.trend_b);
            if rep.passed {
                Status::Pass
            } else {
                Status::Fail
            }
        }
        Err(e @ (Error::EarlyBlowup { .. } | Error::FitFailed(_))) => {
            r.put("ode.diagnostic", e);
            Status::Fail
        }
        Err(e) => return Err(e),
    };
    r.put("ode.status", status);
    Ok((r, status))
}

/// Settings of the jump check on the sphere `|x| = R` in three dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpSetup {
    pub radius: f64,
    pub time: f64,
    /// Constant density.
    pub density: f64,
    pub levels: usize,
    pub order: usize,
    pub azimuth: usize,
    pub distances: Vec<f64>,
    pub tolerance: f64,
}

impl Default for JumpSetup {
    fn default() -> Self {
        JumpSetup {
            radius: 1.0,
            time: 1.0,
            density: 1.0,
            levels: 24,
            order: 8,
            azimuth: 8,
            distances: vec![0.16, 0.08, 0.04, 0.02, 0.01],
            tolerance: 0.05,
        }
    }
}

/// Normal-derivative jump at the north pole, plus the surface integrals of
/// `|x - y|^-a` for `a = 0, 1, 2`.
pub fn jump_report(setup: &JumpSetup) -> Result<(Report, Status)> {
    let mut r = Report::new();
    let x0 = [0.0, 0.0, setup.radius];
    let quad = SphereQuadrature::graded(3, setup.radius, &x0, setup.levels, setup.order, setup.azimuth)?;
    let density = setup.density;
    let opts = JumpOptions { tolerance: setup.tolerance, ..JumpOptions::default() };
    let rep = jump_check(&x0, move |_: &[f64; 3], _: f64| density, setup.time, &quad, &setup.distances, &opts)?;
    r.put("jump.radius", setup.radius);
    r.put("jump.time", setup.time);
    r.put("jump.density", density);
    r.put("jump.direct", rep.direct);
    r.put("jump.value", rep.jump);
    r.put("jump.expected", rep.expected);
    r.put("jump.error", (rep.jump - rep.expected).abs());
    let mut status = if rep.passed { Status::Pass } else { Status::Fail };
    r.put("jump.status", status);

    let quads: Vec<SphereQuadrature<f64>> = [8usize, 16, 24, 32]
        .iter()
        .map(|&l| SphereQuadrature::graded(3, setup.radius, &x0, l, 8, 8))
        .collect::<Result<_>>()?;
    for a in [0.0, 1.0, 2.0] {
        let s = surface_integral_bound(&x0, a, &quads)?;
        let key = format!("surface.a{a}");
        r.put(format!("{key}.value"), s.last());
        r.put(format!("{key}.converged"), s.converged);
        r.put(format!("{key}.diverging"), s.diverging);
        let ok = if a < 2.0 { s.converged } else { s.diverging };
        if !ok {
            status = Status::Fail;
        }
    }
    r.put("check.overall", status);
    Ok((r, status))
}
