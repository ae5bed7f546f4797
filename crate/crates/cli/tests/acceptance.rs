//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::fs;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use blowup_core::analysis::{
    boundary_set_check, comparison_constant, estimate_blowup_time, fit_rate, rate_bound_check, BlowupFit, FitOptions,
    Verdict,
};
use blowup_core::kernel::{jump_check, surface_integral_bound, JumpOptions, SphereQuadrature};
use blowup_core::model::{rate_exponents, FluxFamily, InitialDataSpec, ProblemParams};
use blowup_core::ode::{integrate_system, verify_lemma_bounds, OdeParams};
use blowup_core::solver::{run, SolverConfig, StopReason, Trajectory};
use blowup_core::supersolution::{
    c2_min, dominance_check, laplacian_h, supersolution_residual, C1Strategy, ComparisonParams, DominanceInput,
};
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(flux: FluxFamily, p: f64, q: f64) -> ProblemParams<f64> {
    ProblemParams::new(p, q, 1.0, 2, flux, InitialDataSpec::quadratic(0.5, 0.5, 0.5, 0.5)).unwrap()
}

fn simulate(flux: FluxFamily, p: f64, q: f64, nodes: usize, growth_cap: f64) -> Trajectory<f64> {
    let prm = params(flux, p, q);
    let mut cfg = SolverConfig::for_params(&prm);
    cfg.nodes = nodes;
    cfg.growth_cap = growth_cap;
    run(&prm, &cfg).expect("run")
}

fn reference() -> &'static Trajectory<f64> {
    static RUN: OnceLock<Trajectory<f64>> = OnceLock::new();
    RUN.get_or_init(|| simulate(FluxFamily::ExpPower, 2.0, 2.0, 201, 0.1))
}

fn reference_fit() -> &'static BlowupFit<f64> {
    static FIT: OnceLock<BlowupFit<f64>> = OnceLock::new();
    FIT.get_or_init(|| {
        estimate_blowup_time(reference(), &params(FluxFamily::ExpPower, 2.0, 2.0), &FitOptions::default())
            .expect("reference fit")
    })
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_1() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(20240611);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 1000 {
        let p = 10f64.powf(rng.gen_range(-1.0..1.3));
        let q = 10f64.powf(rng.gen_range(-1.0..1.3));
        if p * q <= 1.0 {
            continue;
        }
        let (a, b) = rate_exponents(p, q).map_err(|e| e.to_string())?;
        worst = worst.max((p * b - (a + 1.0)).abs() / (a + 1.0)).max((q * a - (b + 1.0)).abs() / (b + 1.0));
        n += 1;
    }
    ensure(worst <= 1e-12, format!("1000 pairs, worst relative residual {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let prm: OdeParams<f64> = OdeParams { c: 0.5, p: 2.0, q: 2.0, horizon: 1.0, a0: 1.0, b0: 1.0, t0: 0.0 };
    let s = integrate_system(&prm, 0.99).map_err(|e| e.to_string())?;
    let err = (0..s.len()).map(|k| (s.a[k] * s.gap[k].sqrt() - 1.0).abs()).fold(0.0, f64::max);
    // the 100x growth the bounds need is reached at t = 0.9999
    let long = integrate_system(&prm, 0.9999).map_err(|e| e.to_string())?;
    let rep = verify_lemma_bounds(&long, &prm).map_err(|e| e.to_string())?;
    ensure(
        err < 1e-6 && (rep.alpha_fit - 1.0).abs() <= 1e-3 && (rep.c_a - 1.0).abs() <= 1e-3,
        format!("max rel err {err:.1e} to t=0.99, alpha_fit {:.6}, sup A(T-t)^1/2 {:.6}", rep.alpha_fit, rep.c_a),
    )
}

fn criterion_3() -> Outcome {
    let prm = params(FluxFamily::ExpPower, 2.0, 2.0);
    let traj = reference();
    if traj.stop.reason != StopReason::BlowupThreshold {
        return Err(format!("stopped with {}", traj.stop.reason.name()));
    }
    let opts = FitOptions::default();
    let fit = reference_fit();
    let (ru, rv) = fit_rate(traj, fit).map_err(|e| e.to_string())?;
    let (bu, bv) = rate_bound_check(traj, fit, &opts);
    let fine = simulate(FluxFamily::ExpPower, 2.0, 2.0, 801, 0.025);
    let fine_fit = estimate_blowup_time(&fine, &prm, &opts).map_err(|e| e.to_string())?;
    let rel = (fit.t_hat - fine_fit.t_hat).abs() / fine_fit.t_hat;
    let ok = bu.sup.is_finite()
        && bv.sup.is_finite()
        && bu.trend_ratio < 1.2
        && bv.trend_ratio < 1.2
        && ru.exponent <= 1.1
        && rv.exponent <= 1.1
        && rel < 0.01;
    ensure(
        ok,
        format!(
            "T_hat {:.6e} (N=801: {:.6e}, diff {:.2}%), alpha_hat {:.3}, beta_hat {:.3}, \
             sup e^M(T-t)^1/2 {:.4}, half-decade increase {:.3} (max/min {:.2} over {} samples)",
            fit.t_hat,
            fine_fit.t_hat,
            100.0 * rel,
            ru.exponent,
            rv.exponent,
            bu.sup,
            bu.trend_ratio.max(bv.trend_ratio),
            bu.variation.max(bv.variation),
            bu.half_decade_samples
        ),
    )
}

fn criterion_4() -> Outcome {
    let prm = params(FluxFamily::ExpPower, 2.0, 2.0);
    let traj = reference();
    let rep = boundary_set_check(traj, &prm, 0.5, Some(reference_fit()), &FitOptions::default())
        .map_err(|e| e.to_string())?;
    let last = traj.grid.last();
    let all_boundary = traj.samples.iter().all(|s| s.argmax_u == last && s.argmax_v == last);
    let gu = rep.plateau_growth_u.unwrap_or(f64::INFINITY);
    let gv = rep.plateau_growth_v.unwrap_or(f64::INFINITY);
    ensure(
        rep.verdict == Verdict::Pass && rep.reached_threshold && all_boundary && gu < 0.05 && gv < 0.05,
        format!(
            "interior growth over final decade u {gu:.1e}, v {gv:.1e}; argmax at boundary in all {} samples: {all_boundary}",
            traj.samples.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let traj = reference();
    let mut worst_r: f64 = f64::INFINITY;
    let mut radial = true;
    for s in &traj.samples {
        let tol = 1e-8 * (1.0 + s.max_u);
        worst_r = worst_r.min(s.min_diff_u).min(s.min_diff_v);
        radial &= s.min_diff_u >= -tol && s.min_diff_v >= -tol;
    }
    let temporal = traj.samples.windows(2).all(|w| w[1].max_u >= w[0].max_u && w[1].max_v >= w[0].max_v);
    ensure(
        radial && temporal,
        format!("smallest nodal difference {worst_r:.3e}, M and N nondecreasing: {temporal}"),
    )
}

fn criterion_6() -> Outcome {
    let mut negatives = 0;
    let mut checked = 0;
    for (n, radius, m) in [(2usize, 1.0, 0.5), (3, 1.0, 1.0), (2, 2.0, 1.5)] {
        let cp = ComparisonParams::with_min_c2(1.0, m, 1.0, radius, n);
        for i in 0..200 {
            let r = radius * i as f64 / 199.0;
            for j in 0..200 {
                let t = 1.0 - 10f64.powf(-9.0 * j as f64 / 199.0);
                let res = supersolution_residual(r, t, &cp).map_err(|e| e.to_string())?;
                checked += 1;
                if res.is_nan() || res < 0.0 {
                    negatives += 1;
                }
            }
        }
    }
    let lap_exact = [(2usize, 1.0), (3, 1.0), (2, 2.0)]
        .iter()
        .all(|&(n, r)| laplacian_h(0.0, r, n) == -4.0 * n as f64 * r * r);

    let prm = params(FluxFamily::ExpPower, 2.0, 2.0);
    let traj = reference();
    let fit = reference_fit();
    let (bu, bv) = rate_bound_check(traj, fit, &FitOptions::default());
    let (alpha, beta) = rate_exponents(prm.p, prm.q).unwrap();
    let (m_u, m_v) = (alpha / 2.0, beta / 2.0);
    let t = traj.times();
    let input = DominanceInput {
        t_hat: fit.t_hat,
        m_u,
        m_v,
        c_u: comparison_constant(&t, &traj.max_u(), fit.t_hat, m_u, bu.sup),
        c_v: comparison_constant(&t, &traj.max_v(), fit.t_hat, m_v, bv.sup),
        a: 0.5,
    };
    let dom = dominance_check(&traj.states(), &traj.grid, prm.dim, &input, C1Strategy::Auto).map_err(|e| e.to_string())?;
    ensure(
        negatives == 0 && lap_exact && dom.margin() > 0.0,
        format!(
            "{negatives} negative residuals of {checked}; lap h(0) exact: {lap_exact}; dominance margin {:.3e} (C2 = {})",
            dom.margin(),
            c2_min(2, 1.0, m_u)
        ),
    )
}

fn criterion_7() -> Outcome {
    let x0 = [0.0, 0.0, 1.0];
    let quad = SphereQuadrature::graded(3, 1.0, &x0, 24, 8, 8).map_err(|e| e.to_string())?;
    let d = [0.16, 0.08, 0.04, 0.02, 0.01];
    let one = jump_check(&x0, |_: &[f64; 3], _: f64| 1.0, 1.0, &quad, &d, &JumpOptions::default())
        .map_err(|e| e.to_string())?;
    let two = jump_check(&x0, |_: &[f64; 3], _: f64| 2.0, 1.0, &quad, &d, &JumpOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(
        (one.jump + 0.5).abs() <= 0.05 && (two.jump + 1.0).abs() <= 0.1,
        format!("jump for phi=1: {:.6}, phi=2: {:.6}", one.jump, two.jump),
    )
}

fn criterion_8() -> Outcome {
    let radius = 1.0;
    let x = [0.0, 0.0, radius];
    let quads: Vec<_> = [8usize, 16, 24, 32]
        .iter()
        .map(|&l| SphereQuadrature::graded(3, radius, &x, l, 8, 8).unwrap())
        .collect();
    let pi = std::f64::consts::PI;
    let a1 = surface_integral_bound(&x, 1.0, &quads).map_err(|e| e.to_string())?;
    let a2 = surface_integral_bound(&x, 2.0, &quads).map_err(|e| e.to_string())?;
    let a0 = surface_integral_bound(&x, 0.0, &quads).map_err(|e| e.to_string())?;
    let e1 = (a1.last() / (4.0 * pi * radius) - 1.0).abs();
    let e0 = (a0.last() - 4.0 * pi * radius * radius).abs();
    ensure(
        a1.converged && e1 < 5e-3 && a2.diverging && e0 < 1e-6,
        format!(
            "a=1: {:.8} (rel err {e1:.1e}); a=2 diverging: {} (last {:.1}); a=0 err {e0:.1e}",
            a1.last(),
            a2.diverging,
            a2.last()
        ),
    )
}

fn criterion_9() -> Outcome {
    let opts = FitOptions::default();
    let lin = simulate(FluxFamily::ExpLinear, 1.0, 1.0, 201, 0.1);
    let lin_fit = estimate_blowup_time(&lin, &params(FluxFamily::ExpLinear, 1.0, 1.0), &opts).map_err(|e| e.to_string())?;
    let (lu, lv) = rate_bound_check(&lin, &lin_fit, &opts);
    let pow = simulate(FluxFamily::Power, 2.0, 2.0, 201, 0.1);
    let pow_fit = estimate_blowup_time(&pow, &params(FluxFamily::Power, 2.0, 2.0), &opts).map_err(|e| e.to_string())?;
    let (pu, pv) = fit_rate(&pow, &pow_fit).map_err(|e| e.to_string())?;
    let flat = lu.variation.max(lv.variation);
    let slope = pu.slope.max(pv.slope);
    ensure(
        lu.sup.is_finite() && lv.sup.is_finite() && flat < 1.25 && slope <= 0.55,
        format!(
            "exp_linear sup e^(qM)(T-t)^1/2 {:.4}, max/min {flat:.3} (whole window {:.3}); power exponent {slope:.4}",
            lu.sup,
            lu.window_variation.max(lv.window_variation)
        ),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("reference.toml");
    fs::write(&cfg, "p = 2.0\nq = 2.0\nR = 1.0\nn = 2\nflux = \"exp_power\"\n").map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("out{k}"));
        let status = Command::new(env!("CARGO_BIN_EXE_blowup"))
            .args(["run", "--quiet", "--output-dir"])
            .arg(&out)
            .arg(&cfg)
            .status()
            .map_err(|e| e.to_string())?;
        if status.code() != Some(0) {
            return Err(format!("run {k} exited with {status}"));
        }
        files.push(fs::read(out.join("trajectory.csv")).map_err(|e| e.to_string())?);
    }
    ensure(files[0] == files[1], format!("two runs, {} bytes each, identical: {}", files[0].len(), files[0] == files[1]))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exponent algebra", criterion_1),
        ("ODE oracle exactness", criterion_2),
        ("PDE rate upper estimate", criterion_3),
        ("boundary blow-up set", criterion_4),
        ("monotonicity", criterion_5),
        ("supersolution", criterion_6),
        ("jump relation", criterion_7),
        ("surface integral threshold", criterion_8),
        ("cross-family rates", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed: Duration = start.elapsed();
        let (tag, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {:>2} {tag} [{:.2}s] {name}: {msg}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
