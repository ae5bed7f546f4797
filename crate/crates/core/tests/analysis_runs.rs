mod common;

use blowup_core::analysis::{
    analyze, boundary_set_check, estimate_blowup_time, fit_rate, rate_bound_check, Ansatz, FitOptions, Verdict,
};
use blowup_core::error::Error;
use blowup_core::model::{rate_exponents, FluxFamily};
use blowup_core::solver::{run, SolverConfig};
use common::{params, reference_params, reference_run, refined_run};

#[test]
fn blowup_time_agrees_with_refined_run() {
    let p = reference_params();
    let opts = FitOptions::default();
    let coarse = estimate_blowup_time(reference_run(), &p, &opts).unwrap();
    let fine = estimate_blowup_time(refined_run(), &p, &opts).unwrap();
    assert!(coarse.t_hat > reference_run().stop.t_stop);
    let rel = (coarse.t_hat - fine.t_hat).abs() / fine.t_hat;
    assert!(rel < 0.01, "{} vs {}", coarse.t_hat, fine.t_hat);
    assert!(coarse.residual <= opts.max_residual);
    let (lo, hi) = coarse.fit_window();
    assert!(lo < hi && hi <= reference_run().stop.t_stop);
}

#[test]
fn reference_exponents_within_upper_estimate() {
    let report = analyze(reference_run(), &reference_params(), 0.5, &FitOptions::default()).unwrap();
    assert!(report.alpha_hat <= 1.1, "alpha_hat = {}", report.alpha_hat);
    assert!(report.beta_hat <= 1.1, "beta_hat = {}", report.beta_hat);
    assert!(report.alpha_hat > 0.0 && report.beta_hat > 0.0);
    assert!(report.rate_sup_u().is_finite() && report.rate_sup_v().is_finite());
}

#[test]
fn rate_product_has_no_upward_trend() {
    let p = reference_params();
    let opts = FitOptions::default();
    let fit = estimate_blowup_time(reference_run(), &p, &opts).unwrap();
    let (bu, bv) = rate_bound_check(reference_run(), &fit, &opts);
    for b in [&bu, &bv] {
        assert!(b.sup.is_finite());
        assert!(b.half_decade_samples >= 4);
        assert!(b.trend_ratio < 1.2, "{b:?}");
        assert!(b.passed);
    }
}

#[test]
fn asymmetric_exponents_within_bounds() {
    let p = params(FluxFamily::ExpPower, 3.0, 2.0);
    let mut cfg = SolverConfig::for_params(&p);
    cfg.snapshot_every = 0;
    let traj = run(&p, &cfg).unwrap();
    let fit = estimate_blowup_time(&traj, &p, &FitOptions::default()).unwrap();
    let (ru, rv) = fit_rate(&traj, &fit).unwrap();
    let (alpha, beta) = rate_exponents(3.0, 2.0).unwrap();
    assert!(ru.exponent <= 1.1 * alpha, "{} vs {}", ru.exponent, alpha);
    assert!(rv.exponent <= 1.1 * beta, "{} vs {}", rv.exponent, beta);
}

#[test]
fn interior_stays_bounded() {
    let p = reference_params();
    let opts = FitOptions::default();
    let traj = reference_run();
    let fit = estimate_blowup_time(traj, &p, &opts).unwrap();
    let r = boundary_set_check(traj, &p, 0.5, Some(&fit), &opts).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.plateau_growth_u.unwrap() < 0.05 && r.plateau_growth_v.unwrap() < 0.05);
    assert!(r.argmax_at_boundary && r.reached_threshold);
    assert!(r.ratio_u < 1.0);
    assert_eq!(r.within_envelope, Some(true));
    assert!(r.interior_sup_u <= r.envelope_u.unwrap());
}

#[test]
fn near_boundary_radius_still_evaluates() {
    let p = reference_params();
    let opts = FitOptions::default();
    let traj = reference_run();
    let fit = estimate_blowup_time(traj, &p, &opts).unwrap();
    let r = boundary_set_check(traj, &p, 0.99, Some(&fit), &opts).unwrap();
    assert!(r.interior_sup_u > boundary_set_check(traj, &p, 0.5, Some(&fit), &opts).unwrap().interior_sup_u);
    assert!(matches!(boundary_set_check(traj, &p, 1.0, Some(&fit), &opts), Err(Error::BadRadius { .. })));
}

#[test]
fn time_limited_run_is_inconclusive() {
    let p = reference_params();
    let mut cfg = SolverConfig::for_params(&p);
    cfg.t_end = Some(0.001);
    let traj = run(&p, &cfg).unwrap();
    let opts = FitOptions::default();
    assert!(matches!(estimate_blowup_time(&traj, &p, &opts), Err(Error::FitFailed(_))));
    let r = boundary_set_check(&traj, &p, 0.5, None, &opts).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

#[test]
fn power_family_rate() {
    let p = params(FluxFamily::Power, 2.0, 2.0);
    let mut cfg = SolverConfig::for_params(&p);
    cfg.snapshot_every = 0;
    let traj = run(&p, &cfg).unwrap();
    let fit = estimate_blowup_time(&traj, &p, &FitOptions::default()).unwrap();
    assert_eq!(fit.ansatz.tag(), "power_rate");
    let (ru, _) = fit_rate(&traj, &fit).unwrap();
    // M ~ (T - t)^(-1/2) for p = q = 2, slope of log M against -log(T - t)
    assert!(ru.slope <= 0.55, "slope {}", ru.slope);
}

#[test]
fn exp_linear_rate_product_flat() {
    let p = params(FluxFamily::ExpLinear, 1.0, 1.0);
    let mut cfg = SolverConfig::for_params(&p);
    cfg.snapshot_every = 0;
    let traj = run(&p, &cfg).unwrap();
    let opts = FitOptions::default();
    let fit = estimate_blowup_time(&traj, &p, &opts).unwrap();
    assert_eq!(fit.ansatz, Ansatz::new(FluxFamily::ExpLinear, 1.0, 1.0).unwrap());
    let (bu, bv) = rate_bound_check(&traj, &fit, &opts);
    for b in [bu, bv] {
        assert!(b.sup.is_finite());
        assert!(b.variation < 1.25, "{b:?}");
    }
}
