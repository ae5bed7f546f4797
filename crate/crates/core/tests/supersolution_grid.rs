mod common;

use blowup_core::analysis::{analyze, comparison_constant, FitOptions};
use blowup_core::error::Error;
use blowup_core::model::rate_exponents;
use blowup_core::supersolution::{
    c2_min, c2_sharp, comparison_value, dominance_check, laplacian_h, supersolution_residual, C1Strategy,
    ComparisonParams, DominanceInput, DominanceReport,
};
use common::{reference_params, reference_run};

/// 200 radii in `[0, R]` and 200 times in `[0, T)` crowded toward `T`.
fn grid(radius: f64, horizon: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(200 * 200);
    for i in 0..200 {
        let r = radius * i as f64 / 199.0;
        for j in 0..200 {
            let gap = horizon * 10f64.powf(-9.0 * j as f64 / 199.0);
            out.push((r, horizon - gap));
        }
    }
    out
}

#[test]
fn residual_nonnegative_at_minimal_c2() {
    for (n, radius, m) in [(2usize, 1.0, 0.5), (3, 1.0, 1.0), (2, 2.0, 1.5)] {
        let params = ComparisonParams::with_min_c2(1.0, m, 1.0, radius, n);
        assert_eq!(params.c2, c2_min(n, radius, m));
        for (r, t) in grid(radius, 1.0) {
            let res = supersolution_residual(r, t, &params).unwrap();
            assert!(res >= 0.0, "n={n} R={radius} m={m}: residual {res} at r={r}, t={t}");
        }
    }
}

#[test]
fn laplacian_of_weight_at_origin() {
    for n in [2usize, 3, 5] {
        for radius in [0.5, 1.0, 2.0, 3.0] {
            assert_eq!(laplacian_h(0.0, radius, n), -4.0 * n as f64 * radius * radius);
        }
    }
}

#[test]
fn margin_in_c2_is_not_vacuous() {
    // below the sharp constant the residual turns negative near the boundary close to T
    for (n, radius, m) in [(2usize, 1.0, 0.5), (3, 1.0, 1.0), (2, 2.0, 1.5)] {
        let c2 = c2_sharp(n, radius, m) - 2.0;
        let params = ComparisonParams { c1: 1.0, c2, m, horizon: 1.0, radius, dim: n };
        let negative = grid(radius, 1.0)
            .into_iter()
            .any(|(r, t)| supersolution_residual(r, t, &params).unwrap() < 0.0);
        assert!(negative, "n={n} R={radius} m={m}");
    }
}

#[test]
fn comparison_value_monotone() {
    let params = ComparisonParams::with_min_c2(2.0, 1.0, 1.0, 1.0, 3);
    let pts = grid(1.0, 1.0);
    for w in pts.windows(2) {
        let (a, b) = (comparison_value(w[0].0, w[0].1, &params).unwrap(), comparison_value(w[1].0, w[1].1, &params).unwrap());
        if w[0].0 == w[1].0 {
            assert!(b >= a);
        }
    }
    for j in 0..200 {
        let t = pts[j].1;
        let mut prev = 0.0;
        for i in 0..200 {
            let z = comparison_value(pts[i * 200 + j].0, t, &params).unwrap();
            assert!(z >= prev);
            prev = z;
        }
    }
    assert!(matches!(comparison_value(0.5, 1.0, &params), Err(Error::BadTime(_))));
}

fn reference_input() -> DominanceInput<f64> {
    let p = reference_params();
    let traj = reference_run();
    let report = analyze(traj, &p, 0.5, &FitOptions::default()).unwrap();
    let (alpha, beta) = rate_exponents(p.p, p.q).unwrap();
    let (mu, mv) = (alpha / 2.0, beta / 2.0);
    let t = traj.times();
    DominanceInput {
        t_hat: report.t_hat,
        m_u: mu,
        m_v: mv,
        c_u: comparison_constant(&t, &traj.max_u(), report.t_hat, mu, report.rate_sup_u()),
        c_v: comparison_constant(&t, &traj.max_v(), report.t_hat, mv, report.rate_sup_v()),
        a: 0.5,
    }
}

fn check(strategy: C1Strategy<f64>) -> Result<DominanceReport<f64>, Error> {
    let traj = reference_run();
    dominance_check(&traj.states(), &traj.grid, 2, &reference_input(), strategy)
}

#[test]
fn reference_run_dominated() {
    let rep = check(C1Strategy::Auto).unwrap();
    assert!(rep.margin() > 0.0, "{rep:?}");
    assert!(rep.u.initial_margin >= 0.0 && rep.v.initial_margin >= 0.0);
    assert!(rep.states_checked > 10);
    assert!(rep.u.interior_margin > 0.0);
}

#[test]
fn scaling_c1_scales_ratio() {
    let base = check(C1Strategy::Auto).unwrap();
    let big = check(C1Strategy::Scaled(10.0)).unwrap();
    assert!((big.u.ratio / base.u.ratio - 10.0).abs() < 1e-9);
    assert!(big.margin() > base.margin());
}

#[test]
fn zero_c1_violates() {
    assert!(matches!(check(C1Strategy::Fixed(0.0)), Err(Error::DominanceViolated { .. })));
}
