//! The comparison ODE system
//!
//! ```text
//! A' = c·B^p / √(T - t),   B' = c·A^q / √(T - t)
//! ```
//!
//! integrated in `s = -log(T - t)`, where it reads
//! `dA/ds = c·B^p·e^(-s/2)` and has no singularity at `t = T`.
//! Self-similar solutions are `A = C_A (T-t)^(-α/2)`, `B = C_B (T-t)^(-β/2)`.

use crate::analysis::fit_line;
use crate::error::{Error, Result};
use crate::model::rate_exponents;
use crate::real::Real;

/// Values above which integration stops.
pub const OVERFLOW_HALT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeParams<T> {
    pub c: T,
    pub p: T,
    pub q: T,
    pub horizon: T,
    pub a0: T,
    pub b0: T,
    pub t0: T,
}

impl<T: Real> OdeParams<T> {
    pub fn validate(&self) -> Result<()> {
        rate_exponents(self.p, self.q)?;
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if !(self.c > T::zero()) {
            return bad("c>0 required");
        }
        if !(self.t0 >= T::zero() && self.t0 < self.horizon) {
            return bad("0 <= t0 < T required");
        }
        if !(self.a0 > T::zero() && self.b0 > T::zero()) {
            return bad("A0>0 and B0>0 required");
        }
        Ok(())
    }

    fn rhs(&self, s: T, y: [T; 2]) -> [T; 2] {
        let w = self.c * (-s * T::of(0.5)).exp();
        [w * y[1].powf(self.p), w * y[0].powf(self.q)]
    }

    fn s_of(&self, t: T) -> T {
        -(self.horizon - t).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// Largest step in `s`; keeps the output dense.
    pub max_ds: T,
    pub max_steps: usize,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        OdeOptions { rtol: T::of(1e-11), atol: T::of(1e-13), max_ds: T::of(0.05), max_steps: 2_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSeries<T> {
    pub t: Vec<T>,
    /// Remaining time `T - t`, kept separately because it loses all digits in `t` near `T`.
    pub gap: Vec<T>,
    pub a: Vec<T>,
    pub b: Vec<T>,
    /// True when a component passed [`OVERFLOW_HALT`] before the stop time.
    pub overflowed: bool,
}

impl<T> OdeSeries<T> {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn dp45_step<T: Real>(params: &OdeParams<T>, s: T, y: [T; 2], h: T) -> ([T; 2], [T; 2]) {
    let mut k = [[T::zero(); 2]; 7];
    for i in 0..7 {
        let mut yi = y;
        for (j, kj) in k.iter().enumerate().take(i) {
            let aij = T::of(A[i][j]);
            yi[0] = yi[0] + h * aij * kj[0];
            yi[1] = yi[1] + h * aij * kj[1];
        }
        k[i] = params.rhs(s + T::of(C[i]) * h, yi);
    }
    let mut y5 = y;
    let mut e = [T::zero(); 2];
    for i in 0..7 {
        for c in 0..2 {
            y5[c] = y5[c] + h * T::of(B5[i]) * k[i][c];
            e[c] = e[c] + h * T::of(B5[i] - B4[i]) * k[i][c];
        }
    }
    (y5, e)
}

/// Integrates from `t0` to `t0 + t_stop_frac·(T - t0)` with default options.
pub fn integrate_system<T: Real>(params: &OdeParams<T>, t_stop_frac: T) -> Result<OdeSeries<T>> {
    integrate_system_with(params, t_stop_frac, &OdeOptions::default(), &[])
}

/// Adaptive Dormand–Prince integration in `s`. Every accepted step is
/// recorded; `checkpoints` (times in `(t0, t_stop)`) are hit exactly.
pub fn integrate_system_with<T: Real>(
    params: &OdeParams<T>,
    t_stop_frac: T,
    options: &OdeOptions<T>,
    checkpoints: &[T],
) -> Result<OdeSeries<T>> {
    params.validate()?;
    if !(t_stop_frac > T::zero() && t_stop_frac < T::one()) {
        return Err(Error::InvalidParams(format!("t_stop_frac must lie in (0, 1), got {t_stop_frac}")));
    }
    let span = params.horizon - params.t0;
    let s0 = params.s_of(params.t0);
    let s_end = -((T::one() - t_stop_frac) * span).ln();
    let mut marks: Vec<T> = checkpoints
        .iter()
        .map(|&t| params.s_of(t))
        .filter(|&s| s > s0 && s < s_end)
        .collect();
    marks.sort_by(|a, b| a.partial_cmp(b).expect("finite checkpoints"));
    marks.push(s_end);

    let halt = T::of(OVERFLOW_HALT);
    let mut out = OdeSeries {
        t: vec![params.t0],
        gap: vec![span],
        a: vec![params.a0],
        b: vec![params.b0],
        overflowed: false,
    };
    let mut s = s0;
    let mut y = [params.a0, params.b0];
    let mut h = options.max_ds.min(T::of(1e-3));
    let mut next_mark = 0;
    let mut steps = 0;

    while next_mark < marks.len() {
        if steps >= options.max_steps {
            return Err(Error::ParamsTooStiff { samples: out.len() });
        }
        steps += 1;
        let target = marks[next_mark];
        let mut hit = false;
        let mut step = h.min(options.max_ds);
        if s + step >= target {
            step = target - s;
            hit = true;
        }
        let (y_new, e) = dp45_step(params, s, y, step);
        let err = (0..2).fold(T::zero(), |m, c| {
            let scale = options.atol + options.rtol * y[c].abs().max(y_new[c].abs());
            m.max((e[c] / scale).abs())
        });
        if !(err <= T::one()) || !y_new.iter().all(|v| v.is_finite()) {
            let factor = if err.is_finite() { (T::of(0.9) * err.powf(T::of(-0.2))).max(T::of(0.1)) } else { T::of(0.1) };
            h = step * factor;
            if h < T::epsilon() * s.abs().max(T::one()) {
                if out.len() < 10 {
                    return Err(Error::ParamsTooStiff { samples: out.len() });
                }
                out.overflowed = true;
                break;
            }
            continue;
        }
        if y_new[0] > halt || y_new[1] > halt {
            if out.len() < 10 {
                return Err(Error::ParamsTooStiff { samples: out.len() });
            }
            out.overflowed = true;
            break;
        }
        s = if hit { target } else { s + step };
        y = y_new;
        let gap = (-s).exp();
        out.t.push(params.horizon - gap);
        out.gap.push(gap);
        out.a.push(y[0]);
        out.b.push(y[1]);
        if hit {
            next_mark += 1;
        }
        let grow = if err > T::zero() { T::of(0.9) * err.powf(T::of(-0.2)) } else { T::of(5.0) };
        if !hit {
            h = step * grow.min(T::of(5.0)).max(T::of(0.2));
        }
    }
    Ok(out)
}

/// `(C_A, C_B)` with `(α/2)C_A = c·C_B^p` and `(β/2)C_B = c·C_A^q`.
pub fn self_similar_constants<T: Real>(p: T, q: T, c: T) -> Result<(T, T)> {
    let (alpha, beta) = rate_exponents(p, q)?;
    let two_c = T::of(2.0) * c;
    let ca = ((alpha / two_c) * (beta / two_c).powf(p)).powf(T::one() / (p * q - T::one()));
    let cb = (alpha * ca / two_c).powf(T::one() / p);
    Ok((ca, cb))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport<T> {
    pub alpha_fit: T,
    pub beta_fit: T,
    /// `sup A(t)(T-t)^(α/2)` over the tail.
    pub c_a: T,
    pub c_b: T,
    /// Largest increase ratio of `A(T-t)^(α/2)` over the tail.
    pub trend_a: T,
    pub trend_b: T,
    pub tail_samples: usize,
    pub passed: bool,
}

fn max_increase<T: Real>(values: impl Iterator<Item = T>) -> T {
    let mut lowest = T::infinity();
    let mut best = T::one();
    for v in values {
        lowest = lowest.min(v);
        best = best.max(v / lowest);
    }
    best
}

/// Fits the growth exponents on the tail `T - t ≤ 0.1(T - t0)` and checks
/// `alpha_fit ≤ 1.05α`, `beta_fit ≤ 1.05β` and a rate product that does not
/// grow by more than 10%.
pub fn verify_lemma_bounds<T: Real>(series: &OdeSeries<T>, params: &OdeParams<T>) -> Result<LemmaReport<T>> {
    let (alpha, beta) = rate_exponents(params.p, params.q)?;
    if series.len() < 10 {
        return Err(Error::FitFailed(format!("{} samples, at least 10 needed", series.len())));
    }
    let target = T::of(100.0) * params.a0.max(params.b0);
    let last = series.len() - 1;
    if series.a[last].max(series.b[last]) < target {
        return Err(Error::FitFailed("series has not grown by 100x".into()));
    }
    if series.overflowed {
        // A genuine self-similar tail has d log A / d s near α/2; a solution
        // escaping to infinity before T shows a much steeper end.
        let k = last.saturating_sub(5);
        let ds = (series.gap[k] / series.gap[last]).ln();
        let slope = (series.a[last] / series.a[k]).ln().max((series.b[last] / series.b[k]).ln()) / ds;
        if !(slope < T::of(5.0) * alpha.max(beta)) {
            return Err(Error::EarlyBlowup { t: series.t[last].to_f64_lossy(), horizon: params.horizon.to_f64_lossy() });
        }
    }
    let span = params.horizon - params.t0;
    let tail: Vec<usize> = (0..series.len()).filter(|&i| series.gap[i] <= T::of(0.1) * span).collect();
    if tail.len() < 10 {
        return Err(Error::FitFailed(format!("{} tail samples, at least 10 needed", tail.len())));
    }
    let x: Vec<T> = tail.iter().map(|&i| -series.gap[i].ln()).collect();
    let la: Vec<T> = tail.iter().map(|&i| series.a[i].ln()).collect();
    let lb: Vec<T> = tail.iter().map(|&i| series.b[i].ln()).collect();
    let alpha_fit = fit_line(&x, &la).slope * T::of(2.0);
    let beta_fit = fit_line(&x, &lb).slope * T::of(2.0);
    let half = T::of(0.5);
    let pa = tail.iter().map(|&i| series.a[i] * series.gap[i].powf(alpha * half));
    let pb = tail.iter().map(|&i| series.b[i] * series.gap[i].powf(beta * half));
    let c_a = pa.clone().fold(T::zero(), |m, v| m.max(v));
    let c_b = pb.clone().fold(T::zero(), |m, v| m.max(v));
    let trend_a = max_increase(pa);
    let trend_b = max_increase(pb);
    let tol = T::of(1.05);
    let passed = alpha_fit <= alpha * tol
        && beta_fit <= beta * tol
        && trend_a <= T::of(1.1)
        && trend_b <= T::of(1.1)
        && c_a.is_finite()
        && c_b.is_finite();
    Ok(LemmaReport { alpha_fit, beta_fit, c_a, c_b, trend_a, trend_b, tail_samples: tail.len(), passed })
}
