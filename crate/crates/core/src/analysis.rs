//! Blow-up time estimation and rate diagnostics on recorded trajectories.
//!
//! Each flux family has a rate ansatz that becomes linear in
//! `x = -log(T - t)` after a transform of the maximum:
//!
//! | family       | transformed `y`  | paper slope |
//! |--------------|------------------|-------------|
//! | `ExpPower`   | `M`              | `α/2`       |
//! | `Power`      | `log M`          | `α/2`       |
//! | `ExpLinear`  | `q·M`            | `1/2`       |
//!
//! and analogously for `N` with `β` (or `p·N`).

use crate::error::{Error, Result};
use crate::model::{rate_exponents, FluxFamily, ProblemParams};
use crate::real::Real;
use crate::solver::{StopReason, Trajectory};
use crate::supersolution::{c2_min, select_c1};

/// Family-specific transform of the maxima and the slopes predicted for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ansatz<T> {
    pub flux: FluxFamily,
    pub p: T,
    pub q: T,
    /// Predicted slope of `y_u` against `-log(T - t)`.
    pub gamma_u: T,
    pub gamma_v: T,
}

impl<T: Real> Ansatz<T> {
    pub fn new(flux: FluxFamily, p: T, q: T) -> Result<Self> {
        let (gamma_u, gamma_v) = match flux {
            FluxFamily::ExpLinear => (T::of(0.5), T::of(0.5)),
            FluxFamily::ExpPower | FluxFamily::Power => {
                let (a, b) = rate_exponents(p, q)?;
                (a * T::of(0.5), b * T::of(0.5))
            }
        };
        Ok(Ansatz { flux, p, q, gamma_u, gamma_v })
    }

    pub fn for_params(params: &ProblemParams<T>) -> Result<Self> {
        Ansatz::new(params.flux, params.p, params.q)
    }

    pub fn y_u(&self, m: T) -> T {
        match self.flux {
            FluxFamily::ExpPower => m,
            FluxFamily::Power => m.ln(),
            FluxFamily::ExpLinear => self.q * m,
        }
    }

    pub fn y_v(&self, n: T) -> T {
        match self.flux {
            FluxFamily::ExpPower => n,
            FluxFamily::Power => n.ln(),
            FluxFamily::ExpLinear => self.p * n,
        }
    }

    /// Short tag naming the rate law, used in summaries.
    pub fn tag(&self) -> &'static str {
        match self.flux {
            FluxFamily::ExpPower => "log_rate",
            FluxFamily::Power => "power_rate",
            FluxFamily::ExpLinear => "exp_linear_rate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions<T> {
    /// Growth of `M` the tail window must cover.
    pub min_growth: T,
    pub min_samples: usize,
    /// Largest acceptable RMS residual of the tail fit.
    pub max_residual: T,
    /// Log-spaced candidates scanned before the golden-section refinement.
    pub scan_points: usize,
    /// Largest accepted increase of the rate product over the last half-decade.
    pub trend_tolerance: T,
    /// Largest accepted growth of the interior supremum over the final decade.
    pub plateau_tolerance: T,
}

impl<T: Real> Default for FitOptions<T> {
    fn default() -> Self {
        FitOptions {
            min_growth: T::of(2.0),
            min_samples: 20,
            max_residual: T::of(0.1),
            scan_points: 80,
            trend_tolerance: T::of(1.2),
            plateau_tolerance: T::of(0.05),
        }
    }
}

/// Index range `[start, len)` of the fitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailWindow<T> {
    pub start: usize,
    pub len: usize,
    pub t_lo: T,
    pub t_hi: T,
    /// `M(t_hi) - M(t_lo)`.
    pub growth: T,
}

impl<T> TailWindow<T> {
    pub fn samples(&self) -> usize {
        self.len - self.start
    }
}

/// Smallest suffix over which `m` grows by `min_growth`, extended backwards
/// to `min_samples` points. A series that never grows that much is used whole.
pub fn tail_window<T: Real>(t: &[T], m: &[T], options: &FitOptions<T>) -> Result<TailWindow<T>> {
    let len = m.len();
    if t.len() != len {
        return Err(Error::FitFailed("time and value series differ in length".into()));
    }
    if len < options.min_samples {
        return Err(Error::FitFailed(format!("{len} samples, at least {} needed", options.min_samples)));
    }
    let last = m[len - 1];
    let start = m.iter().rposition(|&x| x <= last - options.min_growth).unwrap_or(0);
    let start = start.min(len - options.min_samples);
    let tail = &m[start..];
    if tail.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::FitFailed("maximum is not monotone over the tail".into()));
    }
    if !(tail[tail.len() - 1] > tail[0]) {
        return Err(Error::FitFailed("maximum does not grow over the tail".into()));
    }
    if t[start..].windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::FitFailed("sample times are not increasing".into()));
    }
    Ok(TailWindow { start, len, t_lo: t[start], t_hi: t[len - 1], growth: tail[tail.len() - 1] - tail[0] })
}

/// Least-squares line `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
    pub rms: T,
}

pub fn fit_line<T: Real>(x: &[T], y: &[T]) -> LineFit<T> {
    let n = T::of_usize(x.len());
    let mx = x.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = y.iter().fold(T::zero(), |a, &b| a + b) / n;
    let (sxx, sxy) = x.iter().zip(y).fold((T::zero(), T::zero()), |(sxx, sxy), (&xi, &yi)| {
        let dx = xi - mx;
        (sxx + dx * dx, sxy + dx * (yi - my))
    });
    let slope = if sxx > T::zero() { sxy / sxx } else { T::zero() };
    let intercept = my - slope * mx;
    let ss = x.iter().zip(y).fold(T::zero(), |acc, (&xi, &yi)| {
        let r = yi - intercept - slope * xi;
        acc + r * r
    });
    LineFit { slope, intercept, rms: (ss / n).sqrt() }
}

fn log_distance<T: Real>(t: &[T], t_hat: T) -> Vec<T> {
    t.iter().map(|&ti| -(t_hat - ti).ln()).collect()
}

/// Result of the blow-up time search.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupFit<T> {
    pub t_hat: T,
    /// `exp` of the intercept of `y_u` with the slope fixed at `gamma_u`.
    pub c1_hat: T,
    pub c2_hat: T,
    /// Larger of the two free-fit RMS residuals at `t_hat`.
    pub residual: T,
    pub window: TailWindow<T>,
    pub ansatz: Ansatz<T>,
    pub free_u: LineFit<T>,
    pub free_v: LineFit<T>,
}

impl<T: Real> BlowupFit<T> {
    pub fn fit_window(&self) -> (T, T) {
        (self.window.t_lo, self.window.t_hi)
    }
}

fn objective<T: Real>(t: &[T], yu: &[T], yv: &[T], t_hat: T) -> (T, LineFit<T>, LineFit<T>) {
    let x = log_distance(t, t_hat);
    let fu = fit_line(&x, yu);
    let fv = fit_line(&x, yv);
    (fu.rms + fv.rms, fu, fv)
}

/// Fits the family ansatz to `(t, M, N)` and returns the blow-up time.
///
/// The outer search runs over `log(T - t_hi)`: a log-spaced scan brackets the
/// minimum of the summed RMS residual, golden-section refines it. Given `T`
/// the inner problem is an ordinary line fit with the slope left free.
pub fn estimate_blowup_time_series<T: Real>(
    t: &[T],
    m: &[T],
    n: &[T],
    ansatz: &Ansatz<T>,
    options: &FitOptions<T>,
) -> Result<BlowupFit<T>> {
    if n.len() != m.len() {
        return Err(Error::FitFailed("M and N series differ in length".into()));
    }
    let window = tail_window(t, m, options)?;
    let ts = &t[window.start..];
    let yu: Vec<T> = m[window.start..].iter().map(|&x| ansatz.y_u(x)).collect();
    let yv: Vec<T> = n[window.start..].iter().map(|&x| ansatz.y_v(x)).collect();
    if yu.iter().chain(&yv).any(|y| !y.is_finite()) {
        return Err(Error::FitFailed("transformed maxima are not finite".into()));
    }

    let t_hi = window.t_hi;
    let span = (t_hi - window.t_lo).max(t_hi.abs() * T::epsilon());
    let lo = (T::of(4.0) * T::epsilon() * t_hi.abs().max(T::min_positive_value().sqrt())).ln();
    let hi = (T::of(10.0) * span).ln();
    let cost = |ld: T| objective(ts, &yu, &yv, t_hi + ld.exp()).0;

    let k = options.scan_points.max(3);
    let grid: Vec<T> = (0..k).map(|i| lo + (hi - lo) * T::of_usize(i) / T::of_usize(k - 1)).collect();
    let costs: Vec<T> = grid.iter().map(|&g| cost(g)).collect();
    let best = costs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_finite())
        .fold(None, |acc: Option<(usize, T)>, (i, &c)| match acc {
            Some((_, bc)) if bc <= c => acc,
            _ => Some((i, c)),
        })
        .ok_or_else(|| Error::FitFailed("no finite residual in the search range".into()))?
        .0;
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(k - 1)];

    let g = (T::of(5.0).sqrt() - T::one()) * T::of(0.5);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = cost(c);
    let mut fd = cost(d);
    for _ in 0..200 {
        if (b - a).abs() < T::of(1e-10) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = cost(d);
        }
    }
    let mut ld = (a + b) * T::of(0.5);
    if costs[best] < cost(ld) {
        ld = grid[best];
    }
    let t_hat = t_hi + ld.exp();
    if !(t_hat > t_hi) {
        return Err(Error::FitFailed("estimated blow-up time does not exceed the last sample".into()));
    }
    let (_, free_u, free_v) = objective(ts, &yu, &yv, t_hat);
    let residual = free_u.rms.max(free_v.rms);
    if !(residual <= options.max_residual) {
        return Err(Error::FitFailed(format!("fit residual {residual:e} above {}", options.max_residual)));
    }
    let x = log_distance(ts, t_hat);
    let mean = |y: &[T], gamma: T| {
        y.iter().zip(&x).fold(T::zero(), |acc, (&yi, &xi)| acc + yi - gamma * xi) / T::of_usize(y.len())
    };
    Ok(BlowupFit {
        t_hat,
        c1_hat: mean(&yu, ansatz.gamma_u).exp(),
        c2_hat: mean(&yv, ansatz.gamma_v).exp(),
        residual,
        window,
        ansatz: *ansatz,
        free_u,
        free_v,
    })
}

/// Blow-up time of a solver run. The run must have stopped at the threshold.
pub fn estimate_blowup_time<T: Real>(
    traj: &Trajectory<T>,
    params: &ProblemParams<T>,
    options: &FitOptions<T>,
) -> Result<BlowupFit<T>> {
    if traj.stop.reason != StopReason::BlowupThreshold {
        return Err(Error::FitFailed(format!("run stopped with {}, not at the blow-up threshold", traj.stop.reason)));
    }
    let ansatz = Ansatz::for_params(params)?;
    estimate_blowup_time_series(&traj.times(), &traj.max_u(), &traj.max_v(), &ansatz, options)
}

/// Free slope of a transformed series against `-log(T̂ - t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit<T> {
    pub slope: T,
    /// `2·slope`, comparable with `α` (or `β`).
    pub exponent: T,
    pub intercept: T,
    pub samples: usize,
}

pub fn fit_rate_series<T: Real>(t: &[T], y: &[T], t_hat: T) -> Result<RateFit<T>> {
    let (x, y): (Vec<T>, Vec<T>) =
        t.iter().zip(y).filter(|(&ti, yi)| ti < t_hat && yi.is_finite()).map(|(&ti, &yi)| (-(t_hat - ti).ln(), yi)).unzip();
    if x.len() < 10 {
        return Err(Error::FitFailed(format!("{} usable samples, at least 10 needed", x.len())));
    }
    let line = fit_line(&x, &y);
    Ok(RateFit { slope: line.slope, exponent: line.slope * T::of(2.0), intercept: line.intercept, samples: x.len() })
}

/// `(alpha_hat, beta_hat)` fits over the tail window of `fit`.
pub fn fit_rate<T: Real>(traj: &Trajectory<T>, fit: &BlowupFit<T>) -> Result<(RateFit<T>, RateFit<T>)> {
    let s = fit.window.start;
    let t = &traj.times()[s..];
    let yu: Vec<T> = traj.samples[s..].iter().map(|x| fit.ansatz.y_u(x.max_u)).collect();
    let yv: Vec<T> = traj.samples[s..].iter().map(|x| fit.ansatz.y_v(x.max_v)).collect();
    Ok((fit_rate_series(t, &yu, fit.t_hat)?, fit_rate_series(t, &yv, fit.t_hat)?))
}

/// Rate product `exp(y - γ·x)` over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct RateBound<T> {
    pub sup: T,
    /// Largest ratio `P(t_j)/P(t_i)` with `t_i < t_j` in the last half-decade.
    pub trend_ratio: T,
    /// `max/min` of the product in the last half-decade.
    pub variation: T,
    /// Largest increase ratio across the whole window.
    pub window_growth: T,
    /// `max/min` of the product across the whole window.
    pub window_variation: T,
    pub half_decade_samples: usize,
    pub passed: bool,
}

fn max_increase<T: Real>(values: &[T]) -> T {
    let mut lowest = T::infinity();
    let mut best = T::one();
    for &v in values {
        lowest = lowest.min(v);
        best = best.max(v / lowest);
    }
    best
}

/// Products over `t`, judged on the samples with `T̂ - t ≤ √10·(T̂ - t_last)`
/// (at least four).
pub fn rate_bound_series<T: Real>(t: &[T], y: &[T], t_hat: T, gamma: T, tolerance: T) -> RateBound<T> {
    let prod: Vec<T> = t.iter().zip(y).map(|(&ti, &yi)| (yi + gamma * (t_hat - ti).ln()).exp()).collect();
    let sup = prod.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
    let last_gap = t_hat - t[t.len() - 1];
    let cut = last_gap * T::of(10.0).sqrt();
    let mut first = t.iter().position(|&ti| t_hat - ti <= cut).unwrap_or(t.len() - 1);
    first = first.min(t.len().saturating_sub(4));
    let half = &prod[first..];
    let trend_ratio = max_increase(half);
    let hi = half.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
    let lo = half.iter().fold(T::infinity(), |m, &v| m.min(v));
    let finite = sup.is_finite() && prod.iter().all(|v| v.is_finite());
    let low = prod.iter().fold(T::infinity(), |m, &v| m.min(v));
    RateBound {
        sup,
        trend_ratio,
        variation: hi / lo,
        window_growth: max_increase(&prod),
        window_variation: sup / low,
        half_decade_samples: half.len(),
        passed: finite && trend_ratio <= tolerance,
    }
}

/// Rate products for `u` and `v` over the tail window of `fit`.
pub fn rate_bound_check<T: Real>(
    traj: &Trajectory<T>,
    fit: &BlowupFit<T>,
    options: &FitOptions<T>,
) -> (RateBound<T>, RateBound<T>) {
    let s = fit.window.start;
    let t = &traj.times()[s..];
    let yu: Vec<T> = traj.samples[s..].iter().map(|x| fit.ansatz.y_u(x.max_u)).collect();
    let yv: Vec<T> = traj.samples[s..].iter().map(|x| fit.ansatz.y_v(x.max_v)).collect();
    (
        rate_bound_series(t, &yu, fit.t_hat, fit.ansatz.gamma_u, options.trend_tolerance),
        rate_bound_series(t, &yv, fit.t_hat, fit.ansatz.gamma_v, options.trend_tolerance),
    )
}

/// `sup_t w(t)·(T̂ - t)^m` over all samples before `T̂`.
pub fn boundary_constant<T: Real>(t: &[T], w: &[T], t_hat: T, m: T) -> T {
    t.iter()
        .zip(w)
        .filter(|(&ti, _)| ti < t_hat)
        .fold(T::zero(), |acc, (&ti, &wi)| acc.max(wi * (t_hat - ti).powf(m)))
}

/// Constant `C` of the boundary bound `w(R,t) ≤ C/(T̂ - t)^m`: the larger of
/// the fitted rate supremum and the sampled supremum over the whole run.
pub fn comparison_constant<T: Real>(t: &[T], w: &[T], t_hat: T, m: T, rate_sup: T) -> T {
    let sampled = boundary_constant(t, w, t_hat, m);
    if rate_sup.is_finite() {
        sampled.max(rate_sup)
    } else {
        sampled
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteriorReport<T> {
    pub a: T,
    pub interior_sup_u: T,
    pub interior_sup_v: T,
    /// Interior supremum over the boundary maximum at the stop.
    pub ratio_u: T,
    pub ratio_v: T,
    /// Relative growth of the interior supremum over the final decade of `T̂ - t`.
    pub plateau_growth_u: Option<T>,
    pub plateau_growth_v: Option<T>,
    /// Every sample after `t = 0` has its maximum at the boundary node.
    pub argmax_at_boundary: bool,
    pub reached_threshold: bool,
    /// `C1·(R² - a²)^(-2m)` with `m = α/2` (resp. `β/2`).
    pub envelope_u: Option<T>,
    pub envelope_v: Option<T>,
    /// Both interior suprema lie below their envelopes.
    pub within_envelope: Option<bool>,
    pub verdict: Verdict,
}

fn interior_series<T: Real>(traj: &Trajectory<T>, a: T) -> (Vec<T>, Vec<T>, Vec<T>) {
    let idx = traj.grid.index_at_or_below(a);
    if idx == traj.interior_index {
        return (
            traj.times(),
            traj.samples.iter().map(|s| s.sup_u_interior).collect(),
            traj.samples.iter().map(|s| s.sup_v_interior).collect(),
        );
    }
    let sup = |w: &[T]| w[..=idx].iter().fold(T::neg_infinity(), |m, &x| m.max(x));
    let states = traj.states();
    (
        states.iter().map(|s| s.t).collect(),
        states.iter().map(|s| sup(&s.u)).collect(),
        states.iter().map(|s| sup(&s.v)).collect(),
    )
}

fn decade_growth<T: Real>(t: &[T], s: &[T], t_hat: T) -> T {
    let last_gap = t_hat - t[t.len() - 1];
    let first = t.iter().position(|&ti| t_hat - ti <= last_gap * T::of(10.0)).unwrap_or(t.len() - 1);
    let first = first.min(t.len().saturating_sub(2));
    let base = s[first];
    s[s.len() - 1] / base - T::one()
}

/// Interior boundedness diagnostics on `r ≤ a`.
pub fn boundary_set_check<T: Real>(
    traj: &Trajectory<T>,
    params: &ProblemParams<T>,
    a: T,
    fit: Option<&BlowupFit<T>>,
    options: &FitOptions<T>,
) -> Result<InteriorReport<T>> {
    if !(a > T::zero() && a < params.radius) {
        return Err(Error::BadRadius { a: a.to_f64_lossy(), radius: params.radius.to_f64_lossy() });
    }
    let (t, su, sv) = interior_series(traj, a);
    let interior_sup_u = su.iter().fold(T::neg_infinity(), |m, &x| m.max(x));
    let interior_sup_v = sv.iter().fold(T::neg_infinity(), |m, &x| m.max(x));
    let last = traj.samples[traj.samples.len() - 1];
    let boundary = traj.grid.last();
    let argmax_at_boundary = traj
        .samples
        .iter()
        .filter(|s| s.t > T::zero())
        .all(|s| s.argmax_u == boundary && s.argmax_v == boundary);
    let reached_threshold = traj.stop.reason == StopReason::BlowupThreshold;

    let mut report = InteriorReport {
        a,
        interior_sup_u,
        interior_sup_v,
        ratio_u: interior_sup_u / last.max_u,
        ratio_v: interior_sup_v / last.max_v,
        plateau_growth_u: None,
        plateau_growth_v: None,
        argmax_at_boundary,
        reached_threshold,
        envelope_u: None,
        envelope_v: None,
        within_envelope: None,
        verdict: Verdict::Inconclusive,
    };
    let fit = match fit {
        Some(fit) if reached_threshold => fit,
        _ => return Ok(report),
    };

    let gu = decade_growth(&t, &su, fit.t_hat);
    let gv = decade_growth(&t, &sv, fit.t_hat);
    report.plateau_growth_u = Some(gu);
    report.plateau_growth_v = Some(gv);

    if params.flux != FluxFamily::ExpLinear {
        let (alpha, beta) = rate_exponents(params.p, params.q)?;
        let times = traj.times();
        let (u0, v0) = {
            let s = traj.states();
            (s[0].u.clone(), s[0].v.clone())
        };
        let r2a2 = params.radius * params.radius - a * a;
        let (rate_u, rate_v) = rate_bound_check(traj, fit, options);
        let envelope = |m: T, w: &[T], w0: &[T], rate_sup: T| {
            let c = comparison_constant(&times, w, fit.t_hat, m, rate_sup);
            let c2 = c2_min(params.dim, params.radius, m);
            let c1 = select_c1(c, c2, m, fit.t_hat, &traj.grid, w0);
            c1 * r2a2.powf(-T::of(2.0) * m)
        };
        let mu = alpha * T::of(0.5);
        let mv = beta * T::of(0.5);
        let eu = envelope(mu, &traj.max_u(), &u0, rate_u.sup);
        let ev = envelope(mv, &traj.max_v(), &v0, rate_v.sup);
        report.envelope_u = Some(eu);
        report.envelope_v = Some(ev);
        report.within_envelope = Some(interior_sup_u <= eu && interior_sup_v <= ev);
    }

    let plateau = gu < options.plateau_tolerance && gv < options.plateau_tolerance;
    report.verdict = if plateau && argmax_at_boundary { Verdict::Pass } else { Verdict::Fail };
    Ok(report)
}

/// Everything the rate analysis extracts from one run.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupReport<T> {
    pub t_hat: T,
    pub alpha_hat: T,
    pub beta_hat: T,
    pub c1_hat: T,
    pub c2_hat: T,
    pub rate_u: RateBound<T>,
    pub rate_v: RateBound<T>,
    pub interior_sup_u: T,
    pub interior_sup_v: T,
    pub fit_window: (T, T),
    pub residual: T,
    pub fit: BlowupFit<T>,
    pub interior: InteriorReport<T>,
}

impl<T: Real> BlowupReport<T> {
    pub fn rate_sup_u(&self) -> T {
        self.rate_u.sup
    }

    pub fn rate_sup_v(&self) -> T {
        self.rate_v.sup
    }
}

/// Runs the time fit, the exponent fit, the rate bound and the interior check.
pub fn analyze<T: Real>(
    traj: &Trajectory<T>,
    params: &ProblemParams<T>,
    a: T,
    options: &FitOptions<T>,
) -> Result<BlowupReport<T>> {
    let fit = estimate_blowup_time(traj, params, options)?;
    let (ru, rv) = fit_rate(traj, &fit)?;
    let (rate_u, rate_v) = rate_bound_check(traj, &fit, options);
    let interior = boundary_set_check(traj, params, a, Some(&fit), options)?;
    Ok(BlowupReport {
        t_hat: fit.t_hat,
        alpha_hat: ru.exponent,
        beta_hat: rv.exponent,
        c1_hat: fit.c1_hat,
        c2_hat: fit.c2_hat,
        rate_u,
        rate_v,
        interior_sup_u: interior.interior_sup_u,
        interior_sup_v: interior.interior_sup_v,
        fit_window: fit.fit_window(),
        residual: fit.residual,
        fit,
        interior,
    })
}
