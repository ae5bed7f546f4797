//! Heat kernel, sphere quadrature and single-layer potentials.
//!
//! `Γ(x, t) = (4πt)^(-n/2) exp(-|x|²/4t)`. The single-layer potential of a
//! density `φ` on `S_R` over `[t1, t]` is
//!
//! ```text
//! U(x, t) = ∫_{t1}^{t} ∫_{S_R} Γ(x - y, t - τ) φ(y, τ) ds_y dτ.
//! ```
//!
//! Surface integrals use Gauss–Legendre panels in the polar angle measured
//! from a focus direction, graded geometrically toward it, and the trapezoid
//! rule in azimuth. Time integrals use panels graded toward `τ = t`.

use crate::error::{Error, Result};
use crate::quadrature::{graded_edges, GaussLegendre};
use crate::real::Real;

fn dist2<T: Real>(a: &[T; 3], b: &[T; 3]) -> T {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

fn point<T: Real>(x: &[T]) -> [T; 3] {
    let mut p = [T::zero(); 3];
    for (i, &c) in x.iter().take(3).enumerate() {
        p[i] = c;
    }
    p
}

/// `(4πt)^(-n/2) exp(-|x|²/4t)` with `n = x.len()`.
pub fn heat_kernel<T: Real>(x: &[T], t: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::BadTime(t.to_f64_lossy()));
    }
    let r2 = x.iter().fold(T::zero(), |acc, &c| acc + c * c);
    Ok(kernel_r2(r2, t, x.len()))
}

fn kernel_r2<T: Real>(r2: T, t: T, n: usize) -> T {
    let four_pi_t = T::of(4.0) * T::PI() * t;
    four_pi_t.powf(-T::of_usize(n) * T::of(0.5)) * (-r2 / (T::of(4.0) * t)).exp()
}

/// Nodes and positive weights on the sphere (or circle) `S_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature<T> {
    pub dim: usize,
    pub radius: T,
    pub nodes: Vec<[T; 3]>,
    pub weights: Vec<T>,
    /// Smallest distance to the focus the rule still resolves.
    pub resolution: T,
}

impl<T: Real> SphereQuadrature<T> {
    /// `m` equispaced points on the circle, or `m` Gauss–Legendre latitudes
    /// times `2m` longitudes on the sphere.
    pub fn uniform(dim: usize, radius: T, m: usize) -> Result<Self> {
        check_dim(dim)?;
        if m < 2 {
            return Err(Error::InvalidParams("quadrature needs at least two points".into()));
        }
        match dim {
            2 => {
                let h = T::of(2.0) * T::PI() / T::of_usize(m);
                let nodes = (0..m)
                    .map(|k| {
                        let a = h * T::of_usize(k);
                        [radius * a.cos(), radius * a.sin(), T::zero()]
                    })
                    .collect();
                Ok(SphereQuadrature { dim, radius, nodes, weights: vec![radius * h; m], resolution: radius * h })
            }
            _ => {
                let edges = [T::zero(), T::PI()];
                let mut q = Self::polar_rule(radius, &edges, m, 2 * m, [T::zero(), T::zero(), T::one()]);
                q.resolution = radius * T::PI() / T::of_usize(m);
                Ok(q)
            }
        }
    }

    /// Rule refined toward the point `radius·focus` (`focus` a unit vector):
    /// `levels` geometric halvings of the polar angle, `order` Gauss points
    /// per panel, `azimuth` points around the focus axis (sphere only).
    pub fn graded(dim: usize, radius: T, focus: &[T], levels: usize, order: usize, azimuth: usize) -> Result<Self> {
        check_dim(dim)?;
        let f = point(focus);
        let norm = dist2(&f, &[T::zero(); 3]).sqrt();
        if !(norm > T::zero()) {
            return Err(Error::InvalidParams("focus direction must be nonzero".into()));
        }
        let f = [f[0] / norm, f[1] / norm, f[2] / norm];
        let half = T::of(0.5);
        // polar edges π, π/2, π/4, ... down to π·2^-levels, then 0
        let mut edges: Vec<T> = graded_edges(T::zero(), T::PI(), levels, half).into_iter().map(|e| T::PI() - e).collect();
        edges.reverse();
        let theta_min = edges[1];
        let mut q = match dim {
            2 => {
                let rule = GaussLegendre::<T>::new(order);
                let base = f[1].atan2(f[0]);
                let mut nodes = Vec::new();
                let mut weights = Vec::new();
                for sign in [T::one(), -T::one()] {
                    for e in edges.windows(2) {
                        let mid = (e[0] + e[1]) * half;
                        let hw = (e[1] - e[0]) * half;
                        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                            let a = base + sign * (mid + hw * x);
                            nodes.push([radius * a.cos(), radius * a.sin(), T::zero()]);
                            weights.push(radius * w * hw);
                        }
                    }
                }
                SphereQuadrature { dim, radius, nodes, weights, resolution: T::zero() }
            }
            _ => Self::polar_rule_panels(radius, &edges, order, azimuth.max(1), f),
        };
        q.resolution = T::of(10.0) * radius * theta_min;
        Ok(q)
    }

    fn polar_rule(radius: T, edges: &[T], order: usize, azimuth: usize, focus: [T; 3]) -> Self {
        Self::polar_rule_panels(radius, edges, order, azimuth, focus)
    }

    fn polar_rule_panels(radius: T, edges: &[T], order: usize, azimuth: usize, f: [T; 3]) -> Self {
        let rule = GaussLegendre::<T>::new(order);
        let (e1, e2) = frame(f);
        let half = T::of(0.5);
        let dphi = T::of(2.0) * T::PI() / T::of_usize(azimuth);
        let r2 = radius * radius;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for e in edges.windows(2) {
            let mid = (e[0] + e[1]) * half;
            let hw = (e[1] - e[0]) * half;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let th = mid + hw * x;
                let (st, ct) = th.sin_cos();
                for k in 0..azimuth {
                    let ph = dphi * (T::of_usize(k) + half);
                    let (sp, cp) = ph.sin_cos();
                    let dir = [
                        ct * f[0] + st * (cp * e1[0] + sp * e2[0]),
                        ct * f[1] + st * (cp * e1[1] + sp * e2[1]),
                        ct * f[2] + st * (cp * e1[2] + sp * e2[2]),
                    ];
                    nodes.push([radius * dir[0], radius * dir[1], radius * dir[2]]);
                    weights.push(r2 * st * w * hw * dphi);
                }
            }
        }
        SphereQuadrature { dim: 3, radius, nodes, weights, resolution: T::zero() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a + w)
    }

    /// `2πR` or `4πR²`.
    pub fn surface_measure(&self) -> T {
        surface_measure(self.dim, self.radius)
    }

    pub fn resolution_scale(&self) -> T {
        self.resolution
    }

    /// `Σ w_i g(y_i)`.
    pub fn integrate<F: FnMut(&[T; 3]) -> T>(&self, mut g: F) -> T {
        self.nodes.iter().zip(&self.weights).fold(T::zero(), |acc, (y, &w)| acc + w * g(y))
    }
}

pub fn surface_measure<T: Real>(dim: usize, radius: T) -> T {
    match dim {
        2 => T::of(2.0) * T::PI() * radius,
        _ => T::of(4.0) * T::PI() * radius * radius,
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("surface quadrature supports n = 2 or 3, got {dim}")))
    }
}

fn frame<T: Real>(f: [T; 3]) -> ([T; 3], [T; 3]) {
    let helper = if f[0].abs() < T::of(0.9) { [T::one(), T::zero(), T::zero()] } else { [T::zero(), T::one(), T::zero()] };
    let dot = helper[0] * f[0] + helper[1] * f[1] + helper[2] * f[2];
    let mut e1 = [helper[0] - dot * f[0], helper[1] - dot * f[1], helper[2] - dot * f[2]];
    let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1 = [e1[0] / n, e1[1] / n, e1[2] / n];
    let e2 = [f[1] * e1[2] - f[2] * e1[1], f[2] * e1[0] - f[0] * e1[2], f[0] * e1[1] - f[1] * e1[0]];
    (e1, e2)
}

/// Time discretisation of the layer potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeRule {
    /// Geometric halvings of `t - t1` toward `τ = t`.
    pub levels: usize,
    pub order: usize,
}

impl Default for TimeRule {
    fn default() -> Self {
        TimeRule { levels: 40, order: 8 }
    }
}

fn time_nodes<T: Real>(t1: T, t: T, rule: TimeRule) -> Vec<(T, T)> {
    let gl = GaussLegendre::<T>::new(rule.order);
    let edges = graded_edges(t1, t, rule.levels, T::of(0.5));
    let mut out = Vec::with_capacity(edges.len() * rule.order);
    for e in edges.windows(2) {
        let mid = (e[0] + e[1]) * T::of(0.5);
        let hw = (e[1] - e[0]) * T::of(0.5);
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            out.push((mid + hw * x, w * hw));
        }
    }
    out
}

fn check_window<T: Real>(t1: T, t: T) -> Result<()> {
    if !(t1 < t) {
        return Err(Error::BadWindow { t1: t1.to_f64_lossy(), t: t.to_f64_lossy() });
    }
    Ok(())
}

/// Single-layer potential `U(x, t)` with `steps` graded time panels.
pub fn single_layer<T: Real, F: Fn(&[T; 3], T) -> T>(
    x: &[T],
    t: T,
    phi: F,
    t1: T,
    quad: &SphereQuadrature<T>,
    steps: usize,
) -> Result<T> {
    check_window(t1, t)?;
    let rule = TimeRule { levels: steps, ..TimeRule::default() };
    Ok(layer_integral(&point(x), t, &phi, t1, quad, rule, |r2, s, n, _| kernel_r2(r2, s, n)))
}

fn layer_integral<T: Real, F, K>(x: &[T; 3], t: T, phi: &F, t1: T, quad: &SphereQuadrature<T>, rule: TimeRule, kernel: K) -> T
where
    F: Fn(&[T; 3], T) -> T,
    K: Fn(T, T, usize, &[T; 3]) -> T,
{
    let n = quad.dim;
    let d2: Vec<T> = quad.nodes.iter().map(|y| dist2(x, y)).collect();
    time_nodes(t1, t, rule).into_iter().fold(T::zero(), |acc, (tau, wt)| {
        let s = t - tau;
        let space = quad
            .nodes
            .iter()
            .zip(&quad.weights)
            .zip(&d2)
            .fold(T::zero(), |a, ((y, &w), &r2)| a + w * kernel(r2, s, n, y) * phi(y, tau));
        acc + wt * space
    })
}

/// `∂U/∂η(x0, t)` evaluated directly at a boundary point, `η = x0/R`.
pub fn normal_derivative_on_boundary<T: Real, F: Fn(&[T; 3], T) -> T>(
    x0: &[T],
    t: T,
    phi: F,
    t1: T,
    quad: &SphereQuadrature<T>,
    rule: TimeRule,
) -> Result<T> {
    check_window(t1, t)?;
    let x = point(x0);
    let radius = quad.radius;
    let eta = [x[0] / radius, x[1] / radius, x[2] / radius];
    Ok(layer_integral(&x, t, &phi, t1, quad, rule, |r2, s, n, y| {
        // ∇_x Γ = -(x - y)/(2s) Γ
        let proj = (x[0] - y[0]) * eta[0] + (x[1] - y[1]) * eta[1] + (x[2] - y[2]) * eta[2];
        -proj / (T::of(2.0) * s) * kernel_r2(r2, s, n)
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpOptions<T> {
    pub t1: T,
    pub time: TimeRule,
    /// Finite-difference step as a fraction of the approach distance.
    pub fd_fraction: T,
    pub tolerance: T,
}

impl<T: Real> Default for JumpOptions<T> {
    fn default() -> Self {
        JumpOptions { t1: T::zero(), time: TimeRule::default(), fd_fraction: T::of(0.02), tolerance: T::of(0.05) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpReport<T> {
    pub distances: Vec<T>,
    /// `∂U/∂η(x0 - dη) - ∂U/∂η(x0)` for each `d`, outward normal `η`.
    pub differences: Vec<T>,
    pub direct: T,
    /// Extrapolated `d → 0` difference with the outward normal.
    pub jump_outward: T,
    /// Same limit with the normal pointing into the ball.
    pub jump: T,
    /// `-φ(x0, t)/2`.
    pub expected: T,
    pub passed: bool,
}

/// Polynomial extrapolation of `(d_i, v_i)` to `d = 0`.
pub fn neville_at_zero<T: Real>(d: &[T], v: &[T]) -> T {
    let mut p = v.to_vec();
    let k = d.len();
    for level in 1..k {
        for i in 0..k - level {
            let j = i + level;
            p[i] = (d[j] * p[i] - d[i] * p[i + 1]) / (d[j] - d[i]);
        }
    }
    p[0]
}

/// Normal-derivative jump of the single layer at the boundary point `x0`.
///
/// For each approach distance `d` the derivative along `η` is taken by a
/// central difference at `x0 - dη`, the on-boundary value is subtracted and
/// the differences are extrapolated to `d = 0`. The reported `jump` uses the
/// normal pointing into the ball and is compared with `-φ/2`.
pub fn jump_check<T: Real, F: Fn(&[T; 3], T) -> T + Copy>(
    x0: &[T],
    phi: F,
    t: T,
    quad: &SphereQuadrature<T>,
    distances: &[T],
    options: &JumpOptions<T>,
) -> Result<JumpReport<T>> {
    check_window(options.t1, t)?;
    if distances.is_empty() {
        return Err(Error::InvalidParams("no approach distances".into()));
    }
    if let Some(&d) = distances.iter().find(|&&d| !(d >= quad.resolution_scale())) {
        return Err(Error::ResolutionError { distance: d.to_f64_lossy(), scale: quad.resolution_scale().to_f64_lossy() });
    }
    let x = point(x0);
    let radius = quad.radius;
    let eta = [x[0] / radius, x[1] / radius, x[2] / radius];
    let at = |off: T| [x[0] - off * eta[0], x[1] - off * eta[1], x[2] - off * eta[2]];
    let u = |p: [T; 3]| layer_integral(&p, t, &phi, options.t1, quad, options.time, |r2, s, n, _| kernel_r2(r2, s, n));

    let direct = normal_derivative_on_boundary(x0, t, phi, options.t1, quad, options.time)?;
    let differences: Vec<T> = distances
        .iter()
        .map(|&d| {
            let h = d * options.fd_fraction;
            let deriv = (u(at(d - h)) - u(at(d + h))) / (T::of(2.0) * h);
            deriv - direct
        })
        .collect();
    let jump_outward = neville_at_zero(distances, &differences);
    let jump = -jump_outward;
    let expected = -phi(&x, t) * T::of(0.5);
    let passed = (jump - expected).abs() <= options.tolerance;
    Ok(JumpReport { distances: distances.to_vec(), differences, direct, jump_outward, jump, expected, passed })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub values: Vec<T>,
    pub converged: bool,
    pub diverging: bool,
}

impl<T: Real> ConvergenceReport<T> {
    pub fn last(&self) -> T {
        self.values[self.values.len() - 1]
    }
}

/// `∫_{S_R} |x - y|^(-a) ds_y` on each rule of a refining sequence.
///
/// Converged when the last two values agree to `1e-3` relative; diverging
/// when the values keep increasing without the increments shrinking.
pub fn surface_integral_bound<T: Real>(x: &[T], a: T, quads: &[SphereQuadrature<T>]) -> Result<ConvergenceReport<T>> {
    if quads.len() < 2 {
        return Err(Error::InvalidParams("need at least two quadratures".into()));
    }
    if !(a >= T::zero()) {
        return Err(Error::InvalidParams(format!("exponent a must be nonnegative, got {a}")));
    }
    let xp = point(x);
    let values: Vec<T> = quads
        .iter()
        .map(|q| {
            q.integrate(|y| {
                let r2 = dist2(&xp, y);
                if r2 > T::zero() {
                    r2.powf(-a * T::of(0.5))
                } else {
                    T::zero()
                }
            })
        })
        .collect();
    let k = values.len();
    let rel = ((values[k - 1] - values[k - 2]) / values[k - 1]).abs();
    let converged = rel < T::of(1e-3);
    let inc: Vec<T> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let growing = inc.iter().all(|&d| d > T::zero());
    let not_shrinking = inc.len() >= 2 && inc[inc.len() - 1] >= T::of(0.5) * inc[inc.len() - 2];
    Ok(ConvergenceReport { values, converged: converged && !(growing && not_shrinking), diverging: growing && not_shrinking })
}

/// `√g · ∫_{S_R} Γ(x - y, g) ds_y` for each time gap `g`.
pub fn layer_mass_scaling<T: Real>(x: &[T], quad: &SphereQuadrature<T>, gaps: &[T]) -> Vec<T> {
    let xp = point(x);
    gaps.iter()
        .map(|&g| g.sqrt() * quad.integrate(|y| kernel_r2(dist2(&xp, y), g, quad.dim)))
        .collect()
}
