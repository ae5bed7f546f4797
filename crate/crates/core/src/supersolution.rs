//! The comparison function
//!
//! ```text
//! z(r, t) = C1 / [h(r) + C2 (T - t)]^m,   h(r) = (R² - r²)²
//! ```
//!
//! its residual `z_t - Δz` in closed form, and the check that it dominates a
//! computed solution.

use crate::error::{Error, Result};
use crate::model::{FieldState, RadialGrid};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonParams<T> {
    pub c1: T,
    pub c2: T,
    pub m: T,
    pub horizon: T,
    pub radius: T,
    pub dim: usize,
}

impl<T: Real> ComparisonParams<T> {
    /// `C2` set to [`c2_min`].
    pub fn with_min_c2(c1: T, m: T, horizon: T, radius: T, dim: usize) -> Self {
        ComparisonParams { c1, c2: c2_min(dim, radius, m), m, horizon, radius, dim }
    }

    fn d(&self, r: T, t: T) -> T {
        h(r, self.radius) + self.c2 * (self.horizon - t)
    }
}

/// `4nR² + 16R²(m+1) + 1`.
pub fn c2_min<T: Real>(n: usize, radius: T, m: T) -> T {
    let r2 = radius * radius;
    T::of(4.0) * T::of_usize(n) * r2 + T::of(16.0) * r2 * (m + T::one()) + T::one()
}

/// Smallest `C2` for which the residual stays nonnegative on `[0,R]×[0,T)`.
///
/// The bracket in the residual is smallest as `t → T`, where it reduces to
/// `C2 + Δh - (m+1)|∇h|²/h = C2 + 8r² - 4n(R²-r²) - 16(m+1)r²`; this is
/// linear in `r²` and its minimum sits at an endpoint.
pub fn c2_sharp<T: Real>(n: usize, radius: T, m: T) -> T {
    let r2 = radius * radius;
    let at_origin = T::of(4.0) * T::of_usize(n) * r2;
    let at_boundary = r2 * (T::of(16.0) * m + T::of(8.0));
    at_origin.max(at_boundary)
}

pub fn h<T: Real>(r: T, radius: T) -> T {
    let s = radius * radius - r * r;
    s * s
}

/// `Δh = 8r² - 4n(R² - r²)`.
pub fn laplacian_h<T: Real>(r: T, radius: T, n: usize) -> T {
    T::of(8.0) * r * r - T::of(4.0) * T::of_usize(n) * (radius * radius - r * r)
}

/// `|∇h|² = 16r²(R² - r²)²`.
pub fn grad_h_sq<T: Real>(r: T, radius: T) -> T {
    T::of(16.0) * r * r * h(r, radius)
}

fn check_time<T: Real>(t: T, horizon: T) -> Result<()> {
    if !(t < horizon) || !t.is_finite() {
        return Err(Error::BadTime(t.to_f64_lossy()));
    }
    Ok(())
}

/// `z(r, t)`; requires `t < T`.
pub fn comparison_value<T: Real>(r: T, t: T, params: &ComparisonParams<T>) -> Result<T> {
    check_time(t, params.horizon)?;
    Ok(params.c1 / params.d(r, t).powf(params.m))
}

/// `z_t - Δz = C1·m·D^(-m-1)·(C2 + Δh - (m+1)|∇h|²/D)`, `D = h + C2(T-t)`.
pub fn supersolution_residual<T: Real>(r: T, t: T, params: &ComparisonParams<T>) -> Result<T> {
    check_time(t, params.horizon)?;
    let d = params.d(r, t);
    let m = params.m;
    let bracket = params.c2 + laplacian_h(r, params.radius, params.dim)
        - (m + T::one()) * grad_h_sq(r, params.radius) / d;
    Ok(params.c1 * m * d.powf(-m - T::one()) * bracket)
}

/// Smallest `C1` with `C1 ≥ C·C2^m` and `z(·,0) ≥ w0` on the grid.
pub fn select_c1<T: Real>(c: T, c2: T, m: T, horizon: T, grid: &RadialGrid<T>, w0: &[T]) -> T {
    let boundary = c * c2.powf(m);
    let initial = grid
        .nodes
        .iter()
        .zip(w0)
        .fold(T::zero(), |acc, (&r, &w)| acc.max(w * (h(r, grid.radius) + c2 * horizon).powf(m)));
    boundary.max(initial)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum C1Strategy<T> {
    /// Smallest admissible value from [`select_c1`].
    Auto,
    /// The automatic value times a factor.
    Scaled(T),
    Fixed(T),
}

/// Domination of one component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentDominance<T> {
    pub c1: T,
    pub c2: T,
    pub m: T,
    /// `min (z - w)` over all nodes and states with `0 < t < T̂`.
    pub margin: T,
    /// `min (z - w)` at `t = 0`; zero when `C1` is set by the initial data.
    pub initial_margin: T,
    /// `min z/w` over all nodes and states.
    pub ratio: T,
    /// `min (z - w)` restricted to `r ≤ a`.
    pub interior_margin: T,
    pub worst_r: T,
    pub worst_t: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport<T> {
    pub u: ComponentDominance<T>,
    pub v: ComponentDominance<T>,
    pub states_checked: usize,
}

impl<T: Real> DominanceReport<T> {
    pub fn margin(&self) -> T {
        self.u.margin.min(self.v.margin)
    }
}

/// Inputs of [`dominance_check`] taken from the rate analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceInput<T> {
    pub t_hat: T,
    /// Exponents `m` for `u` and `v` (normally `α/2`, `β/2`).
    pub m_u: T,
    pub m_v: T,
    /// Boundary constants `C` in `w(R,t) ≤ C/(T̂ - t)^m`.
    pub c_u: T,
    pub c_v: T,
    /// Interior radius for the separate interior margin.
    pub a: T,
}

#[allow(clippy::too_many_arguments)]
fn component<T: Real>(
    states: &[&FieldState<T>],
    grid: &RadialGrid<T>,
    dim: usize,
    input: &DominanceInput<T>,
    m: T,
    c: T,
    strategy: C1Strategy<T>,
    pick: fn(&FieldState<T>) -> &[T],
) -> ComponentDominance<T> {
    let c2 = c2_min(dim, grid.radius, m);
    let auto = || select_c1(c, c2, m, input.t_hat, grid, pick(states[0]));
    let c1 = match strategy {
        C1Strategy::Auto => auto(),
        C1Strategy::Scaled(k) => auto() * k,
        C1Strategy::Fixed(c1) => c1,
    };
    let params = ComparisonParams { c1, c2, m, horizon: input.t_hat, radius: grid.radius, dim };
    let interior = grid.index_at_or_below(input.a);
    let mut out = ComponentDominance {
        c1,
        c2,
        m,
        margin: T::infinity(),
        initial_margin: T::infinity(),
        ratio: T::infinity(),
        interior_margin: T::infinity(),
        worst_r: T::zero(),
        worst_t: T::zero(),
    };
    for state in states.iter().filter(|s| s.t < input.t_hat) {
        for (i, (&r, &w)) in grid.nodes.iter().zip(pick(state)).enumerate() {
            let z = params.c1 / params.d(r, state.t).powf(m);
            let gap = z - w;
            if state.t <= T::zero() {
                out.initial_margin = out.initial_margin.min(gap);
                continue;
            }
            if gap < out.margin {
                out.margin = gap;
                out.worst_r = r;
                out.worst_t = state.t;
            }
            if w > T::zero() {
                out.ratio = out.ratio.min(z / w);
            }
            if i <= interior {
                out.interior_margin = out.interior_margin.min(gap);
            }
        }
    }
    out
}

/// Checks `z ≥ u` and `z ≥ v` at every node of every state with `t < T̂`.
/// The reported margin covers `0 < t < T̂`; the initial state is checked
/// separately since the automatic `C1` touches it.
pub fn dominance_check<T: Real>(
    states: &[&FieldState<T>],
    grid: &RadialGrid<T>,
    dim: usize,
    input: &DominanceInput<T>,
    strategy: C1Strategy<T>,
) -> Result<DominanceReport<T>> {
    if states.is_empty() {
        return Err(Error::InvalidParams("no states to compare".into()));
    }
    let u = component(states, grid, dim, input, input.m_u, input.c_u, strategy, |s| &s.u);
    let v = component(states, grid, dim, input, input.m_v, input.c_v, strategy, |s| &s.v);
    let states_checked = states.iter().filter(|s| s.t < input.t_hat).count();
    for part in [&u, &v] {
        if part.margin < T::zero() || part.initial_margin < T::zero() {
            return Err(Error::DominanceViolated {
                margin: part.margin.min(part.initial_margin).to_f64_lossy(),
                r: part.worst_r.to_f64_lossy(),
                t: part.worst_t.to_f64_lossy(),
            });
        }
    }
    Ok(DominanceReport { u, v, states_checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_grid;
    use proptest::prelude::*;

    #[test]
    fn c2_min_examples() {
        assert_eq!(c2_min(2, 1.0, 1.0), 41.0);
        assert_eq!(c2_min(3, 1.0, 0.5), 37.0);
        assert_eq!(c2_sharp(2, 1.0, 1.0), 24.0);
        assert_eq!(c2_sharp(3, 1.0, 0.25), 12.0);
    }

    #[test]
    fn comparison_value_examples() {
        let p = ComparisonParams { c1: 1.0f64, c2: 41.0, m: 1.0, horizon: 2.0, radius: 1.0, dim: 2 };
        assert!((comparison_value(0.0, 1.0, &p).unwrap() - 1.0 / 42.0).abs() < 1e-15);
        assert!((comparison_value(1.0, 1.5, &p).unwrap() - 1.0 / (41.0 * 0.5)).abs() < 1e-15);
        let near = comparison_value(0.0, 2.0 - 1e-12, &p).unwrap();
        assert!((near - 1.0).abs() < 1e-9);
        assert_eq!(comparison_value(0.0, 2.0, &p).unwrap_err(), Error::BadTime(2.0));
        assert!(supersolution_residual(0.5, 3.0, &p).is_err());
    }

    #[test]
    fn laplacian_h_at_origin() {
        for n in 1..5 {
            for &r in &[0.5, 1.0, 2.0] {
                assert_eq!(laplacian_h(0.0, r, n), -4.0 * n as f64 * r * r);
            }
        }
    }

    #[test]
    fn laplacian_h_matches_finite_differences() {
        let (radius, n) = (1.3, 3);
        for &r in &[0.2, 0.7, 1.1] {
            let e = 1e-4;
            let hp = |x: f64| h(x, radius);
            let d2 = (hp(r + e) - 2.0 * hp(r) + hp(r - e)) / (e * e);
            let d1 = (hp(r + e) - hp(r - e)) / (2.0 * e);
            let lap = d2 + (n as f64 - 1.0) / r * d1;
            assert!((lap - laplacian_h(r, radius, n)).abs() < 1e-5);
            assert!((d1 * d1 - grad_h_sq(r, radius)).abs() < 1e-6);
        }
    }

    #[test]
    fn residual_matches_finite_differences() {
        let p = ComparisonParams { c1: 2.0, c2: 30.0, m: 0.7, horizon: 1.0, radius: 1.0, dim: 3 };
        let z = |r: f64, t: f64| comparison_value(r, t, &p).unwrap();
        for &(r, t) in &[(0.3, 0.2), (0.8, 0.9), (0.95, 0.5)] {
            let e = 1e-4;
            let zt = (z(r, t + e) - z(r, t - e)) / (2.0 * e);
            let zrr = (z(r + e, t) - 2.0 * z(r, t) + z(r - e, t)) / (e * e);
            let zr = (z(r + e, t) - z(r - e, t)) / (2.0 * e);
            let fd = zt - (zrr + 2.0 / r * zr);
            let exact = supersolution_residual(r, t, &p).unwrap();
            assert!((fd - exact).abs() < 1e-5 * exact.abs().max(1.0), "{fd} vs {exact}");
        }
    }

    #[test]
    fn below_sharp_threshold_residual_turns_negative() {
        let (n, radius, m) = (2, 1.0, 1.0);
        let c2 = c2_sharp(n, radius, m) - 2.0;
        let p = ComparisonParams { c1: 1.0, c2, m, horizon: 1.0, radius, dim: n };
        let res = supersolution_residual(0.999, 1.0 - 1e-9, &p).unwrap();
        assert!(res < 0.0, "{res}");
    }

    #[test]
    fn dominance_scales_with_c1_and_fails_at_zero() {
        let grid = make_grid(1.0f64, 21).unwrap();
        let state = FieldState {
            t: 0.0,
            u: grid.nodes.iter().map(|r| 0.5 + 0.5 * r * r).collect(),
            v: grid.nodes.iter().map(|r| 0.5 + 0.5 * r * r).collect(),
        };
        let later = FieldState { t: 0.05, u: state.u.iter().map(|x| x * 1.5).collect(), v: state.v.clone() };
        let states = [&state, &later];
        let input = DominanceInput { t_hat: 0.1f64, m_u: 0.5, m_v: 0.5, c_u: 2.0, c_v: 2.0, a: 0.5 };
        let base = dominance_check(&states, &grid, 2, &input, C1Strategy::Auto).unwrap();
        assert!(base.margin() >= 0.0);
        let big = dominance_check(&states, &grid, 2, &input, C1Strategy::Scaled(10.0)).unwrap();
        assert!((big.u.ratio / base.u.ratio - 10.0).abs() < 1e-9);
        assert!(big.margin() > base.margin());
        assert!(matches!(
            dominance_check(&states, &grid, 2, &input, C1Strategy::Fixed(0.0)),
            Err(Error::DominanceViolated { .. })
        ));
    }

    proptest! {
        #[test]
        fn residual_nonnegative_at_c2_min(
            n in 1usize..5, radius in 0.2f64..3.0, m in 0.05f64..4.0,
            s in 0.0f64..1.0, tau in 1e-12f64..1.0,
        ) {
            let p = ComparisonParams::with_min_c2(1.0, m, 1.0, radius, n);
            let res = supersolution_residual(s * radius, 1.0 - tau, &p).unwrap();
            prop_assert!(res >= 0.0);
        }

        #[test]
        fn comparison_value_monotone(r in 0.0f64..1.0, dr in 0.0f64..0.5, t in 0.0f64..0.9, dt in 0.0f64..0.09, m in 0.1f64..3.0) {
            let p = ComparisonParams::with_min_c2(1.0, m, 1.0, 1.0, 2);
            let r2 = (r + dr).min(1.0);
            prop_assert!(comparison_value(r2, t, &p).unwrap() >= comparison_value(r, t, &p).unwrap());
            prop_assert!(comparison_value(r, t + dt, &p).unwrap() >= comparison_value(r, t, &p).unwrap());
        }

        #[test]
        fn interior_envelope_bound(a in 0.0f64..0.95, t in 0.0f64..0.999, m in 0.1f64..3.0, c1 in 0.1f64..10.0) {
            let p = ComparisonParams::with_min_c2(c1, m, 1.0, 1.0, 3);
            let env = c1 * (1.0 - a * a).powf(-2.0 * m);
            for k in 0..=10 {
                let r = a * k as f64 / 10.0;
                prop_assert!(comparison_value(r, t, &p).unwrap() <= env * (1.0 + 1e-12));
            }
        }
    }
}
