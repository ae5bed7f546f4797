//! Explicit radial solver for the coupled system.
//!
//! Forward Euler in time, second-order central differences in `r`, and a
//! ghost node at `r = R` closing the nonlinear Neumann condition. The step
//! size is the smaller of the diffusive limit `cfl·dr²` and a growth cap on
//! the relative change of `max(u, v)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{
    flux_argument, make_grid, validate_initial_data, FieldState, FluxFamily, ProblemParams,
    RadialGrid,
};
use crate::real::Real;

/// How the boundary condition is closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling<T> {
    /// The nonlinear coupled fluxes of the problem.
    Coupled,
    /// Both components decouple with the constant flux `∂w/∂η = flux`.
    /// The stop threshold is ignored; runs end at `t_end`.
    LinearNeumann { flux: T },
}

/// Default stop threshold on the flux exponent argument for each family.
///
/// The exponential families are stopped well below the `exp` guard because
/// the growth-capped step collapses to the floor long before the argument
/// reaches several hundred.
pub fn default_u_stop(flux: FluxFamily) -> f64 {
    match flux {
        FluxFamily::ExpPower => 25.0,
        FluxFamily::Power => 600.0,
        FluxFamily::ExpLinear => 4.5,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    pub nodes: usize,
    pub cfl: T,
    pub growth_cap: T,
    pub u_stop: T,
    pub t_end: Option<T>,
    pub record_every: usize,
    pub interior_radius: T,
    pub coupling: Coupling<T>,
    /// Hard cap on the number of time steps.
    pub max_steps: usize,
    /// Keep a full nodal state every this many recorded samples (0 = never).
    pub snapshot_every: usize,
}

impl<T: Real> SolverConfig<T> {
    /// Defaults for a problem: 201 nodes, cfl 0.4, growth cap 0.1,
    /// the family stop threshold and `a = R/2`.
    pub fn for_params(params: &ProblemParams<T>) -> Self {
        SolverConfig {
            nodes: 201,
            cfl: T::of(0.4),
            growth_cap: T::of(0.1),
            u_stop: T::of(default_u_stop(params.flux)),
            t_end: None,
            record_every: 1,
            interior_radius: params.radius * T::of(0.5),
            coupling: Coupling::Coupled,
            max_steps: 20_000_000,
            snapshot_every: 10,
        }
    }

    pub fn validate(&self, params: &ProblemParams<T>) -> Result<()> {
        let radius = params.radius;
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.cfl > T::zero() && self.cfl <= T::of(0.5)) {
            return bad(format!("cfl must lie in (0, 0.5], got {}", self.cfl));
        }
        if !(self.growth_cap > T::zero() && self.growth_cap <= T::of(0.5)) {
            return bad(format!("growth_cap must lie in (0, 0.5], got {}", self.growth_cap));
        }
        // the power flux is the argument itself, so only the exp families need the guard
        let cap = match params.flux {
            FluxFamily::Power => T::exp_guard().exp(),
            FluxFamily::ExpPower | FluxFamily::ExpLinear => T::exp_guard(),
        };
        if !(self.u_stop > T::zero() && self.u_stop < cap) {
            return bad(format!("u_stop must lie in (0, {cap:e}), got {}", self.u_stop));
        }
        if let Some(t_end) = self.t_end {
            if !(t_end > T::zero()) {
                return bad(format!("t_end must be positive, got {t_end}"));
            }
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        if !(self.interior_radius > T::zero() && self.interior_radius < radius) {
            return Err(Error::BadRadius {
                a: self.interior_radius.to_f64_lossy(),
                radius: radius.to_f64_lossy(),
            });
        }
        if let Coupling::LinearNeumann { .. } = self.coupling {
            if self.t_end.is_none() {
                return bad("linear Neumann mode needs t_end".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    BlowupThreshold,
    TimeLimit,
    StepUnderflow,
    StepLimit,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::BlowupThreshold => "blowup_threshold",
            StopReason::TimeLimit => "time_limit",
            StopReason::StepUnderflow => "step_underflow",
            StopReason::StepLimit => "step_limit",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StopInfo<T> {
    pub reason: StopReason,
    pub t_stop: T,
    pub last_state: FieldState<T>,
    /// `u(R)^q` (or `q·u(R)`) at the stop.
    pub arg_u: T,
    /// `v(R)^p` (or `p·v(R)`) at the stop.
    pub arg_v: T,
    pub steps: usize,
    /// Set when the stop came from a non-finite update rather than the threshold.
    pub numerical_guard: bool,
}

/// One recorded step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub t: T,
    pub dt: T,
    pub max_u: T,
    pub max_v: T,
    pub argmax_u: usize,
    pub argmax_v: usize,
    pub sup_u_interior: T,
    pub sup_v_interior: T,
    /// `g(u(R, t))`, infinite if it overflows.
    pub flux_u: T,
    /// `f(v(R, t))`, infinite if it overflows.
    pub flux_v: T,
    /// Smallest forward nodal difference of `u` along `r`.
    pub min_diff_u: T,
    pub min_diff_v: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub grid: RadialGrid<T>,
    /// Last node with `r <= a`.
    pub interior_index: usize,
    pub samples: Vec<Sample<T>>,
    /// Decimated full states, starting with the initial data.
    pub snapshots: Vec<FieldState<T>>,
    pub stop: StopInfo<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn times(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn max_u(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.max_u).collect()
    }

    pub fn max_v(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.max_v).collect()
    }

    /// Snapshots plus the final state, in time order.
    pub fn states(&self) -> Vec<&FieldState<T>> {
        let mut out: Vec<&FieldState<T>> = self.snapshots.iter().collect();
        if out.last().map(|s| s.t) != Some(self.stop.last_state.t) {
            out.push(&self.stop.last_state);
        }
        out
    }
}

/// Radial Laplacian `w_rr + (n-1)/r w_r` at every node. The last node uses
/// `ghost` as its outer neighbour; the origin uses the symmetric limit
/// `2n(w_1 - w_0)/dr²`.
pub fn radial_laplacian<T: Real>(field: &[T], ghost: T, grid: &RadialGrid<T>, n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); field.len()];
    radial_laplacian_into(field, ghost, grid, n, &mut out);
    out
}

fn radial_laplacian_into<T: Real>(field: &[T], ghost: T, grid: &RadialGrid<T>, n: usize, out: &mut [T]) {
    let len = field.len();
    let dr = grid.dr;
    let inv_dr2 = T::one() / (dr * dr);
    let half_inv_dr = T::of(0.5) / dr;
    let nm1 = T::of_usize(n) - T::one();
    out[0] = T::of_usize(2 * n) * (field[1] - field[0]) * inv_dr2;
    for i in 1..len {
        let right = if i + 1 < len { field[i + 1] } else { ghost };
        let left = field[i - 1];
        let c = field[i];
        out[i] = (right - T::of(2.0) * c + left) * inv_dr2 + nm1 / grid.nodes[i] * (right - left) * half_inv_dr;
    }
}

/// Ghost values `(ghost_u, ghost_v)` realising the centred Neumann
/// condition `(ghost - w_{N-2}) / (2dr) = flux`.
pub fn apply_neumann<T: Real>(state: &FieldState<T>, params: &ProblemParams<T>, grid: &RadialGrid<T>) -> Result<(T, T)> {
    let last = grid.last();
    let two_dr = T::of(2.0) * grid.dr;
    let ghost_u = state.u[last - 1] + two_dr * params.flux_for_u(state.v[last])?;
    let ghost_v = state.v[last - 1] + two_dr * params.flux_for_v(state.u[last])?;
    Ok((ghost_u, ghost_v))
}

/// Step size from the diffusive limit and the growth cap.
pub fn adapt_dt<T: Real>(state: &FieldState<T>, config: &SolverConfig<T>, grid: &RadialGrid<T>, rates: (&[T], &[T])) -> Result<T> {
    let dr2 = grid.dr * grid.dr;
    let diffusive = config.cfl * dr2;
    let max_rate = rates.0.iter().chain(rates.1.iter()).fold(T::zero(), |m, &r| m.max(r.abs()));
    let max_field = state.u.iter().chain(state.v.iter()).fold(T::zero(), |m, &w| m.max(w));
    let dt = if max_rate > T::zero() {
        diffusive.min(config.growth_cap * (T::one() + max_field) / max_rate)
    } else {
        diffusive
    };
    let floor = T::step_floor() * dr2;
    if !(dt >= floor) {
        return Err(Error::StepUnderflow { dt: dt.to_f64_lossy(), floor: floor.to_f64_lossy() });
    }
    Ok(dt)
}

struct Workspace<T> {
    rate_u: Vec<T>,
    rate_v: Vec<T>,
}

fn ghosts<T: Real>(
    state: &FieldState<T>,
    params: &ProblemParams<T>,
    grid: &RadialGrid<T>,
    coupling: Coupling<T>,
) -> Result<(T, T)> {
    match coupling {
        Coupling::Coupled => apply_neumann(state, params, grid),
        Coupling::LinearNeumann { flux } => {
            let last = grid.last();
            let two_dr = T::of(2.0) * grid.dr;
            Ok((state.u[last - 1] + two_dr * flux, state.v[last - 1] + two_dr * flux))
        }
    }
}

fn fill_rates<T: Real>(
    state: &FieldState<T>,
    params: &ProblemParams<T>,
    grid: &RadialGrid<T>,
    coupling: Coupling<T>,
    ws: &mut Workspace<T>,
) -> Result<()> {
    let (gu, gv) = ghosts(state, params, grid, coupling)?;
    radial_laplacian_into(&state.u, gu, grid, params.dim, &mut ws.rate_u);
    radial_laplacian_into(&state.v, gv, grid, params.dim, &mut ws.rate_v);
    Ok(())
}

fn euler_update<T: Real>(state: &FieldState<T>, dt: T, ws: &Workspace<T>) -> Result<FieldState<T>> {
    let u: Vec<T> = state.u.iter().zip(&ws.rate_u).map(|(&w, &r)| w + dt * r).collect();
    let v: Vec<T> = state.v.iter().zip(&ws.rate_v).map(|(&w, &r)| w + dt * r).collect();
    let next = FieldState { t: state.t + dt, u, v };
    if !next.is_finite() {
        return Err(Error::NumericalBlowupGuard { t: state.t.to_f64_lossy() });
    }
    Ok(next)
}

fn clip_to_end<T: Real>(dt: T, t: T, t_end: Option<T>) -> T {
    match t_end {
        Some(end) if t + dt > end => end - t,
        _ => dt,
    }
}

/// One forward Euler step with the adapted step size.
pub fn step<T: Real>(
    state: &FieldState<T>,
    params: &ProblemParams<T>,
    grid: &RadialGrid<T>,
    config: &SolverConfig<T>,
) -> Result<FieldState<T>> {
    let mut ws = Workspace { rate_u: vec![T::zero(); grid.len()], rate_v: vec![T::zero(); grid.len()] };
    fill_rates(state, params, grid, config.coupling, &mut ws)?;
    let dt = adapt_dt(state, config, grid, (&ws.rate_u, &ws.rate_v))?;
    euler_update(state, clip_to_end(dt, state.t, config.t_end), &ws)
}

fn arg_max_last<T: Real>(w: &[T]) -> (usize, T) {
    // ties resolve to the outermost node
    w.iter()
        .copied()
        .enumerate()
        .fold((0, T::neg_infinity()), |acc, (i, x)| if x >= acc.1 { (i, x) } else { acc })
}

fn min_forward_diff<T: Real>(w: &[T]) -> T {
    w.windows(2).fold(T::infinity(), |m, pair| m.min(pair[1] - pair[0]))
}

fn sample_of<T: Real>(state: &FieldState<T>, dt: T, params: &ProblemParams<T>, interior: usize) -> Sample<T> {
    let last = state.u.len() - 1;
    let (argmax_u, max_u) = arg_max_last(&state.u);
    let (argmax_v, max_v) = arg_max_last(&state.v);
    let sup = |w: &[T]| w[..=interior].iter().fold(T::neg_infinity(), |m, &x| m.max(x));
    Sample {
        t: state.t,
        dt,
        max_u,
        max_v,
        argmax_u,
        argmax_v,
        sup_u_interior: sup(&state.u),
        sup_v_interior: sup(&state.v),
        flux_u: params.flux_for_v(state.u[last]).unwrap_or(T::infinity()),
        flux_v: params.flux_for_u(state.v[last]).unwrap_or(T::infinity()),
        min_diff_u: min_forward_diff(&state.u),
        min_diff_v: min_forward_diff(&state.v),
    }
}

fn stop_arguments<T: Real>(state: &FieldState<T>, params: &ProblemParams<T>) -> (T, T) {
    let last = state.u.len() - 1;
    (
        flux_argument(params.flux, state.u[last], params.q),
        flux_argument(params.flux, state.v[last], params.p),
    )
}

/// Integrates from the initial data until the stop threshold, `t_end`, step
/// underflow or the step cap.
pub fn run<T: Real>(params: &ProblemParams<T>, config: &SolverConfig<T>) -> Result<Trajectory<T>> {
    params.validate()?;
    config.validate(params)?;
    let grid = make_grid(params.radius, config.nodes)?;
    let report = validate_initial_data(params, &grid)?;
    if let Some(bad) = report.first_failure() {
        return Err(Error::InvalidInitialData(format!(
            "condition {} fails at node {} (value {:e})",
            bad.name, bad.worst_node, bad.worst_value
        )));
    }
    let (u0, v0) = params.initial.evaluate(&grid)?;
    run_from(params, config, &grid, FieldState { t: T::zero(), u: u0, v: v0 })
}

/// Same as [`run`] but from an arbitrary state and without the admissibility check.
pub fn run_from<T: Real>(
    params: &ProblemParams<T>,
    config: &SolverConfig<T>,
    grid: &RadialGrid<T>,
    initial: FieldState<T>,
) -> Result<Trajectory<T>> {
    config.validate(params)?;
    if initial.u.len() != grid.len() || initial.v.len() != grid.len() {
        return Err(Error::InvalidInitialData("state length does not match the grid".into()));
    }
    let interior = grid.index_at_or_below(config.interior_radius);
    let coupled = matches!(config.coupling, Coupling::Coupled);
    let mut ws = Workspace { rate_u: vec![T::zero(); grid.len()], rate_v: vec![T::zero(); grid.len()] };

    let mut samples = vec![sample_of(&initial, T::zero(), params, interior)];
    let mut snapshots = if config.snapshot_every > 0 { vec![initial.clone()] } else { Vec::new() };
    let mut state = initial;
    let mut steps = 0usize;
    let mut last_dt = T::zero();
    let mut recorded_last = true;
    let mut numerical_guard = false;

    let reason = loop {
        let (arg_u, arg_v) = stop_arguments(&state, params);
        if coupled && arg_u.max(arg_v) > config.u_stop {
            break StopReason::BlowupThreshold;
        }
        if let Some(end) = config.t_end {
            if state.t >= end {
                break StopReason::TimeLimit;
            }
        }
        if steps >= config.max_steps {
            break StopReason::StepLimit;
        }
        if let Err(e) = fill_rates(&state, params, grid, config.coupling, &mut ws) {
            match e {
                // only reachable with a threshold close to the guard
                Error::FluxOverflow { .. } => break StopReason::BlowupThreshold,
                other => return Err(other),
            }
        }
        let dt = match adapt_dt(&state, config, grid, (&ws.rate_u, &ws.rate_v)) {
            Ok(dt) => clip_to_end(dt, state.t, config.t_end),
            Err(Error::StepUnderflow { .. }) => break StopReason::StepUnderflow,
            Err(other) => return Err(other),
        };
        let next = match euler_update(&state, dt, &ws) {
            Ok(next) => next,
            Err(Error::NumericalBlowupGuard { .. }) => {
                numerical_guard = true;
                break StopReason::BlowupThreshold;
            }
            Err(other) => return Err(other),
        };
        if next.t <= state.t {
            // time no longer advances in floating point
            break StopReason::StepUnderflow;
        }
        state = next;
        last_dt = dt;
        steps += 1;
        recorded_last = steps.is_multiple_of(config.record_every);
        if recorded_last {
            samples.push(sample_of(&state, dt, params, interior));
            if config.snapshot_every > 0 && (samples.len() - 1) % config.snapshot_every == 0 {
                snapshots.push(state.clone());
            }
        }
    };

    if !recorded_last {
        samples.push(sample_of(&state, last_dt, params, interior));
    }
    let (arg_u, arg_v) = stop_arguments(&state, params);
    Ok(Trajectory {
        grid: grid.clone(),
        interior_index: interior,
        samples,
        snapshots,
        stop: StopInfo { reason, t_stop: state.t, last_state: state, arg_u, arg_v, steps, numerical_guard },
    })
}
