//! Problem data: exponents, flux families, the radial grid, nodal states and
//! the admissibility conditions on initial data.
//!
//! The coupled system lives on the ball `B_R` in `R^n`:
//!
//! ```text
//! u_t = Δu,  v_t = Δv                  in B_R × (0, T)
//! ∂u/∂η = f(v),  ∂v/∂η = g(u)          on ∂B_R × (0, T)
//! ```
//!
//! with `f`, `g` chosen by [`FluxFamily`]. Radial symmetry reduces everything
//! to functions of `r = |x|` on `[0, R]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::solver::radial_laplacian;

/// Relative tolerance of the discrete admissibility checks.
pub const TOL_IC: f64 = 1e-10;

/// Fewest radial nodes accepted by [`make_grid`].
pub const MIN_NODES: usize = 16;

/// Boundary nonlinearity pair `(f, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluxFamily {
    /// `f(v) = exp(v^p)`, `g(u) = exp(u^q)`.
    ExpPower,
    /// `f(v) = v^p`, `g(u) = u^q`.
    Power,
    /// `f(v) = exp(p v)`, `g(u) = exp(q u)`.
    ExpLinear,
}

impl FluxFamily {
    pub const ALL: [FluxFamily; 3] = [FluxFamily::ExpPower, FluxFamily::Power, FluxFamily::ExpLinear];

    pub fn name(self) -> &'static str {
        match self {
            FluxFamily::ExpPower => "exp_power",
            FluxFamily::Power => "power",
            FluxFamily::ExpLinear => "exp_linear",
        }
    }

    /// Checks the exponent hypotheses of the family.
    pub fn check_exponents(self, p: f64, q: f64) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        match self {
            FluxFamily::ExpPower | FluxFamily::Power => {
                if !(p > 1.0) {
                    return bad(format!("p>1 required for {}", self.name()));
                }
                if !(q > 1.0) {
                    return bad(format!("q>1 required for {}", self.name()));
                }
                if !(p * q > 1.0) {
                    return bad(format!("pq>1 required for {}", self.name()));
                }
            }
            FluxFamily::ExpLinear => {
                if !(p > 0.0) {
                    return bad("p>0 required for exp_linear".into());
                }
                if !(q > 0.0) {
                    return bad("q>0 required for exp_linear".into());
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FluxFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FluxFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "exp_power" | "exppower" => Ok(FluxFamily::ExpPower),
            "power" => Ok(FluxFamily::Power),
            "exp_linear" | "explinear" => Ok(FluxFamily::ExpLinear),
            other => Err(Error::InvalidParams(format!(
                "unknown flux family '{other}' (expected exp_power, power or exp_linear)"
            ))),
        }
    }
}

/// Radial initial profiles `u0(r)`, `v0(r)`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDataSpec<T> {
    /// `u0 = a_u + b_u r^2`, `v0 = a_v + b_v r^2`.
    QuadraticRadial { a_u: T, b_u: T, a_v: T, b_v: T },
    /// Nodal values on the solver grid.
    Tabulated { u: Vec<T>, v: Vec<T> },
}

impl<T: Real> InitialDataSpec<T> {
    pub fn quadratic(a_u: T, b_u: T, a_v: T, b_v: T) -> Self {
        InitialDataSpec::QuadraticRadial { a_u, b_u, a_v, b_v }
    }

    /// Nodal values on `grid`.
    pub fn evaluate(&self, grid: &RadialGrid<T>) -> Result<(Vec<T>, Vec<T>)> {
        match self {
            InitialDataSpec::QuadraticRadial { a_u, b_u, a_v, b_v } => {
                let u = grid.nodes.iter().map(|&r| *a_u + *b_u * r * r).collect();
                let v = grid.nodes.iter().map(|&r| *a_v + *b_v * r * r).collect();
                Ok((u, v))
            }
            InitialDataSpec::Tabulated { u, v } => {
                if u.len() != grid.len() || v.len() != grid.len() {
                    return Err(Error::InvalidInitialData(format!(
                        "tabulated data has {}/{} values, grid has {} nodes",
                        u.len(),
                        v.len(),
                        grid.len()
                    )));
                }
                Ok((u.clone(), v.clone()))
            }
        }
    }
}

/// Full specification of one problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemParams<T> {
    pub p: T,
    pub q: T,
    pub radius: T,
    pub dim: usize,
    pub flux: FluxFamily,
    pub initial: InitialDataSpec<T>,
}

impl<T: Real> ProblemParams<T> {
    pub fn new(p: T, q: T, radius: T, dim: usize, flux: FluxFamily, initial: InitialDataSpec<T>) -> Result<Self> {
        let params = ProblemParams { p, q, radius, dim, flux, initial };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        self.flux.check_exponents(self.p.to_f64_lossy(), self.q.to_f64_lossy())?;
        if !(self.radius > T::zero()) || !self.radius.is_finite() {
            return Err(Error::InvalidParams(format!("R>0 required, got {}", self.radius)));
        }
        if self.dim < 1 {
            return Err(Error::InvalidParams("n>=1 required".into()));
        }
        Ok(())
    }

    /// Flux entering the Neumann condition of `u`, i.e. `f(v)`.
    pub fn flux_for_u(&self, v_boundary: T) -> Result<T> {
        boundary_flux(self.flux, v_boundary, self.p)
    }

    /// Flux entering the Neumann condition of `v`, i.e. `g(u)`.
    pub fn flux_for_v(&self, u_boundary: T) -> Result<T> {
        boundary_flux(self.flux, u_boundary, self.q)
    }
}

/// `α = (p+1)/(pq-1)`, `β = (q+1)/(pq-1)`.
pub fn rate_exponents<T: Real>(p: T, q: T) -> Result<(T, T)> {
    let denom = p * q - T::one();
    if !(denom > T::zero()) {
        return Err(Error::DegenerateExponents { pq: (p * q).to_f64_lossy() });
    }
    Ok(((p + T::one()) / denom, (q + T::one()) / denom))
}

/// Argument the stop criterion and the overflow guard look at: `w^e` for the
/// power-type families and `e·w` for the exp-linear one.
pub fn flux_argument<T: Real>(flux: FluxFamily, w: T, e: T) -> T {
    match flux {
        FluxFamily::ExpPower | FluxFamily::Power => w.powf(e),
        FluxFamily::ExpLinear => e * w,
    }
}

/// Evaluates the boundary nonlinearity of `flux` at `w` with exponent `e`.
pub fn boundary_flux<T: Real>(flux: FluxFamily, w: T, e: T) -> Result<T> {
    let arg = flux_argument(flux, w, e);
    match flux {
        FluxFamily::Power => {
            if !arg.is_finite() {
                return Err(Error::FluxOverflow { argument: arg.to_f64_lossy(), guard: f64::INFINITY });
            }
            Ok(arg)
        }
        FluxFamily::ExpPower | FluxFamily::ExpLinear => {
            if !(arg < T::exp_guard()) {
                return Err(Error::FluxOverflow {
                    argument: arg.to_f64_lossy(),
                    guard: T::exp_guard().to_f64_lossy(),
                });
            }
            Ok(arg.exp())
        }
    }
}

/// Uniform mesh `r_i = i·dr` on `[0, R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid<T> {
    pub radius: T,
    pub dr: T,
    pub nodes: Vec<T>,
}

impl<T: Real> RadialGrid<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn last(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Index of the outermost node with `r <= a`.
    pub fn index_at_or_below(&self, a: T) -> usize {
        let slack = self.dr * T::of(1e-9);
        self.nodes.iter().rposition(|&r| r <= a + slack).unwrap_or(0)
    }
}

pub fn make_grid<T: Real>(radius: T, nodes: usize) -> Result<RadialGrid<T>> {
    if nodes < MIN_NODES {
        return Err(Error::GridTooCoarse { nodes, min: MIN_NODES });
    }
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::InvalidParams(format!("R>0 required, got {radius}")));
    }
    let dr = radius / T::of_usize(nodes - 1);
    let mut r: Vec<T> = (0..nodes).map(|i| T::of_usize(i) * dr).collect();
    r[nodes - 1] = radius;
    Ok(RadialGrid { radius, dr, nodes: r })
}

/// Nodal values of `(u, v)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<T> {
    pub t: T,
    pub u: Vec<T>,
    pub v: Vec<T>,
}

impl<T: Real> FieldState<T> {
    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.u.iter().chain(self.v.iter()).all(|x| x.is_finite())
    }
}

/// Outcome of one admissibility condition, with the worst node found.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck<T> {
    pub name: &'static str,
    pub passed: bool,
    pub worst_node: usize,
    pub worst_value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T> {
    pub conditions: Vec<ConditionCheck<T>>,
    /// `|u0_r(R) - f(v0(R))|`; logged, not enforced.
    pub compatibility_u: T,
    /// `|v0_r(R) - g(u0(R))|`; logged, not enforced.
    pub compatibility_v: T,
}

impl<T: Real> ValidationReport<T> {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ConditionCheck<T>> {
        self.conditions.iter().find(|c| !c.passed)
    }
}

fn check_nonnegative<T: Real>(name: &str, w: &[T]) -> Result<()> {
    if let Some(i) = w.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidInitialData(format!("{name} is not finite at node {i}")));
    }
    if let Some(i) = w.iter().position(|&x| x < T::zero()) {
        return Err(Error::InvalidInitialData(format!("{name} is negative at node {i}")));
    }
    if w.iter().all(|&x| x == T::zero()) {
        return Err(Error::InvalidInitialData(format!("{name} is identically zero")));
    }
    Ok(())
}

fn monotone_check<T: Real>(name: &'static str, w: &[T], scale: T) -> ConditionCheck<T> {
    let (worst_node, worst_value) = w
        .windows(2)
        .enumerate()
        .map(|(i, pair)| (i, pair[1] - pair[0]))
        .fold((0, T::infinity()), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
    ConditionCheck { name, passed: worst_value >= -T::of(TOL_IC) * scale, worst_node, worst_value }
}

fn subharmonic_check<T: Real>(name: &'static str, w: &[T], grid: &RadialGrid<T>, dim: usize, scale: T) -> ConditionCheck<T> {
    // The boundary node needs a ghost value; extrapolate linearly so that it
    // does not take part in the minimum below.
    let n = w.len();
    let ghost = w[n - 1] + (w[n - 1] - w[n - 2]);
    let lap = radial_laplacian(w, ghost, grid, dim);
    let (worst_node, worst_value) = lap[..n - 1]
        .iter()
        .copied()
        .enumerate()
        .fold((0, T::infinity()), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
    let tol = T::of(TOL_IC) * scale / (grid.dr * grid.dr);
    ConditionCheck { name, passed: worst_value >= -tol, worst_node, worst_value }
}

fn boundary_slope<T: Real>(w: &[T], dr: T) -> T {
    let n = w.len();
    (T::of(3.0) * w[n - 1] - T::of(4.0) * w[n - 2] + w[n - 3]) / (T::of(2.0) * dr)
}

/// Checks radial monotonicity and subharmonicity of the initial data on the
/// grid. Negative, non-finite or identically zero data is an error; the other
/// conditions are reported.
pub fn validate_initial_data<T: Real>(
    params: &ProblemParams<T>,
    grid: &RadialGrid<T>,
) -> Result<ValidationReport<T>> {
    let (u0, v0) = params.initial.evaluate(grid)?;
    check_nonnegative("u0", &u0)?;
    check_nonnegative("v0", &v0)?;

    let scale_u = u0.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let scale_v = v0.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let conditions = vec![
        monotone_check("u0_r >= 0", &u0, scale_u),
        monotone_check("v0_r >= 0", &v0, scale_v),
        subharmonic_check("lap u0 >= 0", &u0, grid, params.dim, scale_u),
        subharmonic_check("lap v0 >= 0", &v0, grid, params.dim, scale_v),
    ];

    let last = grid.last();
    let mismatch = |slope: T, flux: Result<T>| match flux {
        Ok(f) => (slope - f).abs(),
        Err(_) => T::infinity(),
    };
    let compatibility_u = mismatch(boundary_slope(&u0, grid.dr), params.flux_for_u(v0[last]));
    let compatibility_v = mismatch(boundary_slope(&v0, grid.dr), params.flux_for_v(u0[last]));

    Ok(ValidationReport { conditions, compatibility_u, compatibility_v })
}
