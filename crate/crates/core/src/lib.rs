//! Numerical laboratory for the coupled heat system on a ball with
//! exponential nonlinear Neumann fluxes:
//!
//! ```text
//! u_t = Δu,  v_t = Δv                  in B_R × (0, T)
//! ∂u/∂η = exp(v^p),  ∂v/∂η = exp(u^q)  on ∂B_R × (0, T)
//! ```
//!
//! The crate simulates radial solutions up to blow-up and checks the
//! quantitative statements around them: upper rate estimates, monotonicity,
//! boundary-only blow-up, an explicit supersolution, the ODE comparison
//! system and heat-kernel layer potentials.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! `*F64` aliases below fix the usual choice.

// `!(x > 0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod kernel;
pub mod model;
pub mod ode;
pub mod quadrature;
pub mod real;
pub mod solver;
pub mod supersolution;

pub use error::{Error, Result};
pub use model::{
    boundary_flux, flux_argument, make_grid, rate_exponents, validate_initial_data, FieldState, FluxFamily,
    InitialDataSpec, ProblemParams, RadialGrid, ValidationReport,
};
pub use real::Real;
pub use solver::{run, Coupling, Sample, SolverConfig, StopInfo, StopReason, Trajectory};

/// Default scalar.
pub type Scalar = f64;

pub type ProblemParamsF64 = ProblemParams<f64>;
pub type ProblemParamsF32 = ProblemParams<f32>;
pub type SolverConfigF64 = SolverConfig<f64>;
pub type SolverConfigF32 = SolverConfig<f32>;
pub type TrajectoryF64 = Trajectory<f64>;
pub type TrajectoryF32 = Trajectory<f32>;
pub type FieldStateF64 = FieldState<f64>;
pub type BlowupReportF64 = analysis::BlowupReport<f64>;
pub type OdeParamsF64 = ode::OdeParams<f64>;
pub type ComparisonParamsF64 = supersolution::ComparisonParams<f64>;
pub type SphereQuadratureF64 = kernel::SphereQuadrature<f64>;
