use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate exponents: p*q = {pq} must exceed 1")]
    DegenerateExponents { pq: f64 },

    #[error("flux overflow: exponent argument {argument} exceeds guard {guard}")]
    FluxOverflow { argument: f64, guard: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid initial data: {0}")]
    InvalidInitialData(String),

    #[error("grid too coarse: {nodes} nodes, at least {min} required")]
    GridTooCoarse { nodes: usize, min: usize },

    #[error("step underflow: dt = {dt:e} below floor {floor:e}")]
    StepUnderflow { dt: f64, floor: f64 },

    #[error("non-finite value produced at t = {t}")]
    NumericalBlowupGuard { t: f64 },

    #[error("fit failed: {0}")]
    FitFailed(String),

    #[error("time must be positive and before the horizon, got {0}")]
    BadTime(f64),

    #[error("empty or reversed time window [{t1}, {t}]")]
    BadWindow { t1: f64, t: f64 },

    #[error("approach distance {distance:e} below quadrature resolution {scale:e}")]
    ResolutionError { distance: f64, scale: f64 },

    #[error("interior radius {a} must lie in (0, {radius})")]
    BadRadius { a: f64, radius: f64 },

    #[error("comparison function violated: margin {margin:e} at r = {r}, t = {t}")]
    DominanceViolated { margin: f64, r: f64, t: f64 },

    #[error("ode system too stiff: only {samples} samples before overflow")]
    ParamsTooStiff { samples: usize },

    #[error("ode solution diverged at t = {t} before the horizon {horizon}")]
    EarlyBlowup { t: f64, horizon: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
