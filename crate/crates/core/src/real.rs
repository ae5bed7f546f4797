use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst};

/// Floating-point scalar the solver and the oracles are generic over.
///
/// Besides the usual `Float` surface it carries the two precision-dependent
/// limits the blow-up machinery needs: the largest admissible argument of
/// `exp` in a flux evaluation and the relative step floor below which the
/// time integrator declares step underflow.
pub trait Real: Float + FloatConst + Debug + Display + LowerExp + Default + Send + Sync + 'static {
    /// Largest argument passed to `exp` by the exponential flux families.
    fn exp_guard() -> Self;

    /// Step-size floor, relative to `dr^2`.
    fn step_floor() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("literal representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("integer representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn exp_guard() -> Self {
        700.0
    }

    #[inline]
    fn step_floor() -> Self {
        1e-16
    }
}

impl Real for f32 {
    #[inline]
    fn exp_guard() -> Self {
        80.0
    }

    #[inline]
    fn step_floor() -> Self {
        1e-7
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guards_stay_below_overflow() {
        assert!(f64::exp_guard().exp().is_finite());
        assert!(f32::exp_guard().exp().is_finite());
        assert!(f64::step_floor() >= f64::EPSILON / 4.0);
    }
}
