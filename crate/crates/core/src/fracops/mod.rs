//! Left and right Riemann–Liouville fractional integrals and derivatives.
//!
//! Functions are carried as [`FnRepr`]: exact sums of power atoms, grid samples,
//! or both. Same-sided atoms go through the closed-form power rule; everything
//! else is evaluated on the grid (Grünwald–Letnikov for derivatives,
//! product trapezoid with exact kernel moments for integrals).

mod atoms;
mod grid;
mod numeric;
mod ops;
pub mod quad;
mod reference;
mod repr;

pub use atoms::{power_rule_left, power_rule_right, AtomSum, PowerAtom, Side, EXPONENT_TOL};
pub use grid::{
    trimmed_max_abs, trimmed_sup_norm, window, EndpointMask, GridFn, Interval, UniformGrid,
};
pub use numeric::{gl_left_derivative, product_trapezoid_left};
pub use ops::{
    apply, apply_numeric, left_rl_derivative, left_rl_integral, right_rl_derivative,
    right_rl_integral, Operator,
};
pub use reference::{apply_with_quadrature, quadrature_apply};
pub use repr::{sample, FnRepr};

use crate::error::{FracError, Result};

/// Default trimmed-window fraction of the interval length.
pub const DEFAULT_TRIM: f64 = 0.05;

/// Fractional order `alpha` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub const ONE: FracOrder = FracOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(FracError::Order(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = FracError;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}
