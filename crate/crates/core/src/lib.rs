//! Fractional variational mechanics for Lagrangians linear in velocities.
//!
//! * [`specfun`]: Gamma, Beta and Grünwald–Letnikov weights.
//! * [`fracops`]: left/right Riemann–Liouville integrals and derivatives.
//! * [`lagrangian`]: fractional Lagrangians and their Euler–Lagrange residuals.
//! * [`solutions`]: closed-form solution families and their classical limit.
//! * [`varsolve`]: discrete Euler–Lagrange systems solved with pinned values.

pub mod error;
pub mod fracops;
pub mod lagrangian;
pub mod solutions;
pub mod specfun;
pub mod varsolve;

pub use error::{FracError, Result};
pub use fracops::{
    AtomSum, FnRepr, FracOrder, GridFn, Interval, Operator, PowerAtom, Side, UniformGrid,
};
