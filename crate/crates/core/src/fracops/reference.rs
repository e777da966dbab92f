//! Node-by-node evaluation of operators on atom sums, with cross-sided atoms
//! handled by adaptive quadrature after a substitution that removes the kernel
//! singularity. Much more accurate than the grid schemes; used to build
//! reference solutions, not inside residual checks.

use super::atoms::{AtomSum, PowerAtom, Side};
use super::grid::{EndpointMask, GridFn, UniformGrid};
use super::ops::{cross_sided_unit_order, Operator};
use super::quad::integrate;
use super::repr::FnRepr;
use super::FracOrder;
use crate::error::{FracError, Result};
use crate::specfun::gamma;

const REL_TOL: f64 = 1e-13;
const MAX_PIECES: usize = 2000;

/// `op` applied to `f` at every node of `grid`.
pub fn quadrature_apply(
    op: Operator,
    f: &AtomSum,
    alpha: FracOrder,
    grid: &UniformGrid,
) -> Result<GridFn> {
    if f.interval() != grid.interval() {
        return Err(FracError::GridMismatch(
            "atom sum and grid live on different intervals".into(),
        ));
    }
    let side = op.anchor();
    let same = f
        .side_part(side)
        .power_rule(side, op.power(alpha))?
        .sample(grid)?;
    let cross = f.side_part(side.opposite());
    if cross.is_zero() {
        return Ok(same);
    }
    if alpha.is_integer() {
        return same.axpy(1.0, &cross_sided_unit_order(op, &cross)?.sample(grid)?);
    }
    let cross_vals = match side {
        Side::Right => right_op_on_left_atoms(op.is_derivative(), &cross, alpha.value(), grid)?,
        Side::Left => {
            right_op_on_left_atoms(op.is_derivative(), &cross.mirrored(), alpha.value(), grid)?
                .reversed()
        }
    };
    same.axpy(1.0, &cross_vals)
}

fn right_op_on_left_atoms(
    derivative: bool,
    atoms: &AtomSum,
    alpha: f64,
    grid: &UniformGrid,
) -> Result<GridFn> {
    let iv = grid.interval();
    let (a, b) = (iv.a(), iv.b());
    let n = grid.n_cells();
    let mut values = vec![0.0; n + 1];
    let mut mask = EndpointMask::NONE;
    let g_alpha = gamma(alpha)?;
    let g_alpha1 = gamma(alpha + 1.0)?;
    let g_comp = gamma(1.0 - alpha)?;
    for &PowerAtom {
        coeff: c,
        exponent: nu,
        ..
    } in atoms.terms()
    {
        for (i, value) in values.iter_mut().enumerate() {
            let t = grid.node(i);
            let contrib = if derivative {
                if i == n {
                    mask.right = true;
                    continue;
                }
                if i == 0 {
                    if nu == 0.0 || nu > alpha {
                        -c * alpha * (b - a).powf(nu - alpha) / ((nu - alpha) * g_comp)
                    } else {
                        mask.left = true;
                        continue;
                    }
                } else {
                    // tD_b^alpha g = [g(b)(b-t)^-alpha - int_t^b (tau-t)^-alpha g'(tau) dtau] / Gamma(1-alpha)
                    let boundary = c * (b - a).powf(nu) * (b - t).powf(-alpha);
                    let tail = if nu == 0.0 {
                        0.0
                    } else {
                        let q = 1.0 / (1.0 - alpha);
                        let body = integrate(
                            |u| c * nu * (t - a + (b - t) * u.powf(q)).powf(nu - 1.0),
                            0.0,
                            1.0,
                            0.0,
                            REL_TOL,
                            MAX_PIECES,
                        );
                        (b - t).powf(1.0 - alpha) * q * body
                    };
                    (boundary - tail) / g_comp
                }
            } else if i == n {
                0.0
            } else if i == 0 {
                if alpha + nu > 0.0 {
                    c * (b - a).powf(alpha + nu) / (g_alpha * (alpha + nu))
                } else {
                    mask.left = true;
                    continue;
                }
            } else {
                let q = 1.0 / alpha;
                let body = integrate(
                    |u| c * (t - a + (b - t) * u.powf(q)).powf(nu),
                    0.0,
                    1.0,
                    0.0,
                    REL_TOL,
                    MAX_PIECES,
                );
                (b - t).powf(alpha) / g_alpha1 * body
            };
            *value += contrib;
        }
    }
    if mask.left {
        values[0] = f64::NAN;
    }
    if mask.right {
        values[n] = f64::NAN;
    }
    GridFn::new(*grid, values, mask)
}

/// Like [`super::apply`], but cross-sided atoms go through [`quadrature_apply`]
/// instead of the grid schemes. Sampled parts still use the grid schemes.
pub fn apply_with_quadrature(
    op: Operator,
    f: &FnRepr,
    alpha: FracOrder,
    grid: &UniformGrid,
) -> Result<FnRepr> {
    let (analytic, sampled) = f.parts();
    let side = op.anchor();
    let mut exact = AtomSum::zero(grid.interval());
    let mut numeric: Option<GridFn> = None;
    if let Some(atoms) = analytic {
        exact = atoms.side_part(side).power_rule(side, op.power(alpha))?;
        let cross = atoms.side_part(side.opposite());
        if !cross.is_zero() {
            if alpha.is_integer() {
                exact = exact.add(&cross_sided_unit_order(op, &cross)?)?;
            } else {
                numeric = Some(quadrature_apply(op, &cross, alpha, grid)?);
            }
        }
    }
    if let Some(g) = sampled {
        let part = super::ops::apply_numeric(op, g, alpha)?;
        numeric = Some(match numeric {
            None => part,
            Some(acc) => acc.axpy(1.0, &part)?,
        });
    }
    Ok(FnRepr::from_parts(exact, numeric))
}
