use super::atoms::{AtomSum, PowerAtom, Side};
use super::grid::{GridFn, UniformGrid};
use super::numeric::{gl_left_derivative, mirrored, product_trapezoid_left};
use super::repr::FnRepr;
use super::FracOrder;
use crate::error::{FracError, Result};

/// The four RL operators of order `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    LeftIntegral,
    RightIntegral,
    LeftDerivative,
    RightDerivative,
}

impl Operator {
    pub const ALL: [Operator; 4] = [
        Operator::LeftIntegral,
        Operator::RightIntegral,
        Operator::LeftDerivative,
        Operator::RightDerivative,
    ];

    pub fn anchor(self) -> Side {
        match self {
            Operator::LeftIntegral | Operator::LeftDerivative => Side::Left,
            Operator::RightIntegral | Operator::RightDerivative => Side::Right,
        }
    }

    pub fn is_derivative(self) -> bool {
        matches!(self, Operator::LeftDerivative | Operator::RightDerivative)
    }

    /// Signed order for the power rule: `alpha` for derivatives, `-alpha` for integrals.
    pub fn power(self, alpha: FracOrder) -> f64 {
        if self.is_derivative() {
            alpha.value()
        } else {
            -alpha.value()
        }
    }

    pub fn mirror(self) -> Operator {
        match self {
            Operator::LeftIntegral => Operator::RightIntegral,
            Operator::RightIntegral => Operator::LeftIntegral,
            Operator::LeftDerivative => Operator::RightDerivative,
            Operator::RightDerivative => Operator::LeftDerivative,
        }
    }
}

/// Order-one operator on atoms anchored at the other endpoint, which stays in closed form:
/// `-d/dt` (right) or `d/dt` (left) differentiate locally, and the unit-order integrals
/// are `(L^{nu+1} - base^{nu+1}) / (nu+1)` with `L = b - a`.
pub(crate) fn cross_sided_unit_order(op: Operator, atoms: &AtomSum) -> Result<AtomSum> {
    let iv = atoms.interval();
    let mut out = Vec::new();
    for t in atoms.terms() {
        debug_assert_ne!(t.side, op.anchor());
        if op.is_derivative() {
            let d = super::atoms::power_rule_left(
                PowerAtom {
                    side: Side::Left,
                    ..*t
                },
                1.0,
            )?;
            out.push(PowerAtom {
                side: t.side,
                coeff: -d.coeff,
                exponent: d.exponent,
            });
        } else {
            let e = t.exponent + 1.0;
            out.push(PowerAtom {
                side: t.side,
                coeff: t.coeff * iv.length().powf(e) / e,
                exponent: 0.0,
            });
            out.push(PowerAtom {
                side: t.side,
                coeff: -t.coeff / e,
                exponent: e,
            });
        }
    }
    Ok(AtomSum::new(iv, out))
}

/// Grid scheme for `op` on samples. The anchoring endpoint must not be masked.
pub fn apply_numeric(op: Operator, f: &GridFn, alpha: FracOrder) -> Result<GridFn> {
    let mask = f.mask();
    let anchor_masked = match op.anchor() {
        Side::Left => mask.left,
        Side::Right => mask.right,
    };
    if anchor_masked {
        return Err(FracError::SingularAnchor);
    }
    let h = f.grid().step();
    let scheme = |v: &[f64]| {
        if op.is_derivative() {
            gl_left_derivative(v, alpha, h)
        } else {
            product_trapezoid_left(v, alpha, h)
        }
    };
    let values = match op.anchor() {
        Side::Left => scheme(f.values()),
        Side::Right => mirrored(f.values(), scheme),
    };
    let mut out_mask = mask;
    if op.is_derivative() {
        match op.anchor() {
            Side::Left => out_mask.left = true,
            Side::Right => out_mask.right = true,
        }
    }
    GridFn::new(*f.grid(), values, out_mask)
}

/// Applies `op` of order `alpha`: same-sided atoms exactly, everything else on `grid`.
pub fn apply(op: Operator, f: &FnRepr, alpha: FracOrder, grid: &UniformGrid) -> Result<FnRepr> {
    if f.interval() != grid.interval() {
        return Err(FracError::GridMismatch(
            "function and grid live on different intervals".into(),
        ));
    }
    let side = op.anchor();
    let (analytic, sampled) = f.parts();
    let mut exact = AtomSum::zero(grid.interval());
    let mut numeric: Option<GridFn> = None;
    let mut push = |g: GridFn| -> Result<()> {
        numeric = Some(match numeric.take() {
            None => g,
            Some(acc) => acc.axpy(1.0, &g)?,
        });
        Ok(())
    };
    if let Some(atoms) = analytic {
        exact = atoms.side_part(side).power_rule(side, op.power(alpha))?;
        let cross = atoms.side_part(side.opposite());
        if !cross.is_zero() {
            if alpha.is_integer() {
                exact = exact.add(&cross_sided_unit_order(op, &cross)?)?;
            } else {
                push(apply_numeric(op, &cross.sample(grid)?, alpha)?)?;
            }
        }
    }
    if let Some(g) = sampled {
        g.grid().ensure_same(grid)?;
        push(apply_numeric(op, g, alpha)?)?;
    }
    Ok(FnRepr::from_parts(exact, numeric))
}

/// `aD_t^{-alpha} f`.
pub fn left_rl_integral(f: &FnRepr, alpha: FracOrder, grid: &UniformGrid) -> Result<FnRepr> {
    apply(Operator::LeftIntegral, f, alpha, grid)
}

/// `tD_b^{-alpha} f`.
pub fn right_rl_integral(f: &FnRepr, alpha: FracOrder, grid: &UniformGrid) -> Result<FnRepr> {
    apply(Operator::RightIntegral, f, alpha, grid)
}

/// `aD_t^alpha f`.
pub fn left_rl_derivative(f: &FnRepr, alpha: FracOrder, grid: &UniformGrid) -> Result<FnRepr> {
    apply(Operator::LeftDerivative, f, alpha, grid)
}

/// `tD_b^alpha f`.
pub fn right_rl_derivative(f: &FnRepr, alpha: FracOrder, grid: &UniformGrid) -> Result<FnRepr> {
    apply(Operator::RightDerivative, f, alpha, grid)
}
