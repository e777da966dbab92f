//! Lagrangians linear in velocities, `L = a_j(q) qdot^j - V(q)`, with affine
//! `a_j(q) = A_jk q^k + b_j` and quadratic `V(q) = q^T M q / 2 + c^T q + d`,
//! and the Euler–Lagrange residuals of their two fractional forms:
//!
//! * left form `L' = a_j(q) aD_t^alpha q^j - V`, residual
//!   `A_jk aD_t^alpha q^j + tD_b^alpha a_k(q) - dV/dq^k`;
//! * right form `L' = -a_j(q) tD_b^alpha q^j - V`, residual
//!   `A_jk tD_b^alpha q^j + aD_t^alpha a_k(q) + dV/dq^k`.

use nalgebra::{DMatrix, DVector};

use crate::error::{FracError, Result};
use crate::fracops::{
    apply, sample, trimmed_max_abs, AtomSum, FnRepr, FracOrder, GridFn, Operator, Side, UniformGrid,
};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearVelocityLagrangian {
    a: DMatrix<f64>,
    b: DVector<f64>,
    m: DMatrix<f64>,
    c: DVector<f64>,
    d: f64,
}

impl LinearVelocityLagrangian {
    /// `m` is symmetrized on construction.
    pub fn new(
        a: DMatrix<f64>,
        b: DVector<f64>,
        m: DMatrix<f64>,
        c: DVector<f64>,
        d: f64,
    ) -> Result<Self> {
        let n = a.nrows();
        if n == 0 {
            return Err(FracError::Dimension {
                expected: 1,
                got: 0,
            });
        }
        for (rows, cols) in [a.shape(), m.shape(), (b.len(), n), (c.len(), n)] {
            if rows != n || cols != n {
                return Err(FracError::Dimension {
                    expected: n,
                    got: if rows != n { rows } else { cols },
                });
            }
        }
        let m = (&m + m.transpose()) * 0.5;
        Ok(Self { a, b, m, c, d })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn velocity_matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn potential_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// `a(q)`.
    pub fn velocity_coeffs(&self, q: &[f64]) -> DVector<f64> {
        &self.a * DVector::from_column_slice(q) + &self.b
    }

    /// `V(q)`.
    pub fn potential(&self, q: &[f64]) -> f64 {
        let q = DVector::from_column_slice(q);
        0.5 * q.dot(&(&self.m * &q)) + self.c.dot(&q) + self.d
    }

    /// `grad V(q) = M q + c`.
    pub fn potential_gradient(&self, q: &[f64]) -> DVector<f64> {
        &self.m * DVector::from_column_slice(q) + &self.c
    }

    fn is_homogeneous_row(&self, k: usize) -> bool {
        self.a.row(k).iter().all(|&x| x == 0.0) && self.b[k] == 0.0
    }
}

/// Gauge-invariant example: `L = qdot^1 q^2 - qdot^2 q^1 - (q^1 - q^2) q^3`.
pub fn example_a_lagrangian() -> LinearVelocityLagrangian {
    let mut a = DMatrix::zeros(3, 3);
    a[(0, 1)] = 1.0;
    a[(1, 0)] = -1.0;
    let mut m = DMatrix::zeros(3, 3);
    m[(0, 2)] = 1.0;
    m[(2, 0)] = 1.0;
    m[(1, 2)] = -1.0;
    m[(2, 1)] = -1.0;
    LinearVelocityLagrangian::new(a, DVector::zeros(3), m, DVector::zeros(3), 0.0)
        .expect("static shape")
}

/// Second-class constrained example: `L = qdot^1 q^2 + qdot^3 q^4 - V`,
/// `V = -((q^4)^2 - 2 q^2 q^3) / 2`.
pub fn example_b_lagrangian() -> LinearVelocityLagrangian {
    let mut a = DMatrix::zeros(4, 4);
    a[(0, 1)] = 1.0;
    a[(2, 3)] = 1.0;
    let mut m = DMatrix::zeros(4, 4);
    m[(3, 3)] = -1.0;
    m[(1, 2)] = 1.0;
    m[(2, 1)] = 1.0;
    LinearVelocityLagrangian::new(a, DVector::zeros(4), m, DVector::zeros(4), 0.0)
        .expect("static shape")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormVariant {
    /// Velocities replaced by `aD_t^alpha`.
    LeftForm,
    /// Velocities replaced by `-tD_b^alpha`.
    RightForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalForm {
    pub variant: FormVariant,
    pub alpha: FracOrder,
}

impl FractionalForm {
    pub fn left(alpha: FracOrder) -> Self {
        Self {
            variant: FormVariant::LeftForm,
            alpha,
        }
    }

    pub fn right(alpha: FracOrder) -> Self {
        Self {
            variant: FormVariant::RightForm,
            alpha,
        }
    }

    /// Operator acting on the coordinates.
    fn velocity_op(self) -> Operator {
        match self.variant {
            FormVariant::LeftForm => Operator::LeftDerivative,
            FormVariant::RightForm => Operator::RightDerivative,
        }
    }
}

/// Coordinates `q^1..q^n` over a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    coords: Vec<FnRepr>,
    grid: UniformGrid,
}

impl Trajectory {
    pub fn new(coords: Vec<FnRepr>, grid: UniformGrid) -> Result<Self> {
        if coords.iter().any(|c| c.interval() != grid.interval()) {
            return Err(FracError::GridMismatch(
                "coordinate over a different interval than the grid".into(),
            ));
        }
        Ok(Self { coords, grid })
    }

    pub fn coords(&self) -> &[FnRepr] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &FnRepr {
        &self.coords[i]
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn sampled(&self) -> Result<Vec<GridFn>> {
        self.coords.iter().map(|c| sample(c, &self.grid)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// Residual of the equation obtained by varying `q^k`, in `k` order.
    pub per_equation: Vec<GridFn>,
    /// The same residuals before sampling; purely analytic ones are exact.
    pub residuals: Vec<FnRepr>,
    pub trimmed_norms: Vec<f64>,
    pub trim: f64,
}

impl ResidualReport {
    /// `Some(true)` when residual `k` is analytic and identically zero.
    pub fn exactly_zero(&self, k: usize) -> Option<bool> {
        self.residuals[k].as_analytic().map(AtomSum::is_zero)
    }
}

fn check_dim(l: &LinearVelocityLagrangian, q: &Trajectory) -> Result<()> {
    if q.dim() != l.dim() {
        return Err(FracError::Dimension {
            expected: l.dim(),
            got: q.dim(),
        });
    }
    Ok(())
}

/// Euler–Lagrange residuals of `form` along `q`.
pub fn el_residual(
    l: &LinearVelocityLagrangian,
    form: FractionalForm,
    q: &Trajectory,
    trim: f64,
) -> Result<ResidualReport> {
    check_dim(l, q)?;
    if !(0.0..0.5).contains(&trim) {
        return Err(FracError::Trim(trim));
    }
    let n = l.dim();
    let grid = q.grid();
    let iv = grid.interval();
    let alpha = form.alpha;
    let vel_op = form.velocity_op();
    let cross_op = vel_op.mirror();
    let potential_sign = match form.variant {
        FormVariant::LeftForm => -1.0,
        FormVariant::RightForm => 1.0,
    };

    let mut velocities: Vec<Option<FnRepr>> = vec![None; n];
    for j in 0..n {
        if l.a.row(j).iter().any(|&x| x != 0.0) {
            velocities[j] = Some(apply(vel_op, &q.coords[j], alpha, grid)?);
        }
    }

    let mut residuals = Vec::with_capacity(n);
    for k in 0..n {
        let mut terms: Vec<(f64, FnRepr)> = Vec::new();
        for j in 0..n {
            let ajk = l.a[(j, k)];
            if ajk != 0.0 {
                terms.push((ajk, velocities[j].clone().expect("row j of A is nonzero")));
            }
        }
        if !l.is_homogeneous_row(k) {
            let mut parts: Vec<(f64, &FnRepr)> = Vec::new();
            for j in 0..n {
                if l.a[(k, j)] != 0.0 {
                    parts.push((l.a[(k, j)], &q.coords[j]));
                }
            }
            let constant = FnRepr::from(AtomSum::constant(iv, Side::Left, l.b[k]));
            parts.push((1.0, &constant));
            let ak = FnRepr::lin_comb(iv, &parts)?;
            terms.push((1.0, apply(cross_op, &ak, alpha, grid)?));
        }
        for j in 0..n {
            let mkj = l.m[(k, j)];
            if mkj != 0.0 {
                terms.push((potential_sign * mkj, q.coords[j].clone()));
            }
        }
        if l.c[k] != 0.0 {
            terms.push((
                potential_sign,
                AtomSum::constant(iv, Side::Left, l.c[k]).into(),
            ));
        }
        let refs: Vec<(f64, &FnRepr)> = terms.iter().map(|(c, f)| (*c, f)).collect();
        residuals.push(FnRepr::lin_comb(iv, &refs)?);
    }

    let per_equation = residuals
        .iter()
        .map(|r| sample(r, grid))
        .collect::<Result<Vec<_>>>()?;
    let trimmed_norms = per_equation
        .iter()
        .map(|r| trimmed_max_abs(r, trim))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport {
        per_equation,
        residuals,
        trimmed_norms,
        trim,
    })
}

/// Pointwise value of the fractional Lagrangian along `q`.
pub fn lagrangian_value(
    l: &LinearVelocityLagrangian,
    form: FractionalForm,
    q: &Trajectory,
) -> Result<GridFn> {
    check_dim(l, q)?;
    let grid = q.grid();
    let n = l.dim();
    let samples = q.sampled()?;
    let sign = match form.variant {
        FormVariant::LeftForm => 1.0,
        FormVariant::RightForm => -1.0,
    };
    let mut velocities = Vec::with_capacity(n);
    for coord in q.coords() {
        velocities.push(sample(
            &apply(form.velocity_op(), coord, form.alpha, grid)?,
            grid,
        )?);
    }
    let mut mask = samples
        .iter()
        .chain(&velocities)
        .fold(Default::default(), |m: crate::fracops::EndpointMask, g| {
            m.union(g.mask())
        });
    let mut values = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let qi: Vec<f64> = samples.iter().map(|s| s.values()[i]).collect();
        let a = l.velocity_coeffs(&qi);
        let kinetic: f64 = (0..n).map(|j| a[j] * velocities[j].values()[i]).sum();
        values.push(sign * kinetic - l.potential(&qi));
    }
    if !values[0].is_finite() {
        mask.left = true;
    }
    if !values[grid.n_cells()].is_finite() {
        mask.right = true;
    }
    GridFn::new(*grid, values, mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::{Interval, PowerAtom};

    #[test]
    fn example_a_coefficients() {
        let l = example_a_lagrangian();
        assert_eq!(l.dim(), 3);
        assert_eq!(
            l.velocity_coeffs(&[1.0, 2.0, 3.0]).as_slice(),
            &[2.0, -1.0, 0.0]
        );
        assert_eq!(l.potential(&[1.0, 2.0, 3.0]), -3.0);
        for x in [-2.0, 0.0, 0.7] {
            assert_eq!(l.potential(&[x, x, 11.0]), 0.0);
        }
    }

    #[test]
    fn example_b_coefficients() {
        let l = example_b_lagrangian();
        assert_eq!(l.dim(), 4);
        assert_eq!(
            l.velocity_coeffs(&[0.0, 5.0, 0.0, 7.0]).as_slice(),
            &[5.0, 0.0, 7.0, 0.0]
        );
        assert_eq!(l.potential(&[0.0, 1.0, 1.0, 0.0]), 1.0);
        assert_eq!(l.potential(&[0.0; 4]), 0.0);
        assert_eq!(
            l.potential_gradient(&[9.0, 2.0, 3.0, 4.0]).as_slice(),
            &[0.0, 3.0, 2.0, -4.0]
        );
    }

    #[test]
    fn construction_checks_shapes_and_symmetrizes() {
        let bad = LinearVelocityLagrangian::new(
            DMatrix::zeros(2, 2),
            DVector::zeros(3),
            DMatrix::zeros(2, 2),
            DVector::zeros(2),
            0.0,
        );
        assert!(matches!(bad, Err(FracError::Dimension { .. })));
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let l = LinearVelocityLagrangian::new(
            DMatrix::zeros(2, 2),
            DVector::zeros(2),
            m,
            DVector::zeros(2),
            0.0,
        )
        .unwrap();
        assert_eq!(l.potential_matrix()[(0, 1)], 1.0);
        assert_eq!(l.potential_matrix()[(1, 0)], 1.0);
    }

    #[test]
    fn dimension_and_trim_errors() {
        let g = UniformGrid::new(Interval::unit(), 16).unwrap();
        let q = Trajectory::new(vec![FnRepr::zero(Interval::unit()); 2], g).unwrap();
        let form = FractionalForm::left(FracOrder::new(0.5).unwrap());
        assert!(matches!(
            el_residual(&example_a_lagrangian(), form, &q, 0.05),
            Err(FracError::Dimension { .. })
        ));
        assert!(lagrangian_value(&example_a_lagrangian(), form, &q).is_err());
        let q = Trajectory::new(vec![FnRepr::zero(Interval::unit()); 3], g).unwrap();
        assert!(matches!(
            el_residual(&example_a_lagrangian(), form, &q, 0.6),
            Err(FracError::Trim(_))
        ));
        let other = Interval::new(0.0, 2.0).unwrap();
        assert!(Trajectory::new(vec![FnRepr::zero(other)], g).is_err());
    }

    #[test]
    fn zero_trajectory_has_zero_residuals() {
        let iv = Interval::unit();
        let g = UniformGrid::new(iv, 32).unwrap();
        let q = Trajectory::new(vec![FnRepr::zero(iv); 4], g).unwrap();
        let r = el_residual(
            &example_b_lagrangian(),
            FractionalForm::right(FracOrder::new(0.6).unwrap()),
            &q,
            0.05,
        )
        .unwrap();
        for k in 0..4 {
            assert_eq!(r.exactly_zero(k), Some(true));
            assert_eq!(r.trimmed_norms[k], 0.0);
        }
        let v = lagrangian_value(
            &example_b_lagrangian(),
            FractionalForm::left(FracOrder::new(0.6).unwrap()),
            &q,
        )
        .unwrap();
        assert!(v.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn lagrangian_values_at_unit_order() {
        let iv = Interval::unit();
        let g = UniformGrid::new(iv, 16).unwrap();
        let one = FracOrder::new(1.0).unwrap();
        let t: FnRepr = AtomSum::single(iv, PowerAtom::left(1.0, 1.0).unwrap()).into();
        let q = Trajectory::new(vec![t.clone(), t.clone(), FnRepr::zero(iv)], g).unwrap();
        let v = lagrangian_value(&example_a_lagrangian(), FractionalForm::left(one), &q).unwrap();
        assert!(v.values().iter().all(|&x| x.abs() < 1e-15));

        let unit: FnRepr = AtomSum::constant(iv, Side::Left, 1.0).into();
        let q = Trajectory::new(vec![t, unit, FnRepr::zero(iv), FnRepr::zero(iv)], g).unwrap();
        let v = lagrangian_value(&example_b_lagrangian(), FractionalForm::right(one), &q).unwrap();
        assert!(v.values().iter().all(|&x| x == 1.0));
    }
}
