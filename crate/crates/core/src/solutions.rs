//! Closed-form solution families of the two example systems and their
//! classical (`alpha -> 1`) limit.

use crate::error::{FracError, Result};
use crate::fracops::{
    apply_with_quadrature, right_rl_integral, AtomSum, FnRepr, FracOrder, Interval, Operator,
    PowerAtom, Side, UniformGrid,
};
use crate::lagrangian::Trajectory;
use crate::specfun::gamma;

/// Example A: `q^2 = q^1`, `q^3 = (-aD_t^alpha + tD_b^alpha) q^1` for a free `q^1`.
///
/// Cross-sided terms are evaluated by adaptive quadrature node by node, so the
/// family is accurate well beyond the grid schemes used in residual checks.
pub fn example_a_solution(q1: &FnRepr, alpha: FracOrder, grid: &UniformGrid) -> Result<Trajectory> {
    let iv = grid.interval();
    let left = apply_with_quadrature(Operator::LeftDerivative, q1, alpha, grid)?;
    let right = apply_with_quadrature(Operator::RightDerivative, q1, alpha, grid)?;
    let q3 = FnRepr::lin_comb(iv, &[(-1.0, &left), (1.0, &right)])?;
    Trajectory::new(vec![q1.clone(), q1.clone(), q3], *grid)
}

/// Free constants `C1..C4` of the Example B family.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExampleBConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl ExampleBConstants {
    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        Self { c1, c2, c3, c4 }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.c1, self.c2, self.c3, self.c4]
    }
}

impl From<[f64; 4]> for ExampleBConstants {
    fn from(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

/// Constants `C'1..C'4` of the classical polynomial solutions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassicalConstants {
    pub c1p: f64,
    pub c2p: f64,
    pub c3p: f64,
    pub c4p: f64,
}

impl ClassicalConstants {
    pub fn new(c1p: f64, c2p: f64, c3p: f64, c4p: f64) -> Self {
        Self { c1p, c2p, c3p, c4p }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.c1p, self.c2p, self.c3p, self.c4p]
    }
}

/// `q^4 = C2 (t-a)^{alpha-1} - C1 Gamma(alpha)/Gamma(2 alpha) (t-a)^{2 alpha-1}`.
///
/// The convolution of `(t-tau)^{alpha-1}` with `(tau-a)^{alpha-1}` is
/// `B(alpha, alpha) (t-a)^{2 alpha - 1}`, and `B(alpha, alpha) / Gamma(alpha) = Gamma(alpha) / Gamma(2 alpha)`.
fn example_b_q4(c: &ExampleBConstants, alpha: f64, iv: Interval) -> Result<AtomSum> {
    let ratio = gamma(alpha)? / gamma(2.0 * alpha)?;
    Ok(AtomSum::new(
        iv,
        [
            PowerAtom::left(c.c2, alpha - 1.0)?,
            PowerAtom::left(-c.c1 * ratio, 2.0 * alpha - 1.0)?,
        ],
    ))
}

/// Example B family, returned as `(q^1, q^2, q^3, q^4)`.
///
/// `q^2` and `q^4` are exact atoms. `q^3 = C3 (b-t)^{alpha-1} + tD_b^{-alpha} q^4`
/// and `q^1 = C4 (b-t)^{alpha-1} - tD_b^{-alpha} q^3` carry their right-endpoint
/// singularity exactly and the nested integrals on the grid.
pub fn example_b_solution(
    c: &ExampleBConstants,
    alpha: FracOrder,
    grid: &UniformGrid,
) -> Result<Trajectory> {
    let iv = grid.interval();
    let a = alpha.value();
    let q2: FnRepr = AtomSum::single(iv, PowerAtom::left(c.c1, a - 1.0)?).into();
    let q4: FnRepr = example_b_q4(c, a, iv)?.into();
    let kernel3: FnRepr = AtomSum::single(iv, PowerAtom::new(Side::Right, c.c3, a - 1.0)?).into();
    let q3 = kernel3.add(&right_rl_integral(&q4, alpha, grid)?)?;
    let kernel1: FnRepr = AtomSum::single(iv, PowerAtom::new(Side::Right, c.c4, a - 1.0)?).into();
    let q1 = FnRepr::lin_comb(
        iv,
        &[
            (1.0, &kernel1),
            (-1.0, &right_rl_integral(&q3, alpha, grid)?),
        ],
    )?;
    Trajectory::new(vec![q1, q2, q3, q4], *grid)
}

/// Constant redefinition under which the `alpha -> 1`, `[0, 1]` family becomes
/// the classical polynomial solution.
pub fn classical_constant_map(c: &ExampleBConstants) -> ClassicalConstants {
    ClassicalConstants {
        c1p: c.c4 - c.c3 - c.c2 / 2.0 + c.c1 / 3.0,
        c2p: -c.c1 / 2.0 + c.c2 + c.c3,
        c3p: c.c2,
        c4p: c.c1,
    }
}

/// Classical polynomial solutions on `[0, 1]`:
/// `q^1 = C'4 t^3/6 - C'3 t^2/2 + C'2 t + C'1`, `q^2 = C'4`,
/// `q^3 = C'4 t^2/2 - C'3 t + C'2`, `q^4 = -C'4 t + C'3`.
pub fn classical_reference(cp: &ClassicalConstants, grid: &UniformGrid) -> Result<Trajectory> {
    let iv = grid.interval();
    if iv != Interval::unit() {
        return Err(FracError::GridMismatch(format!(
            "classical reference lives on [0, 1], grid is on [{}, {}]",
            iv.a(),
            iv.b()
        )));
    }
    let poly = |coeffs: &[(f64, f64)]| -> Result<FnRepr> {
        let atoms = coeffs
            .iter()
            .map(|&(c, k)| PowerAtom::left(c, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(AtomSum::new(iv, atoms).into())
    };
    let q1 = poly(&[
        (cp.c4p / 6.0, 3.0),
        (-cp.c3p / 2.0, 2.0),
        (cp.c2p, 1.0),
        (cp.c1p, 0.0),
    ])?;
    let q2 = poly(&[(cp.c4p, 0.0)])?;
    let q3 = poly(&[(cp.c4p / 2.0, 2.0), (-cp.c3p, 1.0), (cp.c2p, 0.0)])?;
    let q4 = poly(&[(-cp.c4p, 1.0), (cp.c3p, 0.0)])?;
    Trajectory::new(vec![q1, q2, q3, q4], *grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::{left_rl_derivative, sample, trimmed_sup_norm, GridFn};
    use crate::specfun::beta;
    use std::f64::consts::PI;

    fn unit_grid(n: usize) -> UniformGrid {
        UniformGrid::new(Interval::unit(), n).unwrap()
    }

    #[test]
    fn constant_map_examples() {
        assert_eq!(
            classical_constant_map(&ExampleBConstants::default()),
            ClassicalConstants::default()
        );
        let m = classical_constant_map(&ExampleBConstants::new(1.0, 1.0, 1.0, 1.0));
        assert!((m.c1p + 1.0 / 6.0).abs() < 1e-15);
        assert_eq!((m.c2p, m.c3p, m.c4p), (1.5, 1.0, 1.0));
        let m = classical_constant_map(&ExampleBConstants::new(0.0, 0.0, 0.0, 5.0));
        assert_eq!(m.as_array(), [5.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn classical_reference_examples() {
        let g = unit_grid(16);
        let q = classical_reference(&ClassicalConstants::new(0.0, 0.0, 0.0, 1.0), &g).unwrap();
        let s = q.sampled().unwrap();
        for (i, t) in g.nodes().enumerate() {
            assert!((s[0].values()[i] - t.powi(3) / 6.0).abs() < 1e-15);
            assert_eq!(s[1].values()[i], 1.0);
            assert!((s[2].values()[i] - t * t / 2.0).abs() < 1e-15);
            assert_eq!(s[3].values()[i], -t);
        }
        let q = classical_reference(&ClassicalConstants::new(1.0, 0.0, 0.0, 0.0), &g).unwrap();
        let s = q.sampled().unwrap();
        assert!(s[0].values().iter().all(|&v| v == 1.0));
        assert!(s[1..].iter().all(|c| c.values().iter().all(|&v| v == 0.0)));
        let off = UniformGrid::new(Interval::new(0.0, 2.0).unwrap(), 16).unwrap();
        assert!(classical_reference(&ClassicalConstants::default(), &off).is_err());
    }

    #[test]
    fn classical_reference_consistency() {
        // d/dt q1 = q3, d/dt q3 = -q4, d/dt q4 = -q2
        let g = unit_grid(16);
        let one = FracOrder::new(1.0).unwrap();
        let q = classical_reference(&ClassicalConstants::new(0.3, -1.2, 0.7, 2.5), &g).unwrap();
        let d = |k: usize| left_rl_derivative(q.coord(k), one, &g).unwrap();
        let eq = |x: &FnRepr, y: &FnRepr, sign: f64| {
            let diff = FnRepr::lin_comb(Interval::unit(), &[(1.0, x), (-sign, y)]).unwrap();
            diff.as_analytic()
                .unwrap()
                .terms()
                .iter()
                .all(|t| t.coeff.abs() < 1e-14)
        };
        assert!(eq(&d(0), q.coord(2), 1.0));
        assert!(eq(&d(2), q.coord(3), -1.0));
        assert!(eq(&d(3), q.coord(1), -1.0));
    }

    #[test]
    fn example_a_examples() {
        let iv = Interval::unit();
        let g = unit_grid(64);
        let half = FracOrder::new(0.5).unwrap();
        let zero = example_a_solution(&FnRepr::zero(iv), half, &g).unwrap();
        assert!(zero
            .coords()
            .iter()
            .all(|c| c.as_analytic().is_some_and(AtomSum::is_zero)));

        let c = 2.0;
        let q = example_a_solution(&AtomSum::constant(iv, Side::Left, c).into(), half, &g).unwrap();
        let s = sample(q.coord(2), &g).unwrap();
        let want = GridFn::from_fn(g, |t| c * ((1.0 - t).powf(-0.5) - t.powf(-0.5)) / PI.sqrt());
        assert!(s.mask().left && s.mask().right);
        assert!(trimmed_sup_norm(&s, &want, 0.0).unwrap() < 1e-12);
        assert_eq!(q.coord(0), q.coord(1));

        let t: FnRepr = AtomSum::single(iv, PowerAtom::left(1.0, 1.0).unwrap()).into();
        let q = example_a_solution(&t, FracOrder::new(1.0).unwrap(), &g).unwrap();
        let q3 = q.coord(2).as_analytic().unwrap();
        assert_eq!(q3.terms().len(), 1);
        assert_eq!((q3.terms()[0].coeff, q3.terms()[0].exponent), (-2.0, 0.0));
    }

    #[test]
    fn example_b_zero_constants() {
        let g = unit_grid(64);
        let q = example_b_solution(
            &ExampleBConstants::default(),
            FracOrder::new(0.5).unwrap(),
            &g,
        )
        .unwrap();
        for s in q.sampled().unwrap() {
            assert!(s.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn example_b_q4_is_constant_at_half_order() {
        let g = unit_grid(64);
        let q = example_b_solution(
            &ExampleBConstants::new(1.0, 0.0, 0.0, 0.0),
            FracOrder::new(0.5).unwrap(),
            &g,
        )
        .unwrap();
        let q4 = q.coord(3).as_analytic().unwrap();
        assert_eq!(q4.terms().len(), 1);
        assert_eq!(q4.terms()[0].exponent, 0.0);
        assert!((q4.terms()[0].coeff + PI.sqrt()).abs() < 1e-14);
        assert!((q4.terms()[0].coeff + 1.77245385).abs() < 1e-8);
    }

    #[test]
    fn beta_closure_matches_direct_convolution() {
        // (1/Gamma(alpha)) int_a^t (t-tau)^{alpha-1} (tau-a)^{alpha-1} dtau by substitution tau = t s
        for alpha in [0.3f64, 0.5, 0.8] {
            let t = 0.7f64;
            // B(alpha, alpha) = 2 int_0^{1/2} s^{alpha-1} (1-s)^{alpha-1} ds, with s = u^{1/alpha}
            let half_beta = crate::fracops::quad::integrate(
                |u| (1.0 - u.powf(1.0 / alpha)).powf(alpha - 1.0) / alpha,
                0.0,
                0.5f64.powf(alpha),
                0.0,
                1e-14,
                200,
            );
            let direct = 2.0 * half_beta * t.powf(2.0 * alpha - 1.0) / gamma(alpha).unwrap();
            let closed =
                gamma(alpha).unwrap() / gamma(2.0 * alpha).unwrap() * t.powf(2.0 * alpha - 1.0);
            let via_beta =
                beta(alpha, alpha).unwrap() / gamma(alpha).unwrap() * t.powf(2.0 * alpha - 1.0);
            assert!(
                (direct - closed).abs() < 1e-12 * closed,
                "alpha={alpha}: {direct} vs {closed}"
            );
            assert!((via_beta - closed).abs() < 1e-12 * closed);
        }
    }

    #[test]
    fn example_b_at_unit_order_matches_classical() {
        let g = unit_grid(32);
        let c = ExampleBConstants::new(0.4, -1.0, 2.0, 0.5);
        let q = example_b_solution(&c, FracOrder::new(1.0).unwrap(), &g).unwrap();
        assert!(q.coords().iter().all(FnRepr::is_analytic));
        let r = classical_reference(&classical_constant_map(&c), &g).unwrap();
        for (x, y) in q.sampled().unwrap().iter().zip(r.sampled().unwrap()) {
            assert!(trimmed_sup_norm(x, &y, 0.0).unwrap() < 1e-14);
        }
    }
}
