//! Exact calculus on power atoms `c (t-a)^nu` and `c (b-t)^nu`.

use std::fmt;

use super::grid::{EndpointMask, GridFn, Interval, UniformGrid};
use crate::error::{FracError, Result};
use crate::specfun::{gamma, reciprocal_gamma};

/// Exponents closer than this are the same exponent.
pub const EXPONENT_TOL: f64 = 1e-12;

/// Which endpoint an atom (or an operator) is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    /// `(t - a)^nu`, left RL operators.
    Left,
    /// `(b - t)^nu`, right RL operators.
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// `coeff * (t-a)^exponent` (left) or `coeff * (b-t)^exponent` (right).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAtom {
    pub side: Side,
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerAtom {
    pub fn new(side: Side, coeff: f64, exponent: f64) -> Result<Self> {
        if !(exponent > -1.0) || !exponent.is_finite() || !coeff.is_finite() {
            return Err(FracError::NonIntegrable { exponent });
        }
        Ok(Self {
            side,
            coeff,
            exponent,
        })
    }

    pub fn left(coeff: f64, exponent: f64) -> Result<Self> {
        Self::new(Side::Left, coeff, exponent)
    }

    pub fn right(coeff: f64, exponent: f64) -> Result<Self> {
        Self::new(Side::Right, coeff, exponent)
    }

    /// Distance from the anchoring endpoint.
    pub fn base(&self, interval: Interval, t: f64) -> f64 {
        match self.side {
            Side::Left => t - interval.a(),
            Side::Right => interval.b() - t,
        }
    }

    pub fn eval(&self, interval: Interval, t: f64) -> f64 {
        if self.coeff == 0.0 {
            return 0.0;
        }
        self.coeff * self.base(interval, t).max(0.0).powf(self.exponent)
    }

    /// Singular at its anchoring endpoint.
    pub fn is_singular(&self) -> bool {
        self.coeff != 0.0 && self.exponent < 0.0
    }
}

/// Same-sided RL operator of order `p` on an atom (`p < 0` integrates, `p > 0` differentiates).
///
/// The coefficient is exactly zero when `nu - p + 1` sits on a pole of Gamma.
fn power_rule(atom: PowerAtom, p: f64) -> Result<PowerAtom> {
    if !(atom.exponent > -1.0) {
        return Err(FracError::NonIntegrable {
            exponent: atom.exponent,
        });
    }
    let shifted = atom.exponent - p + 1.0;
    let nearest = shifted.round();
    let recip = if nearest <= 0.0 && (shifted - nearest).abs() <= EXPONENT_TOL {
        0.0
    } else {
        reciprocal_gamma(shifted)
    };
    let coeff = if atom.coeff == 0.0 || recip == 0.0 {
        0.0
    } else {
        atom.coeff * gamma(atom.exponent + 1.0)? * recip
    };
    let exponent = atom.exponent - p;
    if coeff != 0.0 && !(exponent > -1.0) {
        return Err(FracError::NonIntegrable { exponent });
    }
    Ok(PowerAtom {
        side: atom.side,
        coeff,
        exponent,
    })
}

/// `aD_t^p` applied to a left atom.
pub fn power_rule_left(atom: PowerAtom, p: f64) -> Result<PowerAtom> {
    if atom.side != Side::Left {
        return Err(FracError::Domain(
            "power_rule_left needs a left-anchored atom".into(),
        ));
    }
    power_rule(atom, p)
}

/// `tD_b^p` applied to a right atom.
pub fn power_rule_right(atom: PowerAtom, p: f64) -> Result<PowerAtom> {
    if atom.side != Side::Right {
        return Err(FracError::Domain(
            "power_rule_right needs a right-anchored atom".into(),
        ));
    }
    power_rule(atom, p)
}

/// A finite sum of power atoms over one interval, kept in canonical form:
/// sorted by (side, exponent), like terms merged, exact zeros dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSum {
    interval: Interval,
    terms: Vec<PowerAtom>,
}

impl AtomSum {
    pub fn new(interval: Interval, terms: impl IntoIterator<Item = PowerAtom>) -> Self {
        let mut terms: Vec<PowerAtom> = terms.into_iter().collect();
        terms.sort_by(|x, y| x.side.cmp(&y.side).then(x.exponent.total_cmp(&y.exponent)));
        let mut merged: Vec<PowerAtom> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last)
                    if last.side == t.side
                        && (last.exponent - t.exponent).abs() <= EXPONENT_TOL =>
                {
                    last.coeff += t.coeff;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        Self {
            interval,
            terms: merged,
        }
    }

    pub fn zero(interval: Interval) -> Self {
        Self {
            interval,
            terms: Vec::new(),
        }
    }

    pub fn single(interval: Interval, atom: PowerAtom) -> Self {
        Self::new(interval, [atom])
    }

    /// `c` as a degree-zero atom on the given side.
    pub fn constant(interval: Interval, side: Side, c: f64) -> Self {
        Self::new(
            interval,
            [PowerAtom {
                side,
                coeff: c,
                exponent: 0.0,
            }],
        )
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn terms(&self) -> &[PowerAtom] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn side_part(&self, side: Side) -> AtomSum {
        Self {
            interval: self.interval,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.side == side)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> AtomSum {
        Self::new(
            self.interval,
            self.terms.iter().map(|t| PowerAtom {
                coeff: c * t.coeff,
                ..*t
            }),
        )
    }

    pub fn add(&self, other: &AtomSum) -> Result<AtomSum> {
        if self.interval != other.interval {
            return Err(FracError::GridMismatch(
                "atom sums over different intervals".into(),
            ));
        }
        Ok(Self::new(
            self.interval,
            self.terms.iter().chain(&other.terms).copied(),
        ))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|x| x.eval(self.interval, t)).sum()
    }

    /// Applies the same-sided power rule to every term; fails on any cross-sided term.
    pub fn power_rule(&self, side: Side, p: f64) -> Result<AtomSum> {
        let mut out = Vec::with_capacity(self.terms.len());
        for &t in &self.terms {
            if t.side != side {
                return Err(FracError::Domain(
                    "cross-sided atom in same-sided power rule".into(),
                ));
            }
            out.push(power_rule(t, p)?);
        }
        Ok(Self::new(self.interval, out))
    }

    /// Pointwise samples; nodes where a singular atom's base vanishes are masked (value NaN).
    pub fn sample(&self, grid: &UniformGrid) -> Result<GridFn> {
        if grid.interval() != self.interval {
            return Err(FracError::GridMismatch(
                "atom sum sampled on a grid over another interval".into(),
            ));
        }
        let n = grid.n_cells();
        let mask = EndpointMask {
            left: self
                .terms
                .iter()
                .any(|t| t.side == Side::Left && t.is_singular()),
            right: self
                .terms
                .iter()
                .any(|t| t.side == Side::Right && t.is_singular()),
        };
        let values = (0..=n)
            .map(|i| {
                if (i == 0 && mask.left) || (i == n && mask.right) {
                    f64::NAN
                } else {
                    self.eval(grid.node(i))
                }
            })
            .collect();
        GridFn::new(*grid, values, mask)
    }

    /// Largest coefficient difference after aligning like terms; `None` when the
    /// term structure (sides and exponents) differs.
    pub fn coeff_distance(&self, other: &AtomSum) -> Option<f64> {
        let diff = self.add(&other.scale(-1.0)).ok()?;
        let structure_matches = diff.terms.iter().all(|d| {
            let present = |s: &AtomSum| {
                s.terms
                    .iter()
                    .any(|t| t.side == d.side && (t.exponent - d.exponent).abs() <= EXPONENT_TOL)
            };
            present(self) && present(other)
        });
        if !structure_matches {
            return None;
        }
        Some(diff.terms.iter().map(|t| t.coeff.abs()).fold(0.0, f64::max))
    }

    /// Mirror image under `t -> a + b - t`: left atoms become right atoms and vice versa.
    pub fn mirrored(&self) -> AtomSum {
        Self::new(
            self.interval,
            self.terms.iter().map(|t| PowerAtom {
                side: t.side.opposite(),
                ..*t
            }),
        )
    }
}

impl fmt::Display for AtomSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match t.side {
                Side::Left => write!(f, "{}*(t-{})^{}", t.coeff, self.interval.a(), t.exponent)?,
                Side::Right => write!(f, "{}*({}-t)^{}", t.coeff, self.interval.b(), t.exponent)?,
            }
        }
        Ok(())
    }
}
