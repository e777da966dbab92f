use super::atoms::AtomSum;
use super::grid::{GridFn, Interval, UniformGrid};
use crate::error::{FracError, Result};

/// A function on an interval: exact atoms, grid samples, or an exact part plus a sampled part.
///
/// The composite form carries solutions whose endpoint singularities are known
/// in closed form while the rest is only available on the grid.
#[derive(Debug, Clone, PartialEq)]
pub enum FnRepr {
    Analytic(AtomSum),
    Sampled(GridFn),
    Composite { analytic: AtomSum, sampled: GridFn },
}

impl FnRepr {
    pub fn zero(interval: Interval) -> Self {
        FnRepr::Analytic(AtomSum::zero(interval))
    }

    pub fn interval(&self) -> Interval {
        match self {
            FnRepr::Analytic(s) => s.interval(),
            FnRepr::Sampled(g) => g.grid().interval(),
            FnRepr::Composite { analytic, .. } => analytic.interval(),
        }
    }

    /// The exact representation, if there is no sampled part.
    pub fn as_analytic(&self) -> Option<&AtomSum> {
        match self {
            FnRepr::Analytic(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, FnRepr::Analytic(_))
    }

    pub(crate) fn parts(&self) -> (Option<&AtomSum>, Option<&GridFn>) {
        match self {
            FnRepr::Analytic(s) => (Some(s), None),
            FnRepr::Sampled(g) => (None, Some(g)),
            FnRepr::Composite { analytic, sampled } => (Some(analytic), Some(sampled)),
        }
    }

    pub(crate) fn from_parts(analytic: AtomSum, sampled: Option<GridFn>) -> Self {
        match sampled {
            None => FnRepr::Analytic(analytic),
            Some(g) if analytic.is_zero() => FnRepr::Sampled(g),
            Some(g) => FnRepr::Composite {
                analytic,
                sampled: g,
            },
        }
    }

    pub fn scale(&self, c: f64) -> FnRepr {
        match self {
            FnRepr::Analytic(s) => FnRepr::Analytic(s.scale(c)),
            FnRepr::Sampled(g) => FnRepr::Sampled(g.scale(c)),
            FnRepr::Composite { analytic, sampled } => FnRepr::Composite {
                analytic: analytic.scale(c),
                sampled: sampled.scale(c),
            },
        }
    }

    pub fn add(&self, other: &FnRepr) -> Result<FnRepr> {
        FnRepr::lin_comb(self.interval(), &[(1.0, self), (1.0, other)])
    }

    /// `sum c_i f_i`, exact parts merged as atoms and sampled parts added on their shared grid.
    pub fn lin_comb(interval: Interval, terms: &[(f64, &FnRepr)]) -> Result<FnRepr> {
        let mut analytic = AtomSum::zero(interval);
        let mut sampled: Option<GridFn> = None;
        for &(c, f) in terms {
            if f.interval() != interval {
                return Err(FracError::GridMismatch(
                    "functions over different intervals".into(),
                ));
            }
            let (a, s) = f.parts();
            if let Some(a) = a {
                analytic = analytic.add(&a.scale(c))?;
            }
            if let Some(s) = s {
                sampled = Some(match sampled {
                    None => s.scale(c),
                    Some(acc) => acc.axpy(c, s)?,
                });
            }
        }
        Ok(FnRepr::from_parts(analytic, sampled))
    }
}

impl From<AtomSum> for FnRepr {
    fn from(s: AtomSum) -> Self {
        FnRepr::Analytic(s)
    }
}

impl From<GridFn> for FnRepr {
    fn from(g: GridFn) -> Self {
        FnRepr::Sampled(g)
    }
}

/// Values on `grid`; sampled parts must already live on that grid.
pub fn sample(f: &FnRepr, grid: &UniformGrid) -> Result<GridFn> {
    match f {
        FnRepr::Analytic(s) => s.sample(grid),
        FnRepr::Sampled(g) => {
            g.grid().ensure_same(grid)?;
            Ok(g.clone())
        }
        FnRepr::Composite { analytic, sampled } => {
            sampled.grid().ensure_same(grid)?;
            analytic.sample(grid)?.axpy(1.0, sampled)
        }
    }
}
