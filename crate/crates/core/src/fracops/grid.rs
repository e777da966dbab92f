use crate::error::{FracError, Result};

/// Closed time interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(FracError::Interval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

/// Uniform grid `t_i = a + i h`, `h = (b - a) / N`, `i = 0..=N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    interval: Interval,
    n_cells: usize,
}

impl UniformGrid {
    pub const MIN_CELLS: usize = 8;

    pub fn new(interval: Interval, n_cells: usize) -> Result<Self> {
        if n_cells < Self::MIN_CELLS {
            return Err(FracError::GridTooCoarse {
                min: Self::MIN_CELLS,
                got: n_cells,
            });
        }
        Ok(Self { interval, n_cells })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn len(&self) -> usize {
        self.n_cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.interval.length() / self.n_cells as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n_cells {
            self.interval.b
        } else {
            self.interval.a + i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    /// Index of the node closest to `t`.
    pub fn nearest(&self, t: f64) -> usize {
        let x = ((t - self.interval.a) / self.step()).round();
        x.clamp(0.0, self.n_cells as f64) as usize
    }

    pub(crate) fn ensure_same(&self, other: &UniformGrid) -> Result<()> {
        if self != other {
            return Err(FracError::GridMismatch(format!(
                "[{}, {}]/{} vs [{}, {}]/{}",
                self.interval.a,
                self.interval.b,
                self.n_cells,
                other.interval.a,
                other.interval.b,
                other.n_cells
            )));
        }
        Ok(())
    }
}

/// Flags for endpoint nodes whose value is not meaningful (singular or undefined).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EndpointMask {
    pub left: bool,
    pub right: bool,
}

impl EndpointMask {
    pub const NONE: Self = Self {
        left: false,
        right: false,
    };

    pub fn union(self, other: Self) -> Self {
        Self {
            left: self.left || other.left,
            right: self.right || other.right,
        }
    }

    pub fn reversed(self) -> Self {
        Self {
            left: self.right,
            right: self.left,
        }
    }
}

/// Samples of a function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: UniformGrid,
    values: Vec<f64>,
    mask: EndpointMask,
}

impl GridFn {
    pub fn new(grid: UniformGrid, values: Vec<f64>, mask: EndpointMask) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(FracError::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values, mask })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self {
            grid,
            values,
            mask: EndpointMask::NONE,
        }
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
            mask: EndpointMask::NONE,
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> EndpointMask {
        self.mask
    }

    pub fn with_mask(mut self, mask: EndpointMask) -> Self {
        self.mask = self.mask.union(mask);
        self
    }

    pub fn is_masked(&self, i: usize) -> bool {
        (i == 0 && self.mask.left) || (i == self.grid.n_cells() && self.mask.right)
    }

    /// Value at node `i`, `None` when the node is masked.
    pub fn get(&self, i: usize) -> Option<f64> {
        if self.is_masked(i) {
            None
        } else {
            Some(self.values[i])
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scale(&self, c: f64) -> GridFn {
        GridFn {
            grid: self.grid,
            values: self.values.iter().map(|v| c * v).collect(),
            mask: self.mask,
        }
    }

    /// `self + c * other`, masks combined.
    pub fn axpy(&self, c: f64, other: &GridFn) -> Result<GridFn> {
        self.grid.ensure_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x + c * y)
            .collect();
        Ok(GridFn {
            grid: self.grid,
            values,
            mask: self.mask.union(other.mask),
        })
    }

    /// Node-wise product, masks combined.
    pub fn mul(&self, other: &GridFn) -> Result<GridFn> {
        self.grid.ensure_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x * y)
            .collect();
        Ok(GridFn {
            grid: self.grid,
            values,
            mask: self.mask.union(other.mask),
        })
    }

    /// Index reversal `i <-> N - i`, used to express right operators through left ones.
    pub fn reversed(&self) -> GridFn {
        let mut values = self.values.clone();
        values.reverse();
        GridFn {
            grid: self.grid,
            values,
            mask: self.mask.reversed(),
        }
    }
}

/// Node indices inside the trimmed window `[a + trim (b-a), b - trim (b-a)]`.
pub fn window(grid: &UniformGrid, trim: f64) -> Result<std::ops::RangeInclusive<usize>> {
    if !(0.0..0.5).contains(&trim) {
        return Err(FracError::Trim(trim));
    }
    let n = grid.n_cells() as f64;
    // small slack so nodes sitting exactly on the window edge are kept
    let lo = (trim * n - 1e-9).ceil().max(0.0) as usize;
    let hi = ((1.0 - trim) * n + 1e-9).floor() as usize;
    Ok(lo..=hi)
}

/// `max |f - g|` over the trimmed window, skipping nodes masked in either input.
///
/// A NaN at an unmasked node propagates to the result.
pub fn trimmed_sup_norm(f: &GridFn, g: &GridFn, trim: f64) -> Result<f64> {
    f.grid.ensure_same(&g.grid)?;
    let mut worst = 0.0f64;
    for i in window(&f.grid, trim)? {
        if f.is_masked(i) || g.is_masked(i) {
            continue;
        }
        let d = (f.values[i] - g.values[i]).abs();
        if d.is_nan() {
            return Ok(f64::NAN);
        }
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Trimmed sup-norm of a single function.
pub fn trimmed_max_abs(f: &GridFn, trim: f64) -> Result<f64> {
    trimmed_sup_norm(f, &GridFn::zeros(f.grid), trim)
}
