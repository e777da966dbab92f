//! Discrete Euler–Lagrange systems built from Grünwald–Letnikov matrices.
//!
//! Each equation block holds one triangular Toeplitz operator acting on its
//! principal coordinate plus identity couplings to other coordinates. A left
//! operator's equation is imposed on nodes `1..=N` and a right operator's on
//! `0..N`, so every block leaves one free value at its anchoring endpoint and
//! the unpinned system has a null space of dimension equal to the number of
//! blocks. Interior pins select one member of that family.

use nalgebra::{DMatrix, DVector};

use crate::error::{FracError, Result};
use crate::fracops::{sample, EndpointMask, FnRepr, FracOrder, GridFn, UniformGrid};
use crate::lagrangian::Trajectory;
use crate::specfun::gl_weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Lower-triangular Toeplitz, first column `h^-alpha w`.
    LeftGL,
    /// Upper-triangular Toeplitz, first row `h^-alpha w`.
    RightGL,
    Identity,
}

/// Square `(N+1) x (N+1)` operator stored by its Toeplitz generator.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    kind: OperatorKind,
    alpha: FracOrder,
    grid: UniformGrid,
    generator: Vec<f64>,
}

impl OperatorMatrix {
    pub fn identity(alpha: FracOrder, grid: UniformGrid) -> Self {
        Self {
            kind: OperatorKind::Identity,
            alpha,
            grid,
            generator: vec![1.0],
        }
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn size(&self) -> usize {
        self.grid.len()
    }

    /// Toeplitz generator: first column (left), first row (right), `[1]` (identity).
    pub fn generator(&self) -> &[f64] {
        &self.generator
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match self.kind {
            OperatorKind::Identity => f64::from(u8::from(i == j)),
            OperatorKind::LeftGL if j <= i => self.generator[i - j],
            OperatorKind::RightGL if i <= j => self.generator[j - i],
            _ => 0.0,
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.size();
        if x.len() != n {
            return Err(FracError::Dimension {
                expected: n,
                got: x.len(),
            });
        }
        let g = &self.generator;
        Ok(match self.kind {
            OperatorKind::Identity => x.to_vec(),
            OperatorKind::LeftGL => (0..n)
                .map(|i| (0..=i).map(|k| g[k] * x[i - k]).sum())
                .collect(),
            OperatorKind::RightGL => (0..n)
                .map(|i| (0..n - i).map(|k| g[k] * x[i + k]).sum())
                .collect(),
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }

    /// Rows on which an equation led by this operator is imposed.
    fn equation_rows(&self) -> std::ops::Range<usize> {
        let n = self.size();
        match self.kind {
            OperatorKind::LeftGL => 1..n,
            OperatorKind::RightGL => 0..n - 1,
            OperatorKind::Identity => 0..n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlKind {
    Left,
    Right,
}

/// Grünwald–Letnikov matrix of order `alpha` on `grid`.
pub fn gl_matrix(kind: GlKind, alpha: FracOrder, grid: &UniformGrid) -> OperatorMatrix {
    let scale = grid.step().powf(-alpha.value());
    let generator = gl_weights(alpha.value(), grid.n_cells())
        .expect("order validated by FracOrder")
        .as_slice()
        .iter()
        .map(|w| scale * w)
        .collect();
    let kind = match kind {
        GlKind::Left => OperatorKind::LeftGL,
        GlKind::Right => OperatorKind::RightGL,
    };
    OperatorMatrix {
        kind,
        alpha,
        grid: *grid,
        generator,
    }
}

/// A value prescribed for one coordinate at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pin {
    pub coord: usize,
    pub node: usize,
    pub value: f64,
}

/// `op q^principal + sum_j c_j q^j = 0` on the operator's equation rows.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationBlock {
    pub principal: usize,
    pub op: OperatorMatrix,
    pub couplings: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSystem {
    dim: usize,
    grid: UniformGrid,
    blocks: Vec<EquationBlock>,
    pins: Vec<Pin>,
}

/// Relative weight of a pin row against equation rows in the dense least-squares form.
fn pin_weight(grid: &UniformGrid) -> f64 {
    grid.n_cells() as f64
}

impl BlockSystem {
    pub fn new(
        dim: usize,
        grid: UniformGrid,
        blocks: Vec<EquationBlock>,
        pins: Vec<Pin>,
    ) -> Result<Self> {
        for b in &blocks {
            if b.principal >= dim || b.couplings.iter().any(|&(j, _)| j >= dim) {
                return Err(FracError::Dimension {
                    expected: dim,
                    got: b.principal.max(dim),
                });
            }
            if b.op.kind == OperatorKind::Identity || b.op.grid != grid {
                return Err(FracError::Domain(
                    "equation blocks need a GL operator on the system grid".into(),
                ));
            }
        }
        for p in &pins {
            if p.coord >= dim || p.node == 0 || p.node >= grid.n_cells() {
                return Err(FracError::PinNode {
                    coord: p.coord,
                    node: p.node,
                });
            }
        }
        Ok(Self {
            dim,
            grid,
            blocks,
            pins,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn blocks(&self) -> &[EquationBlock] {
        &self.blocks
    }

    pub fn pins(&self) -> &[Pin] {
        &self.pins
    }

    pub fn unknowns(&self) -> usize {
        self.dim * self.grid.len()
    }

    pub fn with_pins(&self, pins: Vec<Pin>) -> Result<Self> {
        Self::new(self.dim, self.grid, self.blocks.clone(), pins)
    }

    /// Stacked equation rows (no pins).
    pub fn equation_matrix(&self) -> DMatrix<f64> {
        let m = self.grid.len();
        let rows: usize = self.blocks.iter().map(|b| b.op.equation_rows().len()).sum();
        let mut out = DMatrix::zeros(rows, self.unknowns());
        let mut r = 0;
        for b in &self.blocks {
            for i in b.op.equation_rows() {
                for j in 0..m {
                    out[(r, b.principal * m + j)] += b.op.entry(i, j);
                }
                for &(coord, c) in &b.couplings {
                    out[(r, coord * m + i)] += c;
                }
                r += 1;
            }
        }
        out
    }

    /// Equation rows followed by weighted pin rows, with the matching right-hand side.
    pub fn to_dense(&self) -> (DMatrix<f64>, DVector<f64>) {
        let eq = self.equation_matrix();
        let m = self.grid.len();
        let w = pin_weight(&self.grid);
        let rows = eq.nrows() + self.pins.len();
        let mut a = DMatrix::zeros(rows, self.unknowns());
        a.view_mut((0, 0), eq.shape()).copy_from(&eq);
        let mut rhs = DVector::zeros(rows);
        for (k, p) in self.pins.iter().enumerate() {
            a[(eq.nrows() + k, p.coord * m + p.node)] = w;
            rhs[eq.nrows() + k] = w * p.value;
        }
        (a, rhs)
    }

    /// Order in which principal coordinates can be eliminated: each block may only
    /// couple to coordinates already solved. `None` if no such order exists.
    fn elimination_order(&self) -> Option<Vec<usize>> {
        let mut principals: Vec<usize> = self.blocks.iter().map(|b| b.principal).collect();
        principals.sort_unstable();
        principals.dedup();
        if principals.len() != self.blocks.len() || principals.len() != self.dim {
            return None;
        }
        let mut done = vec![false; self.dim];
        let mut order = Vec::with_capacity(self.blocks.len());
        while order.len() < self.blocks.len() {
            let next = (0..self.blocks.len()).find(|&k| {
                let b = &self.blocks[k];
                !done[b.principal]
                    && b.couplings
                        .iter()
                        .all(|&(j, _)| j == b.principal || done[j])
            })?;
            done[self.blocks[next].principal] = true;
            order.push(next);
        }
        Some(order)
    }

    /// Solution of the equation rows with block `k`'s free endpoint value set to `free[k]`.
    fn substitute(&self, order: &[usize], free: &[f64]) -> Vec<Vec<f64>> {
        let m = self.grid.len();
        let mut q = vec![vec![0.0; m]; self.dim];
        for &k in order {
            let b = &self.blocks[k];
            let g = &b.op.generator;
            let mut x = vec![0.0; m];
            let coupling = |i: usize, q: &[Vec<f64>]| -> f64 {
                b.couplings.iter().map(|&(j, c)| c * q[j][i]).sum()
            };
            match b.op.kind {
                OperatorKind::LeftGL => {
                    x[0] = free[k];
                    for i in 1..m {
                        let hist: f64 = (1..=i).map(|s| g[s] * x[i - s]).sum();
                        x[i] = (-coupling(i, &q) - hist) / g[0];
                    }
                }
                OperatorKind::RightGL => {
                    x[m - 1] = free[k];
                    for i in (0..m - 1).rev() {
                        let hist: f64 = (1..m - i).map(|s| g[s] * x[i + s]).sum();
                        x[i] = (-coupling(i, &q) - hist) / g[0];
                    }
                }
                OperatorKind::Identity => unreachable!("rejected in BlockSystem::new"),
            }
            q[b.principal] = x;
        }
        q
    }

    /// Basis of the unpinned solution space, one vector per block, found by substitution.
    pub fn null_space_basis(&self) -> Result<Vec<Vec<Vec<f64>>>> {
        let order = self.elimination_order().ok_or_else(|| {
            FracError::RankDeficient("equation blocks are not block-triangular".into())
        })?;
        Ok((0..self.blocks.len())
            .map(|k| {
                let mut free = vec![0.0; self.blocks.len()];
                free[k] = 1.0;
                self.substitute(&order, &free)
            })
            .collect())
    }
}

/// Matrix form of the Example B equations, rows in the order
/// `aD q2 = 0`, `tD q1 + q3 = 0`, `aD q4 + q2 = 0`, `tD q3 - q4 = 0`.
pub fn assemble_example_b(
    alpha: FracOrder,
    grid: &UniformGrid,
    pins: Vec<Pin>,
) -> Result<BlockSystem> {
    const NEED: usize = 4;
    if pins.len() < NEED {
        return Err(FracError::InsufficientPins {
            need: NEED,
            got: pins.len(),
        });
    }
    unpinned_example_b(alpha, grid)?.with_pins(pins)
}

/// Example B blocks without pins, for rank diagnostics.
pub fn unpinned_example_b(alpha: FracOrder, grid: &UniformGrid) -> Result<BlockSystem> {
    let l = gl_matrix(GlKind::Left, alpha, grid);
    let r = gl_matrix(GlKind::Right, alpha, grid);
    let blocks = vec![
        EquationBlock {
            principal: 1,
            op: l.clone(),
            couplings: vec![],
        },
        EquationBlock {
            principal: 0,
            op: r.clone(),
            couplings: vec![(2, 1.0)],
        },
        EquationBlock {
            principal: 3,
            op: l,
            couplings: vec![(1, 1.0)],
        },
        EquationBlock {
            principal: 2,
            op: r,
            couplings: vec![(3, -1.0)],
        },
    ];
    BlockSystem::new(4, *grid, blocks, Vec::new())
}

/// Nodes nearest `a + 0.2 L, a + 0.4 L` on `q^1` and `a + 0.6 L, a + 0.8 L` on `q^3`.
///
/// Keeping each coordinate's pins together conditions the fit far better than
/// alternating them: `q^2` is otherwise recovered from third differences.
pub fn default_pin_sites(grid: &UniformGrid) -> Vec<(usize, usize)> {
    let iv = grid.interval();
    [(0usize, 0.2), (0, 0.4), (2, 0.6), (2, 0.8)]
        .iter()
        .map(|&(coord, frac)| (coord, grid.nearest(iv.a() + frac * iv.length())))
        .collect()
}

/// Pins read off a trajectory at the given `(coordinate, node)` sites.
pub fn pins_from(q: &Trajectory, sites: &[(usize, usize)]) -> Result<Vec<Pin>> {
    sites
        .iter()
        .map(|&(coord, node)| {
            if coord >= q.dim() {
                return Err(FracError::Dimension {
                    expected: q.dim(),
                    got: coord + 1,
                });
            }
            let s = sample(q.coord(coord), q.grid())?;
            let value = s.get(node).ok_or(FracError::PinNode { coord, node })?;
            Ok(Pin { coord, node, value })
        })
        .collect()
}

fn trajectory_from(system: &BlockSystem, coords: Vec<Vec<f64>>) -> Result<Trajectory> {
    let mask = EndpointMask {
        left: true,
        right: true,
    };
    let reprs = coords
        .into_iter()
        .map(|v| GridFn::new(system.grid, v, mask).map(FnRepr::Sampled))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(reprs, system.grid)
}

/// Smallest-to-largest singular value ratio below which the pin fit is rejected.
const PIN_RANK_TOL: f64 = 1e-12;

/// Solves the pinned system.
///
/// Equation rows hold exactly (block substitution through the triangular
/// Toeplitz operators); the free endpoint values are fitted to the pins by
/// least squares, which is the limit of infinitely heavy equation rows.
pub fn solve(system: &BlockSystem) -> Result<Trajectory> {
    let basis = system.null_space_basis()?;
    let k = basis.len();
    if system.pins.len() < k {
        return Err(FracError::InsufficientPins {
            need: k,
            got: system.pins.len(),
        });
    }
    let p = DMatrix::from_fn(system.pins.len(), k, |r, c| {
        basis[c][system.pins[r].coord][system.pins[r].node]
    });
    let rhs = DVector::from_iterator(system.pins.len(), system.pins.iter().map(|p| p.value));
    let svd = p.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > PIN_RANK_TOL * smax) {
        return Err(FracError::RankDeficient(format!(
            "pins do not determine the {k}-parameter family (singular value ratio {:e})",
            smin / smax
        )));
    }
    let coeffs = svd
        .solve(&rhs, 0.0)
        .map_err(|e| FracError::RankDeficient(e.into()))?;
    let m = system.grid.len();
    let coords = (0..system.dim)
        .map(|d| {
            (0..m)
                .map(|i| (0..k).map(|c| coeffs[c] * basis[c][d][i]).sum())
                .collect()
        })
        .collect();
    trajectory_from(system, coords)
}

/// Dense weighted least-squares solve of the stacked system (pin rows weighted by `N`).
/// Cubic in the number of unknowns; meant for small grids and cross-checks.
pub fn solve_dense(system: &BlockSystem) -> Result<Trajectory> {
    let (a, rhs) = system.to_dense();
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-12 * smax)
        .count();
    if rank < system.unknowns() {
        return Err(FracError::RankDeficient(format!(
            "rank {rank} of {} unknowns",
            system.unknowns()
        )));
    }
    let x = svd
        .solve(&rhs, 0.0)
        .map_err(|e| FracError::RankDeficient(e.into()))?;
    let m = system.grid.len();
    let coords = (0..system.dim)
        .map(|d| x.as_slice()[d * m..(d + 1) * m].to_vec())
        .collect();
    trajectory_from(system, coords)
}

/// Number of singular values of the equation rows below `rel_tol * sigma_max`,
/// counting the columns in excess of rows as zero singular values.
pub fn null_space_dimension(system: &BlockSystem, rel_tol: f64) -> usize {
    let a = system.equation_matrix();
    let (rows, cols) = a.shape();
    let sv = a.singular_values();
    let smax = sv.max();
    let small = sv.iter().filter(|&&s| s <= rel_tol * smax).count();
    small + cols.saturating_sub(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::Interval;

    fn grid(a: f64, b: f64, n: usize) -> UniformGrid {
        UniformGrid::new(Interval::new(a, b).unwrap(), n).unwrap()
    }

    #[test]
    fn unit_order_left_is_backward_difference() {
        let g = grid(0.0, 2.0, 8);
        let m = gl_matrix(GlKind::Left, FracOrder::new(1.0).unwrap(), &g);
        for i in 0..9 {
            for j in 0..9 {
                let want = if i == j {
                    4.0
                } else if i == j + 1 {
                    -4.0
                } else {
                    0.0
                };
                assert_eq!(m.entry(i, j), want);
            }
        }
        let r = gl_matrix(GlKind::Right, FracOrder::new(1.0).unwrap(), &g).to_dense();
        assert_eq!(r, m.to_dense().transpose());
        assert_eq!(r[(3, 4)], -4.0);
        assert_eq!(r[(3, 3)], 4.0);
    }

    #[test]
    fn half_order_first_column() {
        let g = grid(0.0, 8.0, 8);
        let m = gl_matrix(GlKind::Left, FracOrder::new(0.5).unwrap(), &g);
        let col: Vec<f64> = (0..4).map(|i| m.entry(i, 0)).collect();
        assert_eq!(col, vec![1.0, -0.5, -0.125, -0.0625]);
    }

    #[test]
    fn pins_are_validated() {
        let g = grid(0.0, 1.0, 16);
        let a = FracOrder::new(0.5).unwrap();
        let pin = |coord, node| Pin {
            coord,
            node,
            value: 0.0,
        };
        assert!(matches!(
            assemble_example_b(a, &g, vec![pin(0, 3); 3]),
            Err(FracError::InsufficientPins { need: 4, got: 3 })
        ));
        assert!(matches!(
            assemble_example_b(a, &g, vec![pin(0, 3), pin(0, 4), pin(2, 5), pin(2, 16)]),
            Err(FracError::PinNode { coord: 2, node: 16 })
        ));
        assert!(matches!(
            assemble_example_b(a, &g, vec![pin(0, 0), pin(0, 4), pin(2, 5), pin(2, 6)]),
            Err(FracError::PinNode { .. })
        ));
        assert!(
            assemble_example_b(a, &g, vec![pin(4, 3), pin(0, 4), pin(2, 5), pin(2, 6)]).is_err()
        );
    }

    #[test]
    fn zero_pins_give_zero() {
        let g = grid(0.0, 1.0, 32);
        let a = FracOrder::new(0.6).unwrap();
        let pins = default_pin_sites(&g)
            .into_iter()
            .map(|(coord, node)| Pin {
                coord,
                node,
                value: 0.0,
            })
            .collect();
        let sys = assemble_example_b(a, &g, pins).unwrap();
        let q = solve(&sys).unwrap();
        for s in q.sampled().unwrap() {
            assert!(s.values().iter().all(|&v| v == 0.0));
            assert!(s.mask().left && s.mask().right);
        }
    }

    #[test]
    fn degenerate_pins_are_rank_deficient() {
        let g = grid(0.0, 1.0, 32);
        let a = FracOrder::new(0.6).unwrap();
        let pins = vec![
            Pin {
                coord: 0,
                node: 5,
                value: 1.0
            };
            4
        ];
        let sys = assemble_example_b(a, &g, pins).unwrap();
        assert!(matches!(solve(&sys), Err(FracError::RankDeficient(_))));
    }

    #[test]
    fn structured_and_dense_solves_agree() {
        let g = grid(0.0, 1.0, 24);
        for alpha in [0.5, 0.8, 1.0] {
            let a = FracOrder::new(alpha).unwrap();
            let values = [0.3, -1.2, 0.8, 2.0];
            let pins = default_pin_sites(&g)
                .into_iter()
                .zip(values)
                .map(|((coord, node), value)| Pin { coord, node, value })
                .collect();
            let sys = assemble_example_b(a, &g, pins).unwrap();
            let x = solve(&sys).unwrap().sampled().unwrap();
            let y = solve_dense(&sys).unwrap().sampled().unwrap();
            for (u, v) in x.iter().zip(&y) {
                for (p, q) in u.values().iter().zip(v.values()) {
                    assert!(
                        (p - q).abs() < 1e-9 * p.abs().max(1.0),
                        "alpha={alpha}: {p} vs {q}"
                    );
                }
            }
        }
    }
}
