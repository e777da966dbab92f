//! Benchmark fixtures shared by the criterion targets in `benches/`.

use fracvar::fracops::{AtomSum, GridFn, Interval, PowerAtom, UniformGrid};
use fracvar::solutions::{example_b_solution, ExampleBConstants};
use fracvar::varsolve::{assemble_example_b, default_pin_sites, pins_from, BlockSystem};
use fracvar::FracOrder;

pub fn unit_grid(n: usize) -> UniformGrid {
    UniformGrid::new(Interval::unit(), n).expect("n >= 8")
}

/// Samples of `t^1.5` on `[0, 1]`.
pub fn smooth_samples(n: usize) -> GridFn {
    let g = unit_grid(n);
    AtomSum::single(
        g.interval(),
        PowerAtom::left(1.0, 1.5).expect("valid exponent"),
    )
    .sample(&g)
    .expect("regular at both ends")
}

/// Example B system pinned to the closed-form family with unit constants.
pub fn pinned_example_b(alpha: f64, n: usize) -> BlockSystem {
    let g = unit_grid(n);
    let alpha = FracOrder::new(alpha).expect("order in (0, 1]");
    let q = example_b_solution(&ExampleBConstants::new(1.0, 1.0, 1.0, 1.0), alpha, &g)
        .expect("closed form");
    let pins = pins_from(&q, &default_pin_sites(&g)).expect("interior pins");
    assemble_example_b(alpha, &g, pins).expect("four pins")
}
