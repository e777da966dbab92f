//! Grid schemes for the left operators; right operators reuse them through index reversal.

use super::FracOrder;
use crate::specfun::{gamma, gl_weights};

/// Grünwald–Letnikov left derivative `h^-alpha sum_{k<=i} w_k f_{i-k}` at every node.
pub fn gl_left_derivative(values: &[f64], alpha: FracOrder, h: f64) -> Vec<f64> {
    let alpha = alpha.value();
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let w = gl_weights(alpha, n - 1).expect("order validated by FracOrder");
    let w = w.as_slice();
    let scale = h.powf(-alpha);
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for k in 0..=i {
                acc += w[k] * values[i - k];
            }
            scale * acc
        })
        .collect()
}

/// `(1+x)^p - 1` without cancellation for small `x`.
fn pow1pm1(x: f64, p: f64) -> f64 {
    (p * x.ln_1p()).exp_m1()
}

/// Interior product-trapezoid weight `(m+1)^{p} - 2 m^{p} + (m-1)^{p}`, `p = alpha + 1`, `m >= 1`.
fn interior_weight(m: usize, p: f64) -> f64 {
    if m == 1 {
        return 2f64.powf(p) - 2.0;
    }
    let mf = m as f64;
    let x = 1.0 / mf;
    mf.powf(p) * (pow1pm1(x, p) + pow1pm1(-x, p))
}

/// Product-trapezoid left RL integral of the piecewise-linear interpolant,
/// with the kernel `(t - tau)^{alpha-1}` integrated exactly on each cell.
pub fn product_trapezoid_left(values: &[f64], alpha: FracOrder, h: f64) -> Vec<f64> {
    let alpha = alpha.value();
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let p = alpha + 1.0;
    let scale = h.powf(alpha) / gamma(alpha + 2.0).expect("alpha + 2 is positive");
    let interior: Vec<f64> = (0..n)
        .map(|m| if m == 0 { 0.0 } else { interior_weight(m, p) })
        .collect();
    let mut out = vec![0.0; n];
    for i in 1..n {
        let fi = i as f64;
        let first = (fi - 1.0).powf(p) - (fi - 1.0 - alpha) * fi.powf(alpha);
        let mut acc = first * values[0] + values[i];
        for j in 1..i {
            acc += interior[i - j] * values[j];
        }
        out[i] = scale * acc;
    }
    out
}

/// Mirrored scheme: reverse, apply the left scheme, reverse back.
pub fn mirrored(values: &[f64], scheme: impl Fn(&[f64]) -> Vec<f64>) -> Vec<f64> {
    let mut rev = values.to_vec();
    rev.reverse();
    let mut out = scheme(&rev);
    out.reverse();
    out
}
