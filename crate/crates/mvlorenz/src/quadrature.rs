//! Composite Gauss–Legendre quadrature on panels.
//!
//! All loops run in a fixed order with compensated accumulation, so results
//! are deterministic and insensitive to caller parallelism.

use crate::numeric::KahanSum;

/// 4-point Gauss–Legendre rule on [-1, 1].
const GL4_X: [f64; 2] = [0.3399810435848563, 0.8611363115940526];
const GL4_W: [f64; 2] = [0.6521451548625461, 0.3478548451374538];

/// 12-point Gauss–Legendre rule on [-1, 1].
const GL12_X: [f64; 6] = [
    0.1252334085114689,
    0.3678314989981802,
    0.5873179542866175,
    0.7699026741943047,
    0.9041172563704749,
    0.9815606342467192,
];
const GL12_W: [f64; 6] = [
    0.2491470458134028,
    0.2334925365383548,
    0.2031674267230659,
    0.1600783285433462,
    0.1069393259953184,
    0.0471753363865118,
];

fn expand(half_x: &[f64], half_w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(half_x.len() * 2);
    let mut ws = Vec::with_capacity(half_x.len() * 2);
    for (&x, &w) in half_x.iter().zip(half_w) {
        xs.push(-x);
        ws.push(w);
    }
    for (&x, &w) in half_x.iter().zip(half_w).rev() {
        xs.push(x);
        ws.push(w);
    }
    (xs, ws)
}

/// Nodes and weights of the p-point rule mapped to [0, 1].
fn unit_rule(points: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = match points {
        4 => expand(&GL4_X, &GL4_W),
        12 => expand(&GL12_X, &GL12_W),
        _ => panic!("unsupported Gauss-Legendre order {points}"),
    };
    let nodes = xs.iter().map(|x| 0.5 * (x + 1.0)).collect();
    let weights = ws.iter().map(|w| 0.5 * w).collect();
    (nodes, weights)
}

/// Integrate `f` over `[a, b]` with `panels` equal panels of a `points`-point rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, points: usize) -> f64 {
    let (nodes, weights) = unit_rule(points);
    let h = (b - a) / panels as f64;
    let mut acc = KahanSum::new();
    for p in 0..panels {
        let left = a + h * p as f64;
        for (x, w) in nodes.iter().zip(&weights) {
            acc.add(w * h * f(left + h * x));
        }
    }
    acc.total()
}

/// Integrate `f` over the unit square with `panels`×`panels` panels.
pub fn integrate_unit_square(
    f: impl Fn(f64, f64) -> f64,
    panels: usize,
    points: usize,
) -> f64 {
    let (nodes, weights) = unit_rule(points);
    let h = 1.0 / panels as f64;
    let mut acc = KahanSum::new();
    for pi in 0..panels {
        let x0 = h * pi as f64;
        for pj in 0..panels {
            let y0 = h * pj as f64;
            for (xi, wi) in nodes.iter().zip(&weights) {
                let x = x0 + h * xi;
                for (yj, wj) in nodes.iter().zip(&weights) {
                    acc.add(wi * wj * h * h * f(x, y0 + h * yj));
                }
            }
        }
    }
    acc.total()
}

/// Panel-doubling integration over the unit square.
///
/// Returns `(value, error_estimate)` where the estimate is the change under the
/// last doubling step. Stops once the estimate drops below `tol` or the panel
/// count reaches `max_panels`.
pub fn integrate_unit_square_adaptive(
    f: impl Fn(f64, f64) -> f64,
    tol: f64,
    start_panels: usize,
    max_panels: usize,
) -> (f64, f64) {
    let mut panels = start_panels;
    let mut prev = integrate_unit_square(&f, panels, 4);
    loop {
        panels *= 2;
        let next = integrate_unit_square(&f, panels, 4);
        let err = (next - prev).abs();
        if err <= tol || panels >= max_panels {
            return (next, err);
        }
        prev = next;
    }
}
