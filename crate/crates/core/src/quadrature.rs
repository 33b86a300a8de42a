//! Quadrature rules shared by the mesh, potential and oracle code.

use std::f64::consts::PI;

/// A rule on the reference triangle: barycentric coordinates and weights
/// summing to one (multiply by the triangle area).
#[derive(Debug, Clone, Copy)]
pub struct TriangleRule {
    pub points: &'static [[f64; 3]],
    pub weights: &'static [f64],
}

pub const CENTROID: TriangleRule = TriangleRule {
    points: &[[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]],
    weights: &[1.0],
};

const D5_A1: f64 = 0.059_715_871_789_769_82;
const D5_B1: f64 = 0.470_142_064_105_115_1;
const D5_A2: f64 = 0.797_426_985_353_087_3;
const D5_B2: f64 = 0.101_286_507_323_456_34;
const D5_W0: f64 = 0.225;
const D5_W1: f64 = 0.132_394_152_788_506_18;
const D5_W2: f64 = 0.125_939_180_544_827_15;

/// Seven-point rule exact for polynomials of degree five.
pub const DEGREE5: TriangleRule = TriangleRule {
    points: &[
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        [D5_A1, D5_B1, D5_B1],
        [D5_B1, D5_A1, D5_B1],
        [D5_B1, D5_B1, D5_A1],
        [D5_A2, D5_B2, D5_B2],
        [D5_B2, D5_A2, D5_B2],
        [D5_B2, D5_B2, D5_A2],
    ],
    weights: &[D5_W0, D5_W1, D5_W1, D5_W1, D5_W2, D5_W2, D5_W2],
};

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Composite Simpson weights for `n` equispaced nodes on [a, b]; `n` must be odd.
pub fn simpson_weights(a: f64, b: f64, n: usize) -> Option<Vec<f64>> {
    if n < 3 || n.is_multiple_of(2) {
        return None;
    }
    let h = (b - a) / (n - 1) as f64;
    Some(
        (0..n)
            .map(|i| {
                let c = if i == 0 || i == n - 1 {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * h / 3.0
            })
            .collect(),
    )
}

/// Composite Simpson rule over sorted, not necessarily equispaced nodes,
/// taken two intervals at a time; needs an odd node count of at least 3.
pub fn simpson(nodes: &[f64], values: &[f64]) -> Option<f64> {
    let n = nodes.len();
    if n < 3 || n.is_multiple_of(2) || values.len() != n {
        return None;
    }
    let mut total = 0.0;
    for i in (0..n - 2).step_by(2) {
        let (h0, h1) = (nodes[i + 1] - nodes[i], nodes[i + 2] - nodes[i + 1]);
        let (f0, f1, f2) = (values[i], values[i + 1], values[i + 2]);
        total += (h0 + h1) / 6.0
            * ((2.0 - h1 / h0) * f0 + (h0 + h1) * (h0 + h1) / (h0 * h1) * f1 + (2.0 - h0 / h1) * f2);
    }
    Some(total)
}

/// Trapezoid rule over arbitrary (sorted) nodes.
pub fn trapezoid(nodes: &[f64], values: &[f64]) -> f64 {
    nodes
        .windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}
