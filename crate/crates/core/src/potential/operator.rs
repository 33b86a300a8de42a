//! Collocation operator of the single layer and its iterative solution.
//!
//! Far interactions use the one-point rule and are summed on the fly; pairs
//! closer than `NEAR_RATIO` panel diameters carry a stored correction to the
//! accurately integrated entry. The dense matrix is never formed.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::panel::{potential_integral, self_potential, Panel};

pub(crate) const NEAR_RATIO: f64 = 8.0;

pub(crate) struct SingleLayerOperator {
    xs: Vec<f64>,
    ys: Vec<f64>,
    zs: Vec<f64>,
    areas: Vec<f64>,
    diagonal: Vec<f64>,
    near_start: Vec<usize>,
    near_index: Vec<u32>,
    near_value: Vec<f64>,
}

impl SingleLayerOperator {
    pub fn assemble(panels: &[Panel]) -> Self {
        let rows: Vec<(f64, Vec<(u32, f64)>)> = panels
            .par_iter()
            .enumerate()
            .map(|(i, pi)| {
                let x = pi.centroid;
                let mut near = Vec::new();
                for (j, pj) in panels.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let d = (x - pj.centroid).norm();
                    if d < NEAR_RATIO * pj.diameter {
                        let accurate = potential_integral(&x, pj);
                        near.push((j as u32, accurate - pj.area / d));
                    }
                }
                (self_potential(&x, pi), near)
            })
            .collect();
        let mut near_start = Vec::with_capacity(panels.len() + 1);
        let mut near_index = Vec::new();
        let mut near_value = Vec::new();
        let mut diagonal = Vec::with_capacity(panels.len());
        near_start.push(0);
        for (d, near) in rows {
            diagonal.push(d);
            for (j, v) in near {
                near_index.push(j);
                near_value.push(v);
            }
            near_start.push(near_index.len());
        }
        SingleLayerOperator {
            xs: panels.iter().map(|p| p.centroid.x).collect(),
            ys: panels.iter().map(|p| p.centroid.y).collect(),
            zs: panels.iter().map(|p| p.centroid.z).collect(),
            areas: panels.iter().map(|p| p.area).collect(),
            diagonal,
            near_start,
            near_index,
            near_value,
        }
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let charges: Vec<f64> = x.iter().zip(&self.areas).map(|(a, b)| a * b).collect();
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let (px, py, pz) = (self.xs[i], self.ys[i], self.zs[i]);
            let mut s = 0.0;
            for j in 0..charges.len() {
                let dx = px - self.xs[j];
                let dy = py - self.ys[j];
                let dz = pz - self.zs[j];
                let r2 = dx * dx + dy * dy + dz * dz;
                if r2 > 0.0 {
                    s += charges[j] / r2.sqrt();
                }
            }
            for k in self.near_start[i]..self.near_start[i + 1] {
                s += self.near_value[k] * x[self.near_index[k] as usize];
            }
            *yi = s + self.diagonal[i] * x[i];
        });
    }
}

pub(crate) struct GmresOutcome {
    pub solution: Vec<f64>,
    pub relative_residual: f64,
    pub iterations: usize,
    pub condition_estimate: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Restarted GMRES with right Jacobi preconditioning.
pub(crate) fn gmres(
    op: &SingleLayerOperator,
    rhs: &[f64],
    restart: usize,
    tol: f64,
    max_iter: usize,
) -> GmresOutcome {
    let n = rhs.len();
    let inv_diag: Vec<f64> = op.diagonal().iter().map(|d| 1.0 / d).collect();
    let b_norm = norm(rhs);
    let mut x = vec![0.0; n];
    let mut residual = rhs.to_vec();
    let mut res_norm = b_norm;
    let mut iterations = 0;
    let mut condition = f64::NAN;
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n];

    while iterations < max_iter && res_norm > tol * b_norm {
        let m = restart.min(max_iter - iterations).max(1);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        basis.push(residual.iter().map(|r| r / res_norm).collect());
        let mut h = DMatrix::<f64>::zeros(m + 1, m);
        let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
        let mut g = vec![0.0; m + 1];
        g[0] = res_norm;
        let mut k_used = 0;
        for k in 0..m {
            for i in 0..n {
                z[i] = basis[k][i] * inv_diag[i];
            }
            op.apply(&z, &mut w);
            // Modified Gram–Schmidt, applied twice for stability.
            for _ in 0..2 {
                for (j, v) in basis.iter().enumerate() {
                    let c = dot(&w, v);
                    h[(j, k)] += c;
                    w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
                }
            }
            let wn = norm(&w);
            h[(k + 1, k)] = wn;
            iterations += 1;
            k_used = k + 1;
            let mut col: Vec<f64> = (0..=k + 1).map(|j| h[(j, k)]).collect();
            for j in 0..k {
                let t = cs[j] * col[j] + sn[j] * col[j + 1];
                col[j + 1] = -sn[j] * col[j] + cs[j] * col[j + 1];
                col[j] = t;
            }
            let r = col[k].hypot(col[k + 1]);
            cs[k] = col[k] / r;
            sn[k] = col[k + 1] / r;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            // Stash the rotated column in the upper triangle of a copy.
            for j in 0..=k {
                h[(j, k)] = if j < k { col[j] } else { r };
            }
            h[(k + 1, k)] = 0.0;
            if g[k + 1].abs() <= tol * b_norm || wn == 0.0 {
                break;
            }
            basis.push(w.iter().map(|x| x / wn).collect());
        }
        if condition.is_nan() {
            // Rotations preserve singular values of the Hessenberg matrix.
            let upper = h.view((0, 0), (k_used, k_used)).upper_triangle();
            let sv = upper.singular_values();
            let mx = sv.iter().cloned().fold(0.0, f64::max);
            let mn = sv.iter().cloned().fold(f64::INFINITY, f64::min);
            condition = mx / mn;
        }
        // Back substitution on the rotated (upper-triangular) system.
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= h[(i, j)] * y[j];
            }
            y[i] = s / h[(i, i)];
        }
        for (j, yj) in y.iter().enumerate() {
            for i in 0..n {
                x[i] += yj * basis[j][i] * inv_diag[i];
            }
        }
        op.apply(&x, &mut w);
        for i in 0..n {
            residual[i] = rhs[i] - w[i];
        }
        res_norm = norm(&residual);
    }
    GmresOutcome {
        solution: x,
        relative_residual: res_norm / b_norm,
        iterations,
        condition_estimate: condition,
        converged: res_norm <= tol * b_norm * 10.0,
    }
}
