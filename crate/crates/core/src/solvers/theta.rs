//! Weighted Lovasz theta by an alternating-direction augmented Lagrangian
//! method on the SDP
//!
//! ```text
//! max <W, X>  s.t.  tr X = 1,  X_uv = 0 for uv in E,  X PSD,   W = sqrt(w) sqrt(w)^T
//! ```
//!
//! Every reported bound is certified: the upper bound is `lambda_max(W + Z)`
//! for the current edge multipliers `Z`, and the lower bound comes from
//! projecting the iterate onto an exactly feasible matrix.

use serde::Serialize;

use super::eigen::jacobi_eigen;
use crate::error::{Error, Result};
use crate::graph::ExclusivityGraph;

/// Largest graph accepted by [`lovasz_theta`].
pub const THETA_CAP: usize = 60;
pub const GAP_TARGET: f64 = 1e-6;
/// A run that stalls or exhausts its budget still counts as converged
/// when its gap is within this.
pub const ACCEPTABLE_GAP: f64 = 1e-5;
/// Checks without a 1% gap improvement before a run counts as stalled.
const STALL_CHECKS: usize = 40;
pub const MAX_ITERATIONS: usize = 50_000;
const CHECK_EVERY: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaResult {
    /// Certified lower bound on theta.
    #[serde(rename = "primal")]
    pub primal_value: f64,
    /// Certified upper bound on theta.
    #[serde(rename = "dual")]
    pub dual_value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl ThetaResult {
    fn exact(value: f64) -> Self {
        ThetaResult {
            primal_value: value,
            dual_value: value,
            gap: 0.0,
            iterations: 0,
            converged: true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ThetaOptions {
    pub gap_target: f64,
    pub max_iterations: usize,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        ThetaOptions {
            gap_target: GAP_TARGET,
            max_iterations: MAX_ITERATIONS,
        }
    }
}

pub fn lovasz_theta(g: &ExclusivityGraph, weights: &[f64]) -> Result<ThetaResult> {
    lovasz_theta_with(g, weights, ThetaOptions::default())
}

pub fn lovasz_theta_with(g: &ExclusivityGraph, weights: &[f64], opts: ThetaOptions) -> Result<ThetaResult> {
    if weights.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: weights.len(),
        });
    }
    if g.n() > THETA_CAP {
        return Err(Error::CapExceeded {
            what: "theta vertices",
            size: g.n(),
            cap: THETA_CAP,
        });
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidParameters(format!(
            "theta weights must be finite and nonnegative, got {w}"
        )));
    }
    // Zero-weight vertices never contribute and are dropped.
    let keep: Vec<usize> = (0..g.n()).filter(|&v| weights[v] > 0.0).collect();
    if keep.is_empty() {
        return Ok(ThetaResult::exact(0.0));
    }
    let sub = g.induced_subgraph(&keep)?;
    let w: Vec<f64> = keep.iter().map(|&v| weights[v]).collect();
    if sub.edge_count() == 0 {
        return Ok(ThetaResult::exact(w.iter().sum()));
    }
    let edges: Vec<(usize, usize)> = sub.edges().iter().map(|&(u, v, _)| (u, v)).collect();
    if edges.len() == w.len() * (w.len() - 1) / 2 {
        return Ok(ThetaResult::exact(w.iter().cloned().fold(0.0, f64::max)));
    }
    Admm::new(&w, &edges).run(opts)
}

struct Admm<'a> {
    n: usize,
    s: Vec<f64>,
    edges: &'a [(usize, usize)],
    /// `C = -W`, row-major.
    c: Vec<f64>,
    x: Vec<f64>,
    y0: f64,
    /// Off-diagonal multipliers `Z_uv` for each edge (the adjoint action on
    /// entry (u, v)).
    z: Vec<f64>,
    mu: f64,
}

impl<'a> Admm<'a> {
    fn new(w: &[f64], edges: &'a [(usize, usize)]) -> Self {
        let n = w.len();
        let s: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = -s[i] * s[j];
            }
        }
        let mut x = vec![0.0; n * n];
        for i in 0..n {
            x[i * n + i] = 1.0 / n as f64;
        }
        let scale = w.iter().cloned().fold(0.0, f64::max);
        Admm {
            n,
            s,
            edges,
            c,
            x,
            y0: 0.0,
            z: vec![0.0; edges.len()],
            mu: 1.0 / scale.max(1e-12),
        }
    }

    fn run(mut self, opts: ThetaOptions) -> Result<ThetaResult> {
        let n = self.n;
        let mut sm = vec![0.0; n * n];
        let mut best_lower = f64::NEG_INFINITY;
        let mut best_upper = f64::INFINITY;
        let mut pinf_acc = 0.0;
        let mut dinf_acc = 0.0;
        let mut stall_ref = f64::INFINITY;
        let mut stalled = 0;
        for it in 1..=opts.max_iterations {
            // y-update with AA* = diag(n, 1, ..., 1).
            let tr_x: f64 = (0..n).map(|i| self.x[i * n + i]).sum();
            let tr_sc: f64 = (0..n).map(|i| sm[i * n + i] - self.c[i * n + i]).sum();
            self.y0 = -(self.mu * (tr_x - 1.0) + tr_sc) / n as f64;
            for (k, &(u, v)) in self.edges.iter().enumerate() {
                let idx = u * n + v;
                self.z[k] = -(self.mu * self.x[idx] + sm[idx] - self.c[idx]);
            }
            // V = C - A*(y) - mu X
            let mut vm = vec![0.0; n * n];
            for i in 0..n * n {
                vm[i] = self.c[i] - self.mu * self.x[i];
            }
            for i in 0..n {
                vm[i * n + i] -= self.y0;
            }
            for (k, &(u, v)) in self.edges.iter().enumerate() {
                vm[u * n + v] -= self.z[k];
                vm[v * n + u] -= self.z[k];
            }
            let eig = jacobi_eigen(&vm, n)?;
            let mut x_new = vec![0.0; n * n];
            sm.iter_mut().for_each(|v| *v = 0.0);
            for (lam, vec) in eig.values.iter().zip(&eig.vectors) {
                let target = if *lam > 0.0 { &mut sm } else { &mut x_new };
                let coef = if *lam > 0.0 { *lam } else { -*lam / self.mu };
                if coef == 0.0 {
                    continue;
                }
                for i in 0..n {
                    let ci = coef * vec[i];
                    for j in 0..n {
                        target[i * n + j] += ci * vec[j];
                    }
                }
            }
            let dinf = self.mu
                * x_new
                    .iter()
                    .zip(&self.x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
            self.x = x_new;
            let tr_x: f64 = (0..n).map(|i| self.x[i * n + i]).sum();
            let pinf = ((tr_x - 1.0).powi(2)
                + self
                    .edges
                    .iter()
                    .map(|&(u, v)| 2.0 * self.x[u * n + v].powi(2))
                    .sum::<f64>())
            .sqrt();
            pinf_acc += pinf;
            dinf_acc += dinf;
            if it % CHECK_EVERY == 0 || it == opts.max_iterations {
                best_upper = best_upper.min(self.dual_bound()?);
                best_lower = best_lower.max(self.primal_bound()?);
                let gap = best_upper - best_lower;
                if gap < 0.99 * stall_ref {
                    stall_ref = gap;
                    stalled = 0;
                } else {
                    stalled += 1;
                }
                let settled = gap <= ACCEPTABLE_GAP.max(opts.gap_target)
                    && (stalled >= STALL_CHECKS || it == opts.max_iterations);
                if gap <= opts.gap_target || settled {
                    return Ok(ThetaResult {
                        primal_value: best_lower,
                        dual_value: best_upper,
                        gap: gap.max(0.0),
                        iterations: it,
                        converged: true,
                    });
                }
                // Balance the residuals by rescaling the penalty.
                if pinf_acc > 4.0 * dinf_acc {
                    self.mu *= 1.6;
                } else if dinf_acc > 4.0 * pinf_acc {
                    self.mu /= 1.6;
                }
                pinf_acc = 0.0;
                dinf_acc = 0.0;
            }
        }
        Err(Error::NonConvergence {
            best: Box::new(ThetaResult {
                primal_value: best_lower,
                dual_value: best_upper,
                gap: best_upper - best_lower,
                iterations: opts.max_iterations,
                converged: false,
            }),
        })
    }

    /// `lambda_max(W + Z)` bounds theta from above for any edge multipliers.
    fn dual_bound(&self) -> Result<f64> {
        let n = self.n;
        let mut m: Vec<f64> = self.c.iter().map(|v| -v).collect();
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            m[u * n + v] += self.z[k];
            m[v * n + u] += self.z[k];
        }
        let e = jacobi_eigen(&m, n)?;
        let top = e.values[n - 1];
        Ok(top + 1e-12 * top.abs().max(1.0))
    }

    /// Objective of `(X_p + eps I) / tr(...)`, which is feasible when `X_p` is
    /// the iterate with edge entries zeroed and `eps = max(0, -lambda_min)`.
    fn primal_bound(&self) -> Result<f64> {
        let n = self.n;
        let mut xp = self.x.clone();
        for &(u, v) in self.edges {
            xp[u * n + v] = 0.0;
            xp[v * n + u] = 0.0;
        }
        let e = jacobi_eigen(&xp, n)?;
        let eps = (-e.values[0]).max(0.0) * (1.0 + 1e-10) + 1e-15;
        let tr: f64 = (0..n).map(|i| xp[i * n + i]).sum::<f64>() + n as f64 * eps;
        if tr <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let mut obj = 0.0;
        for i in 0..n {
            for j in 0..n {
                let xij = xp[i * n + j] + if i == j { eps } else { 0.0 };
                obj += self.s[i] * self.s[j] * xij;
            }
        }
        let value = obj / tr;
        Ok(value - 1e-12 * value.abs().max(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphKind, Side};
    use std::f64::consts::PI;

    fn theta_unit(g: &ExclusivityGraph) -> ThetaResult {
        lovasz_theta(g, &vec![1.0; g.n()]).unwrap()
    }

    fn assert_brackets(r: &ThetaResult, expected: f64) {
        assert!(r.converged);
        assert!(r.gap <= GAP_TARGET + 1e-12, "gap {}", r.gap);
        assert!(r.primal_value <= expected + 1e-9, "{r:?} vs {expected}");
        assert!(r.dual_value >= expected - 1e-9, "{r:?} vs {expected}");
    }

    #[test]
    fn five_cycle() {
        assert_brackets(&theta_unit(&GraphKind::Cycle(5).build().unwrap()), 5f64.sqrt());
    }

    #[test]
    fn odd_cycles_closed_form() {
        for n in [7usize, 9] {
            let nf = n as f64;
            let expected = nf * (PI / nf).cos() / (1.0 + (PI / nf).cos());
            assert_brackets(&theta_unit(&GraphKind::Cycle(n).build().unwrap()), expected);
        }
    }

    #[test]
    fn perfect_graphs_equal_alpha() {
        assert_brackets(&theta_unit(&GraphKind::Cycle(6).build().unwrap()), 3.0);
        let k = GraphKind::Complete(4).build().unwrap();
        assert_eq!(theta_unit(&k).dual_value, 1.0);
        let e = GraphKind::Edgeless(3).build().unwrap();
        assert_eq!(lovasz_theta(&e, &[1.0, 2.0, 0.5]).unwrap().dual_value, 3.5);
    }

    #[test]
    fn weighted_path() {
        // P3 with weights (1, 3, 1): alpha_w = theta_w = 3.
        let g = ExclusivityGraph::abstract_graph(3, &[(0, 1), (1, 2)], Side::B).unwrap();
        assert_brackets(&lovasz_theta(&g, &[1.0, 3.0, 1.0]).unwrap(), 3.0);
    }

    #[test]
    fn zero_weights_are_dropped() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        // removing one vertex leaves P4 with alpha = 2
        assert_brackets(&lovasz_theta(&c5, &[1.0, 1.0, 1.0, 1.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn rejects_bad_weights() {
        let c5 = GraphKind::Cycle(5).build().unwrap();
        assert!(lovasz_theta(&c5, &[1.0; 4]).is_err());
        assert!(lovasz_theta(&c5, &[1.0, 1.0, -1.0, 1.0, 1.0]).is_err());
    }
}
