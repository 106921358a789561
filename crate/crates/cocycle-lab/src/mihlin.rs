//! Numerical Mihlin-smoothness estimates for lifting symbols.
//!
//! Derivatives are central finite differences with step proportional to the
//! shell radius, sampled on log-spaced shells with quasi-random directions.
//! Three weighted suprema are reported per derivative order: the classical
//! `|xi|^{|beta|} |d^beta m|` and the two epsilon-shifted envelopes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Shell sampling parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShellConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub shells: usize,
    pub directions: usize,
    pub seed: u64,
    /// Finite-difference step relative to the shell radius.
    pub step_rel: f64,
}

impl Default for ShellConfig {
    fn default() -> Self {
        ShellConfig {
            r_min: 1e-3,
            r_max: 1e3,
            shells: 13,
            directions: 16,
            seed: 0x51e1,
            step_rel: 1e-4,
        }
    }
}

/// Supremum estimates for one derivative order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub order: usize,
    /// `sup |xi|^{|beta|} |d^beta m|`
    pub sup_classic: f64,
    /// `sup |xi|^{|beta| + eps} |d^beta m|`
    pub sup_plus_eps: f64,
    /// `sup |xi|^{|beta| - eps} |d^beta m|`
    pub sup_minus_eps: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MihlinReport {
    pub dim: usize,
    pub order_checked: usize,
    pub eps: f64,
    pub shells: ShellConfig,
    pub per_order: Vec<OrderEstimate>,
}

impl MihlinReport {
    /// Classical Mihlin verdict: all orders obey
    /// `|d^beta m| <= threshold |xi|^{-|beta|}` on the samples.
    pub fn passes_classic(&self, threshold: f64) -> bool {
        self.per_order.iter().all(|o| o.sup_classic <= threshold)
    }

    /// Two-sided epsilon envelope verdict
    /// (`|d^beta m| <= threshold min(|xi|^{-|beta|+eps}, |xi|^{-|beta|-eps})`).
    pub fn passes_eps_envelope(&self, threshold: f64) -> bool {
        self.per_order
            .iter()
            .all(|o| o.sup_plus_eps.max(o.sup_minus_eps) <= threshold)
    }
}

/// Default derivative order `[n/2] + 1`.
pub fn default_order(n: usize) -> usize {
    n / 2 + 1
}

fn multi_indices(dim: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; dim];
    fn rec(cur: &mut Vec<usize>, pos: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[pos] = k;
            rec(cur, pos + 1, left - k, out);
        }
    }
    rec(&mut cur, 0, max_total, &mut out);
    out.retain(|beta| beta.iter().sum::<usize>() <= max_total);
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Central finite difference of the mixed partial `d^beta m` at `xi` with
/// per-dimension spacing `h`.
fn finite_difference(
    m: &dyn Fn(&[f64]) -> Complex64,
    xi: &[f64],
    beta: &[usize],
    h: f64,
) -> Complex64 {
    // stencil: tensor product of 1-d central differences
    let mut points: Vec<(f64, Vec<f64>)> = vec![(1.0, xi.to_vec())];
    for (dim, &k) in beta.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(points.len() * (k + 1));
        for (w, p) in &points {
            for j in 0..=k {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let coeff = sign * binomial(k, j);
                let mut q = p.clone();
                q[dim] += (k as f64 / 2.0 - j as f64) * h;
                next.push((w * coeff, q));
            }
        }
        points = next;
    }
    let total: usize = beta.iter().sum();
    let scale = h.powi(total as i32);
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, p) in &points {
        acc += m(p) * *w;
    }
    acc / scale
}

/// Estimates Mihlin sup constants for a symbol on `R^dim` by sampled finite
/// differences. Errors out (naming the sample) if any derivative sample is
/// non-finite.
pub fn mihlin_check(
    m: &dyn Fn(&[f64]) -> Complex64,
    dim: usize,
    order: usize,
    eps: f64,
    shells: &ShellConfig,
) -> Result<MihlinReport> {
    if dim == 0 {
        return Err(Error::InvalidParameter("symbol dimension must be >= 1".into()));
    }
    if !(shells.r_min > 0.0 && shells.r_max > shells.r_min) {
        return Err(Error::InvalidParameter("shell radii must satisfy 0 < r_min < r_max".into()));
    }
    let radii = crate::length::log_grid(shells.r_min, shells.r_max, shells.shells.max(2));
    let betas = multi_indices(dim, order);
    let mut per_order: Vec<OrderEstimate> = (0..=order)
        .map(|o| OrderEstimate { order: o, sup_classic: 0.0, sup_plus_eps: 0.0, sup_minus_eps: 0.0 })
        .collect();

    let mut rng = Rng::child(shells.seed, "mihlin-dirs", 0);
    for &r in &radii {
        let h = shells.step_rel * r;
        for _ in 0..shells.directions.max(1) {
            let dir = rng.unit_vector(dim);
            let xi: Vec<f64> = dir.iter().map(|d| d * r).collect();
            for beta in &betas {
                let total: usize = beta.iter().sum();
                let d = finite_difference(m, &xi, beta, h);
                if !d.re.is_finite() || !d.im.is_finite() {
                    return Err(Error::SymbolEvaluation {
                        at: format!("xi = {xi:?}, beta = {beta:?}"),
                        detail: "non-finite derivative sample".into(),
                    });
                }
                let mag = d.norm();
                let est = &mut per_order[total];
                est.sup_classic = est.sup_classic.max(mag * r.powi(total as i32));
                est.sup_plus_eps = est.sup_plus_eps.max(mag * r.powf(total as f64 + eps));
                est.sup_minus_eps = est.sup_minus_eps.max(mag * r.powf(total as f64 - eps));
            }
        }
    }
    Ok(MihlinReport { dim, order_checked: order, eps, shells: shells.clone(), per_order })
}
