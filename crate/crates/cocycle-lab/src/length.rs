//! Length functions and their negativity certificates.
//!
//! A length function vanishes at the identity, is symmetric under inversion
//! and is conditionally negative; by Schoenberg's theorem this is exactly
//! the condition making `exp(-t psi)` positive semidefinite for every
//! `t >= 0`. Both facts are checked here by explicit eigendecomposition.
//!
//! ```
//! use cocycle_lab::group::build_cyclic;
//! use cocycle_lab::length::{is_conditionally_negative, schoenberg_check, LengthFunction};
//!
//! let z4 = build_cyclic(4)?;
//! let roots = LengthFunction::new(z4.clone(), vec![0.0, 2.0, 4.0, 2.0])?;
//! assert!(is_conditionally_negative(&roots, 1e-10).pass);
//!
//! // (0, 1, 10, 1) is not a length function: the compressed kernel has a
//! // positive eigenvalue (8), and exp(-t psi) loses positivity at small t
//! let bad = LengthFunction::new(z4, vec![0.0, 1.0, 10.0, 1.0])?;
//! let cert = is_conditionally_negative(&bad, 1e-10);
//! assert!(!cert.pass && (cert.min_eig + 8.0).abs() < 1e-9);
//! let verdicts = schoenberg_check(&bad, &[1e-3, 1.0], 1e-10)?;
//! assert!(!verdicts[0].psd);
//! # Ok::<(), cocycle_lab::Error>(())
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupRef};
use crate::linalg::{sym_eigen, Mat};
use crate::rng::Rng;

/// Which Gromov form / cocycle convention to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `K(g,h) = (psi(g) + psi(h) - psi(g^{-1} h))/2`
    Left,
    /// `K(g,h) = (psi(g) + psi(h) - psi(g h^{-1}))/2`
    Right,
}

/// A candidate length function on a finite group.
#[derive(Debug, Clone)]
pub struct LengthFunction {
    group: GroupRef,
    values: Vec<f64>,
}

impl LengthFunction {
    /// Validates nonnegativity, `psi(e) = 0` and symmetry before accepting.
    pub fn new(group: GroupRef, values: Vec<f64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Validation(format!(
                "psi has {} entries for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Validation("psi must be finite and nonnegative".into()));
        }
        let scale = 1.0 + values.iter().cloned().fold(0.0, f64::max);
        if values[group.identity()].abs() > 1e-12 * scale {
            return Err(Error::Validation("psi(e) must vanish".into()));
        }
        for g in 0..group.order() {
            let d = (values[g] - values[group.inv(g)]).abs();
            if d > 1e-10 * scale {
                return Err(Error::Validation(format!(
                    "psi({g}) != psi(inv {g}): difference {d:.3e}"
                )));
            }
        }
        Ok(LengthFunction { group, values })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, g: usize) -> f64 {
        self.values[g]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Threshold below which `psi(g)` counts as zero (membership in `G_0`).
    pub fn zero_tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.max_value())
    }

    /// Indices of the null set `G_0 = {g : psi(g) = 0}`.
    pub fn zero_set(&self) -> Vec<usize> {
        let tol = self.zero_tolerance();
        (0..self.group.order()).filter(|&g| self.values[g] <= tol).collect()
    }

    pub fn same_group(&self, other: &FiniteGroup) -> bool {
        *self.group == *other
    }

    pub fn to_json(&self) -> LengthJson {
        LengthJson { values: self.values.clone() }
    }

    pub fn from_json(group: GroupRef, j: &LengthJson) -> Result<Self> {
        LengthFunction::new(group, j.values.clone())
    }
}

/// Wire format: the value vector in element order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthJson {
    pub values: Vec<f64>,
}

/// The Gromov form of `psi` as an `N x N` matrix.
pub fn gromov_form(psi: &LengthFunction, side: Side) -> Mat {
    let g = psi.group();
    let n = g.order();
    Mat::from_fn(n, n, |a, b| {
        let arg = match side {
            Side::Left => g.mul(g.inv(a), b),
            Side::Right => g.mul(a, g.inv(b)),
        };
        0.5 * (psi.value(a) + psi.value(b) - psi.value(arg))
    })
}

/// Result of the conditional-negativity test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NegativityCertificate {
    pub pass: bool,
    /// Smallest eigenvalue of `-P M P` where `M = [psi(g^{-1}h)]` and `P`
    /// projects onto mean-zero vectors; `pass` iff `min_eig >= -tol`.
    pub min_eig: f64,
    pub tol: f64,
}

/// Tests `sum beta = 0  =>  sum conj(beta_g) beta_h psi(g^{-1}h) <= 0` by
/// compressing `M` to the mean-zero subspace and bounding its spectrum.
pub fn is_conditionally_negative(psi: &LengthFunction, tol: f64) -> NegativityCertificate {
    let g = psi.group();
    let n = g.order();
    let m = Mat::from_fn(n, n, |a, b| psi.value(g.mul(g.inv(a), b)));
    // P = I - J/N, then S = P M P (symmetric since psi is symmetric)
    let p = Mat::from_fn(n, n, |a, b| if a == b { 1.0 - 1.0 / n as f64 } else { -1.0 / n as f64 });
    let s = p.matmul(&m).matmul(&p);
    let (vals, _) = sym_eigen(&s);
    let max_eig = vals.last().copied().unwrap_or(0.0);
    NegativityCertificate { pass: max_eig <= tol, min_eig: -max_eig, tol }
}

/// Per-`t` verdict of the Schoenberg positivity test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchoenbergVerdict {
    pub t: f64,
    pub min_eig: f64,
    pub psd: bool,
}

/// Checks that `[exp(-t psi(g^{-1}h))]` is PSD for each requested `t`.
pub fn schoenberg_check(psi: &LengthFunction, t_list: &[f64], tol: f64) -> Result<Vec<SchoenbergVerdict>> {
    if t_list.iter().any(|t| *t < 0.0) {
        return Err(Error::InvalidParameter("schoenberg_check needs t >= 0".into()));
    }
    let g = psi.group();
    let n = g.order();
    Ok(t_list
        .iter()
        .map(|&t| {
            let m = Mat::from_fn(n, n, |a, b| (-t * psi.value(g.mul(g.inv(a), b))).exp());
            let (vals, _) = sym_eigen(&m);
            let min_eig = vals.first().copied().unwrap_or(0.0);
            SchoenbergVerdict { t, min_eig, psd: min_eig >= -tol }
        })
        .collect())
}

/// 13-point logarithmic grid `10^{-3} .. 10^{3}` used by the Schoenberg
/// consistency checks.
pub fn schoenberg_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 13)
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// A random certified length function: `psi(g) = sum_i w_i |u_i(g .) - u_i|^2 / 2`
/// over random vectors `u_i` translated by the regular representation. This
/// is conditionally negative by construction (it is the length of an inner
/// cocycle), so it can seed tests without a rejection loop.
pub fn random_inner_length(group: &GroupRef, vectors: usize, rng: &mut Rng) -> LengthFunction {
    let n = group.order();
    let mut values = vec![0.0; n];
    for _ in 0..vectors.max(1) {
        let u = rng.normal_vec(n);
        let w = 0.25 + rng.uniform();
        for g in 0..n {
            let mut s = 0.0;
            for h in 0..n {
                let d = u[group.mul(g, h)] - u[h];
                s += d * d;
            }
            values[g] += 0.5 * w * s;
        }
    }
    values[0] = 0.0;
    // symmetrize exactly against rounding
    for g in 0..n {
        let gi = group.inv(g);
        let avg = 0.5 * (values[g] + values[gi]);
        values[g] = avg;
        values[gi] = avg;
    }
    // normalize to max 4 so absolute tolerances mean the same at every order
    let max = values.iter().cloned().fold(0.0, f64::max);
    if max > 0.0 {
        for v in values.iter_mut() {
            *v *= 4.0 / max;
        }
    }
    LengthFunction::new(group.clone(), values).expect("inner length is valid by construction")
}

/// Perturbs a length function until the negativity certificate fails while
/// keeping `psi(e) = 0`, symmetry and nonnegativity. Returns the perturbed
/// function together with its (failing) certificate.
pub fn perturb_to_failure(
    psi: &LengthFunction,
    rng: &mut Rng,
    margin: f64,
) -> (LengthFunction, NegativityCertificate) {
    let group = psi.group().clone();
    let n = group.order();
    let scale = 1.0 + psi.max_value();
    let mut amplitude = 0.2 * scale;
    loop {
        let mut values = psi.values().to_vec();
        for g in 1..n {
            values[g] = (values[g] + amplitude * rng.normal()).abs();
        }
        values[0] = 0.0;
        for g in 0..n {
            let gi = group.inv(g);
            let avg = 0.5 * (values[g] + values[gi]);
            values[g] = avg;
            values[gi] = avg;
        }
        if let Ok(cand) = LengthFunction::new(group.clone(), values) {
            let cert = is_conditionally_negative(&cand, 0.0);
            if !cert.pass && cert.min_eig < -margin {
                return (cand, cert);
            }
        }
        amplitude *= 1.5;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_cyclic;

    fn roots_length_z4() -> LengthFunction {
        let g = build_cyclic(4).unwrap();
        LengthFunction::new(g, vec![0.0, 2.0, 4.0, 2.0]).unwrap()
    }

    #[test]
    fn gromov_form_z4_roots() {
        let psi = roots_length_z4();
        let k = gromov_form(&psi, Side::Left);
        assert_eq!(k[(1, 2)], 2.0);
        assert_eq!(k[(1, 3)], 0.0);
        assert_eq!(k[(2, 2)], 4.0);
        assert_eq!(k[(0, 0)], 0.0);
        // identity row vanishes
        for b in 0..4 {
            assert_eq!(k[(0, b)], 0.0);
        }
        // symmetric
        assert!(k.max_abs_diff(&k.transpose()) == 0.0);
        // abelian: left equals right
        let kr = gromov_form(&psi, Side::Right);
        assert!(k.max_abs_diff(&kr) < 1e-15);
    }

    #[test]
    fn negativity_certificates() {
        let psi = roots_length_z4();
        assert!(is_conditionally_negative(&psi, 1e-10).pass);

        let g = build_cyclic(4).unwrap();
        let zero = LengthFunction::new(g.clone(), vec![0.0; 4]).unwrap();
        assert!(is_conditionally_negative(&zero, 1e-10).pass);

        // eigenvalue oracle: M is circulant with symbol values
        // {12, -10, 8, -10}; the mean-zero compression has max eigenvalue 8,
        // so (0,1,10,1) is NOT conditionally negative.
        let bad = LengthFunction::new(g, vec![0.0, 1.0, 10.0, 1.0]).unwrap();
        let cert = is_conditionally_negative(&bad, 1e-10);
        assert!(!cert.pass);
        assert!((cert.min_eig - (-8.0)).abs() < 1e-9, "min_eig {}", cert.min_eig);
    }

    #[test]
    fn schoenberg_grid_behaviour() {
        let psi = roots_length_z4();
        // t = 0 gives the all-ones matrix
        let v = schoenberg_check(&psi, &[0.0], 1e-10).unwrap();
        assert!(v[0].psd);
        for v in schoenberg_check(&psi, &[0.1, 1.0, 10.0], 1e-10).unwrap() {
            assert!(v.psd, "t={} min_eig={}", v.t, v.min_eig);
        }
        // failing length must fail somewhere on the log grid
        let g = build_cyclic(4).unwrap();
        let bad = LengthFunction::new(g, vec![0.0, 1.0, 10.0, 1.0]).unwrap();
        let verdicts = schoenberg_check(&bad, &schoenberg_grid(), 1e-10).unwrap();
        assert!(verdicts.iter().any(|v| !v.psd));
        assert!(schoenberg_check(&psi, &[-1.0], 1e-10).is_err());
    }

    #[test]
    fn random_inner_lengths_are_certified() {
        let mut rng = Rng::seed_from(5);
        for spec in [3usize, 6, 8] {
            let g = build_cyclic(spec).unwrap();
            for i in 0..5 {
                let psi = random_inner_length(&g, 1 + i % 3, &mut rng);
                assert!(is_conditionally_negative(&psi, 1e-8).pass);
            }
        }
    }

    #[test]
    fn perturbation_fails_certificate() {
        let mut rng = Rng::seed_from(6);
        let g = build_cyclic(6).unwrap();
        let psi = random_inner_length(&g, 2, &mut rng);
        let (bad, cert) = perturb_to_failure(&psi, &mut rng, 1e-4);
        assert!(!cert.pass);
        assert!(!is_conditionally_negative(&bad, 0.0).pass);
    }

    #[test]
    fn invalid_lengths_rejected() {
        let g = build_cyclic(4).unwrap();
        assert!(LengthFunction::new(g.clone(), vec![1.0, 2.0, 4.0, 2.0]).is_err()); // psi(e) != 0
        assert!(LengthFunction::new(g.clone(), vec![0.0, 2.0, 4.0, 3.0]).is_err()); // asymmetric
        assert!(LengthFunction::new(g, vec![0.0, -2.0, 4.0, -2.0]).is_err()); // negative
    }
}
