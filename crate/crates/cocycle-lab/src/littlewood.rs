//! Dyadic square functions on group algebras.
//!
//! The default family starts from a smooth bump `eta` with
//! `1_{B_1} <= eta <= 1_{B_2}` and `delta(s) = eta(s) - eta(2s)`, pinned to
//! the length spectrum through `h_m(x) = delta(2^{-m} sqrt(x))`. The two end
//! members absorb the tails so that `sum_m h_m(s) = 1` exactly for every
//! `s > 0`, and pointwise normalization then makes `sum_m |h_m|^2 = 1`.
//! At `x = 0` every member vanishes; the null part of an element is routed
//! through the conditional expectation instead.
//!
//! ```
//! use cocycle_lab::algebra::AlgebraElement;
//! use cocycle_lab::catalog::zn_roots;
//! use cocycle_lab::length::LengthFunction;
//! use cocycle_lab::littlewood::{dyadic_family, reconstruction_check, Bump};
//! use cocycle_lab::rng::Rng;
//!
//! let (group, c) = zn_roots(8)?;
//! let psi = LengthFunction::new(group.clone(), c.psi().to_vec())?;
//! let family = dyadic_family(Bump::Default, psi.values(), None, true)?;
//!
//! // with a normalized family, reconstruction is exact at p = 2
//! let mut rng = Rng::seed_from(1);
//! let f = AlgebraElement::random(group, &mut rng, &[], true);
//! let rec = reconstruction_check(&psi, &family, &f, 2.0)?;
//! assert!((rec.ratio - 1.0).abs() < 1e-9);
//! # Ok::<(), cocycle_lab::Error>(())
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{lp_norm_of_psd_sqrt, project_j, AlgebraElement};
use crate::error::{Error, Result};
use crate::expr::{smoothstep, Expr};
use crate::length::LengthFunction;
use crate::linalg::{herm_eigenvalues, CMat};

/// Smooth bump with `1_{B_1} <= eta <= 1_{B_2}`.
pub fn eta_bump(s: f64) -> f64 {
    smoothstep(2.0 - s.abs())
}

/// One annular member: `delta(s) = eta(s) - eta(2s)`, supported in
/// `1/2 <= |s| <= 2`.
pub fn delta_bump(s: f64) -> f64 {
    eta_bump(s) - eta_bump(2.0 * s)
}

/// Base profile of a dyadic family.
#[derive(Debug, Clone)]
pub enum Bump {
    /// The built-in `eta(s) - eta(2s)` construction with folded ends.
    Default,
    /// User profile `rho(s)` evaluated at `s = 2^{-m} sqrt(x)`; ends are not
    /// folded, so coverage is the user's responsibility.
    Expression(Expr, String),
}

/// A finite dyadic partition family `h_m`, `m_min <= m <= m_max`.
#[derive(Debug, Clone)]
pub struct DyadicFamily {
    pub bump: Bump,
    pub m_min: i32,
    pub m_max: i32,
    pub normalized: bool,
    /// Set when the requested range had to be widened to cover the spectrum.
    pub extended: bool,
}

impl DyadicFamily {
    /// Raw (unnormalized) member value at `x >= 0`.
    fn raw(&self, m: i32, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let s = x.sqrt();
        match &self.bump {
            Bump::Default => {
                if m == self.m_min {
                    // everything at or below this scale
                    eta_bump(s / 2f64.powi(m))
                } else if m == self.m_max {
                    // everything at or above this scale
                    1.0 - eta_bump(s / 2f64.powi(m - 1))
                } else {
                    delta_bump(s / 2f64.powi(m))
                }
            }
            Bump::Expression(e, _) => {
                let arg = s / 2f64.powi(m);
                e.eval(&[arg]).map(|v| v.re).unwrap_or(f64::NAN)
            }
        }
    }

    /// `h_m(x)`, normalized when the family is normalized.
    pub fn eval(&self, m: i32, x: f64) -> f64 {
        let v = self.raw(m, x);
        if !self.normalized {
            return v;
        }
        let total: f64 = self.members().map(|k| self.raw(k, x).powi(2)).sum();
        if total <= 0.0 {
            0.0
        } else {
            v / total.sqrt()
        }
    }

    pub fn members(&self) -> impl Iterator<Item = i32> {
        self.m_min..=self.m_max
    }

    pub fn len(&self) -> usize {
        (self.m_max - self.m_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `sum_m |h_m(x)|^2`, the quantity that must be 1 after normalization.
    pub fn square_sum(&self, x: f64) -> f64 {
        self.members().map(|m| self.eval(m, x).powi(2)).sum()
    }
}

/// Builds a family covering the positive length spectrum `psi_values`.
///
/// When `m_range` is absent, the range follows `2^m` spanning
/// `[sqrt(min+ psi)/2, 2 sqrt(max psi)]`. A requested range that misses part
/// of the spectrum is widened automatically and flagged in `extended`.
pub fn dyadic_family(
    bump: Bump,
    psi_values: &[f64],
    m_range: Option<(i32, i32)>,
    normalize: bool,
) -> Result<DyadicFamily> {
    let zero_tol = 1e-9 * (1.0 + psi_values.iter().cloned().fold(0.0, f64::max));
    let positive: Vec<f64> = psi_values.iter().cloned().filter(|&v| v > zero_tol).collect();
    let (lo, hi) = if positive.is_empty() {
        (1.0, 4.0)
    } else {
        (
            positive.iter().cloned().fold(f64::INFINITY, f64::min),
            positive.iter().cloned().fold(0.0f64, f64::max),
        )
    };
    let want_min = (lo.sqrt() / 2.0).log2().floor() as i32;
    let want_max = (2.0 * hi.sqrt()).log2().ceil() as i32;
    let (m_min, m_max, extended) = match m_range {
        None => (want_min, want_max, false),
        Some((a, b)) => {
            if a > b {
                return Err(Error::InvalidParameter("m_min must be <= m_max".into()));
            }
            let ext = a > want_min || b < want_max;
            (a.min(want_min), b.max(want_max), ext)
        }
    };
    Ok(DyadicFamily { bump, m_min, m_max, normalized: normalize, extended })
}

/// Square-function norms for `p >= 2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SquareNorms {
    pub column: f64,
    pub row: f64,
    pub rc: f64,
    /// Smallest eigenvalue of the column square sum before clamping.
    pub min_eig: f64,
}

/// Applies the radial member `h_m(psi(.))` to `f`, with `h_m = 0` on the
/// null set.
pub fn member_apply(
    psi: &LengthFunction,
    family: &DyadicFamily,
    m: i32,
    f: &AlgebraElement,
) -> AlgebraElement {
    let zero_tol = psi.zero_tolerance();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(g, c)| {
            let x = psi.value(g);
            if x <= zero_tol {
                Complex64::new(0.0, 0.0)
            } else {
                c * family.eval(m, x)
            }
        })
        .collect();
    AlgebraElement::from_coeffs(f.group().clone(), coeffs).expect("same group")
}

/// Row/column square-function norms
/// `|| (sum_m (T_m f)* (T_m f))^{1/2} ||_p` and its row mirror; `rc` is the
/// max of the two (the `p >= 2` intersection norm).
pub fn square_function_norms(
    psi: &LengthFunction,
    family: &DyadicFamily,
    f: &AlgebraElement,
    p: f64,
) -> Result<SquareNorms> {
    if !(p >= 2.0) {
        return Err(Error::UnsupportedRange(format!(
            "square sums for p < 2 (got {p}) need the sum decomposition, which is out of scope"
        )));
    }
    if !psi.same_group(f.group()) {
        return Err(Error::Validation("length function / element group mismatch".into()));
    }
    let n = f.group().order();
    let mut col_sum = CMat::zeros(n, n);
    let mut row_sum = CMat::zeros(n, n);
    for m in family.members() {
        let tmf = member_apply(psi, family, m, f).to_matrix();
        let adj = tmf.adjoint();
        col_sum = col_sum.add(&adj.matmul(&tmf));
        row_sum = row_sum.add(&tmf.matmul(&adj));
    }
    let col_eigs = herm_eigenvalues(&col_sum);
    let row_eigs = herm_eigenvalues(&row_sum);
    let min_eig = col_eigs
        .first()
        .copied()
        .unwrap_or(0.0)
        .min(row_eigs.first().copied().unwrap_or(0.0));
    let column = lp_norm_of_psd_sqrt(&col_eigs, p)?;
    let row = lp_norm_of_psd_sqrt(&row_eigs, p)?;
    Ok(SquareNorms { column, row, rc: column.max(row), min_eig })
}

/// Two sides of the reconstruction inequality at exponent `p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reconstruction {
    /// `|| J f ||_p` (null part removed).
    pub lhs: f64,
    /// The rc square-function norm.
    pub rhs: f64,
    pub ratio: f64,
}

/// Compares `|| J f ||_p` with the square-function norm; for a normalized
/// family the two agree exactly at `p = 2`.
pub fn reconstruction_check(
    psi: &LengthFunction,
    family: &DyadicFamily,
    f: &AlgebraElement,
    p: f64,
) -> Result<Reconstruction> {
    if !family.normalized {
        return Err(Error::Validation("reconstruction check needs a normalized family".into()));
    }
    let norms = square_function_norms(psi, family, f, p)?;
    let jf = project_j(psi, f)?;
    let lhs = jf.lp_norm(p)?;
    let rhs = norms.rc;
    let ratio = if rhs > 0.0 { lhs / rhs } else { f64::NAN };
    Ok(Reconstruction { lhs, rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_cyclic;
    use crate::rng::Rng;

    fn roots_z8() -> LengthFunction {
        let (g, c) = crate::catalog::zn_roots(8).unwrap();
        LengthFunction::new(g, c.psi().to_vec()).unwrap()
    }

    #[test]
    fn partition_of_unity_after_normalization() {
        let psi = roots_z8();
        let fam = dyadic_family(Bump::Default, psi.values(), None, true).unwrap();
        for &x in psi.values() {
            if x > 1e-9 {
                assert!((fam.square_sum(x) - 1.0).abs() < 1e-10, "x={x}");
            } else {
                assert_eq!(fam.square_sum(x), 0.0);
            }
        }
        // also on a continuum of points inside the covered range
        for k in 0..200 {
            let x = 0.05 + 0.05 * k as f64;
            assert!((fam.square_sum(x) - 1.0).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn unnormalized_sum_telescopes_to_one() {
        let psi = roots_z8();
        let fam = dyadic_family(Bump::Default, psi.values(), None, false).unwrap();
        for k in 1..100 {
            let x = 0.07 * k as f64;
            let total: f64 = fam.members().map(|m| fam.eval(m, x)).sum();
            assert!((total - 1.0).abs() < 1e-12, "x={x} total={total}");
        }
    }

    #[test]
    fn single_level_group_concentrates_mass() {
        // Z_2 with psi = (0, 4): sqrt(psi) = 2, only the member with 2^m
        // near 2 carries the annular mass
        let g = build_cyclic(2).unwrap();
        let psi = LengthFunction::new(g, vec![0.0, 4.0]).unwrap();
        let fam = dyadic_family(Bump::Default, psi.values(), Some((-2, 4)), false).unwrap();
        let masses: Vec<(i32, f64)> = fam.members().map(|m| (m, fam.eval(m, 4.0))).collect();
        for (m, v) in &masses {
            if *m == 1 {
                assert!((v - 1.0).abs() < 1e-12, "m=1 carries all mass, got {v}");
            } else if *m > fam.m_min && *m < fam.m_max {
                assert!(v.abs() < 1e-12, "member {m} should vanish, got {v}");
            }
        }
        // x = 0 convention
        for m in fam.members() {
            assert_eq!(fam.eval(m, 0.0), 0.0);
        }
    }

    #[test]
    fn range_extension_reported() {
        let psi = roots_z8();
        let fam = dyadic_family(Bump::Default, psi.values(), Some((5, 6)), true).unwrap();
        assert!(fam.extended);
        assert!(fam.m_min < 5);
    }

    #[test]
    fn plancherel_reconstruction_at_p2() {
        let psi = roots_z8();
        let fam = dyadic_family(Bump::Default, psi.values(), None, true).unwrap();
        let mut rng = Rng::seed_from(51);
        for _ in 0..10 {
            let f = AlgebraElement::random(psi.group().clone(), &mut rng, &[], false);
            let rec = reconstruction_check(&psi, &fam, &f, 2.0).unwrap();
            assert!((rec.ratio - 1.0).abs() < 1e-9, "ratio {}", rec.ratio);
            // column^2 = sum_m ||T_m f||_2^2 = ||Jf||_2^2 by Plancherel
            let norms = square_function_norms(&psi, &fam, &f, 2.0).unwrap();
            let oracle: f64 = (0..8)
                .map(|g| {
                    let x = psi.value(g);
                    if x <= psi.zero_tolerance() {
                        0.0
                    } else {
                        let s: f64 = fam.members().map(|m| fam.eval(m, x).powi(2)).sum();
                        s * f.coeff(g).norm_sqr()
                    }
                })
                .sum();
            assert!((norms.column.powi(2) - oracle).abs() < 1e-10);
            assert!(norms.min_eig > -1e-10);
        }
    }

    #[test]
    fn single_frequency_column_norm_is_one() {
        let psi = roots_z8();
        let fam = dyadic_family(Bump::Default, psi.values(), None, true).unwrap();
        let f = AlgebraElement::lambda(psi.group().clone(), 3);
        let norms = square_function_norms(&psi, &fam, &f, 4.0).unwrap();
        assert!((norms.column - 1.0).abs() < 1e-10);
        assert!((norms.rc - 1.0).abs() < 1e-10);
    }

    #[test]
    fn null_supported_element_gives_zero() {
        let psi = roots_z8();
        let fam = dyadic_family(Bump::Default, psi.values(), None, true).unwrap();
        let f = AlgebraElement::lambda(psi.group().clone(), 0).scale(Complex64::new(3.0, 1.0));
        let norms = square_function_norms(&psi, &fam, &f, 2.0).unwrap();
        assert_eq!(norms.rc, 0.0);
        let rec = reconstruction_check(&psi, &fam, &f, 2.0).unwrap();
        assert_eq!(rec.lhs, 0.0);
    }

    #[test]
    fn p_below_two_rejected() {
        let psi = roots_z8();
        let fam = dyadic_family(Bump::Default, psi.values(), None, true).unwrap();
        let f = AlgebraElement::lambda(psi.group().clone(), 1);
        assert!(matches!(
            square_function_norms(&psi, &fam, &f, 1.5),
            Err(Error::UnsupportedRange(_))
        ));
    }

    #[test]
    fn monotone_in_members_at_p_infinity() {
        let psi = roots_z8();
        let small = DyadicFamily {
            bump: Bump::Default,
            m_min: 0,
            m_max: 1,
            normalized: false,
            extended: false,
        };
        let big = DyadicFamily { m_max: 3, ..small.clone() };
        let mut rng = Rng::seed_from(52);
        for _ in 0..5 {
            let f = AlgebraElement::random(psi.group().clone(), &mut rng, &[], false);
            let a = square_function_norms(&psi, &small, &f, f64::INFINITY).unwrap();
            let b = square_function_norms(&psi, &big, &f, f64::INFINITY).unwrap();
            assert!(b.column + 1e-10 >= a.column);
        }
    }

    #[test]
    fn derivative_envelope_of_default_family() {
        // finite-difference check of sum_m |d^k/dx^k h_m(x)|^2 <= c |x|^{-2k}
        let fam = DyadicFamily {
            bump: Bump::Default,
            m_min: -12,
            m_max: 12,
            normalized: false,
            extended: false,
        };
        let mut worst = [0.0f64; 3];
        for i in 0..40 {
            let x = 10f64.powf(-2.0 + 4.0 * i as f64 / 39.0);
            let h = 1e-5 * x;
            for k in 1..=2usize {
                let mut sq = 0.0;
                for m in fam.members() {
                    let d = match k {
                        1 => (fam.eval(m, x + h) - fam.eval(m, x - h)) / (2.0 * h),
                        _ => {
                            (fam.eval(m, x + h) - 2.0 * fam.eval(m, x) + fam.eval(m, x - h))
                                / (h * h)
                        }
                    };
                    sq += d * d;
                }
                worst[k] = worst[k].max(sq * x.powi(2 * k as i32));
            }
        }
        // empirical envelope constants stay bounded
        assert!(worst[1] < 50.0, "k=1 envelope {}", worst[1]);
        assert!(worst[2] < 5e3, "k=2 envelope {}", worst[2]);
    }
}
