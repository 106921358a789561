//! Exact group von Neumann algebra numerics.
//!
//! An element `f = sum_g fhat(g) lambda(g)` is stored by its Fourier
//! coefficients. All norms are computed from the honest left-regular matrix
//! `[f]_{r,c} = fhat(r c^{-1})` acting on `l_2(G)` with the normalized trace
//! `tau = (1/N) Tr`, so coefficient identities (Plancherel and friends) stay
//! available as independent cross-checks.
//!
//! ```
//! use cocycle_lab::algebra::AlgebraElement;
//! use cocycle_lab::group::build_cyclic;
//!
//! // on Z_2, lambda(0) + lambda(1) has eigenvalues {2, 0} with weight 1/2:
//! // || f ||_p = 2^{1 - 1/p} under the normalized trace
//! let z2 = build_cyclic(2)?;
//! let f = AlgebraElement::lambda(z2.clone(), 0).add(&AlgebraElement::lambda(z2, 1))?;
//! assert!((f.lp_norm(1.0)? - 1.0).abs() < 1e-12);
//! assert!((f.lp_norm(2.0)? - 2f64.sqrt()).abs() < 1e-12);
//! assert!((f.lp_norm(f64::INFINITY)? - 2.0).abs() < 1e-12);
//! # Ok::<(), cocycle_lab::Error>(())
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupRef;
use crate::length::LengthFunction;
use crate::linalg::{herm_eigenvalues, singular_values, CMat};
use crate::rng::Rng;

/// A finitely supported Fourier series over a finite group.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    group: GroupRef,
    coeffs: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn zero(group: GroupRef) -> Self {
        let n = group.order();
        AlgebraElement { group, coeffs: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// The translation unitary `lambda(g)`.
    pub fn lambda(group: GroupRef, g: usize) -> Self {
        let mut e = AlgebraElement::zero(group);
        e.coeffs[g] = Complex64::new(1.0, 0.0);
        e
    }

    pub fn from_coeffs(group: GroupRef, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::Validation("coefficient vector length != group order".into()));
        }
        Ok(AlgebraElement { group, coeffs })
    }

    /// Random trigonometric polynomial with standard complex gaussian
    /// coefficients, optionally zeroed on a subset and normalized in L2.
    pub fn random(group: GroupRef, rng: &mut Rng, zero_on: &[usize], normalize: bool) -> Self {
        let n = group.order();
        loop {
            let mut coeffs: Vec<Complex64> = (0..n).map(|_| rng.complex_normal()).collect();
            for &g in zero_on {
                coeffs[g] = Complex64::new(0.0, 0.0);
            }
            let l2: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if l2 < 1e-12 {
                continue; // degenerate draw, resample
            }
            if normalize {
                for c in coeffs.iter_mut() {
                    *c /= l2;
                }
            }
            return AlgebraElement { group, coeffs };
        }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> Complex64 {
        self.coeffs[g]
    }

    pub fn coeff_mut(&mut self, g: usize) -> &mut Complex64 {
        &mut self.coeffs[g]
    }

    /// `tau(f) = fhat(e)`.
    pub fn trace(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `fhat*(g) = conj(fhat(g^{-1}))`.
    pub fn adjoint(&self) -> AlgebraElement {
        let g = &self.group;
        let coeffs = (0..g.order()).map(|x| self.coeffs[g.inv(x)].conj()).collect();
        AlgebraElement { group: self.group.clone(), coeffs }
    }

    /// Convolution product `(f1 f2)^(g) = sum_h f1hat(h) f2hat(h^{-1} g)`.
    pub fn convolve(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_group(other)?;
        let g = &self.group;
        let n = g.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for h in 0..n {
            let a = self.coeffs[h];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..n {
                coeffs[g.mul(h, k)] += a * other.coeffs[k];
            }
        }
        Ok(AlgebraElement { group: self.group.clone(), coeffs })
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_group(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement { group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_group(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(AlgebraElement { group: self.group.clone(), coeffs })
    }

    pub fn scale(&self, z: Complex64) -> AlgebraElement {
        AlgebraElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| c * z).collect(),
        }
    }

    /// Left-regular matrix `[f]_{r,c} = fhat(r c^{-1})`.
    pub fn to_matrix(&self) -> CMat {
        let g = &self.group;
        let n = g.order();
        CMat::from_fn(n, n, |r, c| self.coeffs[g.mul(r, g.inv(c))])
    }

    /// Plancherel sum `sum_g |fhat(g)|^2` (equals `||f||_2^2`).
    pub fn coeff_norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_coeff_diff(&self, other: &AlgebraElement) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Noncommutative `L_p` norm under the normalized trace, from singular
    /// values of the left-regular matrix. `p = infinity` is the largest
    /// singular value.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_from_singular_values(&singular_values(&self.to_matrix()), p)
    }

    fn check_group(&self, other: &AlgebraElement) -> Result<()> {
        if self.group != other.group {
            return Err(Error::Validation("elements live on different groups".into()));
        }
        Ok(())
    }

    pub fn to_json(&self, group_id: impl Into<String>) -> ElementJson {
        ElementJson {
            group_id: group_id.into(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn from_json(group: GroupRef, j: &ElementJson) -> Result<Self> {
        AlgebraElement::from_coeffs(
            group,
            j.coeffs.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
        )
    }
}

/// Wire format: `{group_id, coeffs}` with coefficients as `[re, im]` pairs
/// in element order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub group_id: String,
    pub coeffs: Vec<[f64; 2]>,
}

/// Schatten mean `((1/N) sum s_i^p)^{1/p}` for singular values under the
/// normalized trace.
pub fn lp_from_singular_values(sv: &[f64], p: f64) -> Result<f64> {
    if p.is_infinite() && p > 0.0 {
        return Ok(sv.iter().cloned().fold(0.0, f64::max));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("lp_norm needs p >= 1, got {p}")));
    }
    let n = sv.len().max(1) as f64;
    Ok((sv.iter().map(|s| s.powf(p)).sum::<f64>() / n).powf(1.0 / p))
}

/// `L_p` norm of a PSD element given the eigenvalues of its matrix; used for
/// square roots (`|| x^{1/2} ||_p = ((1/N) sum l_i^{p/2})^{1/p}`).
pub fn lp_norm_of_psd_sqrt(eigs: &[f64], p: f64) -> Result<f64> {
    let clamped: Vec<f64> = eigs.iter().map(|l| l.max(0.0).sqrt()).collect();
    lp_from_singular_values(&clamped, p)
}

/// `S_t f`: coefficientwise damping `fhat(g) -> exp(-t psi(g)) fhat(g)`.
pub fn semigroup_apply(psi: &LengthFunction, t: f64, f: &AlgebraElement) -> Result<AlgebraElement> {
    if t < 0.0 {
        return Err(Error::InvalidParameter("semigroup time must be >= 0".into()));
    }
    if !psi.same_group(f.group()) {
        return Err(Error::Validation("length function and element group mismatch".into()));
    }
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(g, c)| c * (-t * psi.value(g)).exp())
        .collect();
    AlgebraElement::from_coeffs(f.group.clone(), coeffs)
}

/// Conditional expectation onto the null subgroup `G_0 = {psi = 0}`:
/// keeps exactly the `G_0` coefficients. Errors when `G_0` fails closure.
pub fn conditional_expectation_g0(psi: &LengthFunction, f: &AlgebraElement) -> Result<AlgebraElement> {
    if !psi.same_group(f.group()) {
        return Err(Error::Validation("length function and element group mismatch".into()));
    }
    let zeros = psi.zero_set();
    let g = f.group();
    let inside = |x: usize| zeros.binary_search(&x).is_ok();
    for &a in &zeros {
        if !inside(g.inv(a)) {
            return Err(Error::Validation("G_0 is not closed under inversion".into()));
        }
        for &b in &zeros {
            if !inside(g.mul(a, b)) {
                return Err(Error::Validation(format!(
                    "G_0 is not closed under multiplication at ({a},{b})"
                )));
            }
        }
    }
    let mut out = AlgebraElement::zero(f.group.clone());
    for &z in &zeros {
        out.coeffs[z] = f.coeffs[z];
    }
    Ok(out)
}

/// `J f = f - E_0 f`, the projection killing the semigroup fixed points.
pub fn project_j(psi: &LengthFunction, f: &AlgebraElement) -> Result<AlgebraElement> {
    let e0 = conditional_expectation_g0(psi, f)?;
    f.sub(&e0)
}

/// One `t` slice of the BMO scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BmoSlice {
    pub t: f64,
    /// `|| S_t |f|^2 - |S_t f|^2 ||_infinity`
    pub column_sq: f64,
    pub row_sq: f64,
    /// Kadison-Schwarz positivity witnesses.
    pub min_eig_column: f64,
    pub min_eig_row: f64,
}

/// Semigroup BMO report over a finite `t` grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BmoReport {
    pub column: f64,
    pub row: f64,
    pub max: f64,
    pub argmax_t_column: f64,
    pub argmax_t_row: f64,
    /// The sup over `t > 0` is approximated on this grid; when the argmax
    /// sits on the boundary the sup may be underestimated.
    pub boundary_warning: bool,
    pub slices: Vec<BmoSlice>,
}

/// Default 25-point log grid `10^{-4} .. 10^{4}` for the BMO sup.
pub fn bmo_default_grid() -> Vec<f64> {
    crate::length::log_grid(1e-4, 1e4, 25)
}

/// Tolerance for Kadison-Schwarz positivity violations.
pub const KS_TOLERANCE: f64 = 1e-8;

/// Computes the semigroup BMO norm data of `f` on a `t` grid.
///
/// For each `t` the deviation `D_t = S_t(f* f) - (S_t f)*(S_t f)` must be
/// PSD (Kadison-Schwarz); a violation beyond tolerance signals a broken
/// semigroup and errors out.
pub fn bmo_norm(psi: &LengthFunction, f: &AlgebraElement, t_grid: &[f64]) -> Result<BmoReport> {
    if t_grid.is_empty() || t_grid.iter().any(|t| *t <= 0.0) {
        return Err(Error::InvalidParameter("BMO grid must be nonempty and positive".into()));
    }
    let fstar = f.adjoint();
    let scale = 1.0 + f.coeff_norm_sqr();
    let mut slices = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let col = deviation_operator(psi, t, f)?;
        let row = deviation_operator(psi, t, &fstar)?;
        let col_eigs = herm_eigenvalues(&col.to_matrix());
        let row_eigs = herm_eigenvalues(&row.to_matrix());
        let slice = BmoSlice {
            t,
            column_sq: col_eigs.iter().fold(0.0f64, |a, &l| a.max(l.abs())),
            row_sq: row_eigs.iter().fold(0.0f64, |a, &l| a.max(l.abs())),
            min_eig_column: col_eigs.first().copied().unwrap_or(0.0),
            min_eig_row: row_eigs.first().copied().unwrap_or(0.0),
        };
        if slice.min_eig_column < -KS_TOLERANCE * scale || slice.min_eig_row < -KS_TOLERANCE * scale {
            return Err(Error::NumericalInconsistency(format!(
                "Kadison-Schwarz violated at t={t}: min eig {:.3e}",
                slice.min_eig_column.min(slice.min_eig_row)
            )));
        }
        slices.push(slice);
    }
    let pick = |key: fn(&BmoSlice) -> f64| {
        slices
            .iter()
            .max_by(|a, b| key(a).partial_cmp(&key(b)).unwrap())
            .expect("nonempty grid")
    };
    let best_col = pick(|s| s.column_sq);
    let best_row = pick(|s| s.row_sq);
    let column = best_col.column_sq.max(0.0).sqrt();
    let row = best_row.row_sq.max(0.0).sqrt();
    let t_lo = t_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_hi = t_grid.iter().cloned().fold(0.0f64, f64::max);
    let boundary = |t: f64| t == t_lo || t == t_hi;
    Ok(BmoReport {
        column,
        row,
        max: column.max(row),
        argmax_t_column: best_col.t,
        argmax_t_row: best_row.t,
        boundary_warning: boundary(best_col.t) || boundary(best_row.t),
        slices,
    })
}

/// `S_t(f* f) - (S_t f)*(S_t f)` as an algebra element.
pub fn deviation_operator(psi: &LengthFunction, t: f64, f: &AlgebraElement) -> Result<AlgebraElement> {
    let fstar = f.adjoint();
    let left = semigroup_apply(psi, t, &fstar.convolve(f)?)?;
    let sf = semigroup_apply(psi, t, f)?;
    let right = sf.adjoint().convolve(&sf)?;
    left.sub(&right)
}
