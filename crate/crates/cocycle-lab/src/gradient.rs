//! Semigroup generator, gradient form and the gaussian derivation.
//!
//! The gradient form is computed along two independent routes: the
//! generator formula `2 Gamma(f1,f2) = A(f1*) f2 + f1* A(f2) - A(f1* f2)`
//! and the Gram-matrix contraction
//! `sum_{g,h} conj(f1hat(g)) f2hat(h) <b(g), b(h)> lambda(g^{-1}h)`.
//! Their entrywise agreement is the strongest exact cross-check in the
//! crate. Expectations over the gaussian algebra are evaluated symbolically
//! with the covariance rule whenever the expression is quadratic in the
//! field; Monte Carlo is reserved for Schatten exponents other than 2.
//!
//! ```
//! use cocycle_lab::algebra::AlgebraElement;
//! use cocycle_lab::catalog::zn_roots;
//! use cocycle_lab::gradient::{gamma_generator, gamma_gram, gamma_trace_oracle};
//! use cocycle_lab::length::LengthFunction;
//! use cocycle_lab::rng::Rng;
//!
//! let (group, c) = zn_roots(4)?;
//! let psi = LengthFunction::new(group.clone(), c.psi().to_vec())?;
//! let mut rng = Rng::seed_from(2);
//! let f = AlgebraElement::random(group, &mut rng, &[], false);
//!
//! // generator route and Gram route agree entrywise ...
//! let a = gamma_generator(&psi, &f, &f)?;
//! let b = gamma_gram(&c, &f, &f)?;
//! assert!(a.max_coeff_diff(&b) < 1e-10);
//! // ... and the trace collapses to sum_g psi(g) |fhat(g)|^2
//! assert!((a.trace().re - gamma_trace_oracle(&psi, &f)).abs() < 1e-10);
//! # Ok::<(), cocycle_lab::Error>(())
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{lp_norm_of_psd_sqrt, AlgebraElement};
use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::length::{LengthFunction, Side};
use crate::linalg::{herm_eigenvalues, CMat, Mat};
use crate::rng::Rng;

/// `A^s f`: coefficientwise `psi(g)^s`. Negative powers require the input
/// to vanish on the null set `G_0`.
pub fn generator_apply(psi: &LengthFunction, f: &AlgebraElement, s: f64) -> Result<AlgebraElement> {
    if !psi.same_group(f.group()) {
        return Err(Error::Validation("length function / element group mismatch".into()));
    }
    let zero_tol = psi.zero_tolerance();
    if s < 0.0 {
        let mass: f64 = psi
            .zero_set()
            .iter()
            .map(|&g| f.coeff(g).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if mass > 1e-10 * (1.0 + f.coeff_norm_sqr().sqrt()) {
            return Err(Error::Domain(format!(
                "negative generator power on an element with G_0 mass {mass:.3e}; project with J first"
            )));
        }
    }
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(g, c)| {
            let x = psi.value(g);
            if x <= zero_tol {
                if s == 0.0 {
                    *c
                } else if s > 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0) // G_0 mass already certified negligible
                }
            } else {
                c * x.powf(s)
            }
        })
        .collect();
    AlgebraElement::from_coeffs(f.group().clone(), coeffs)
}

/// Gradient form by the generator formula.
pub fn gamma_generator(
    psi: &LengthFunction,
    f1: &AlgebraElement,
    f2: &AlgebraElement,
) -> Result<AlgebraElement> {
    let a_f1s = generator_apply(psi, &f1.adjoint(), 1.0)?;
    let a_f2 = generator_apply(psi, f2, 1.0)?;
    let term1 = a_f1s.convolve(f2)?;
    let term2 = f1.adjoint().convolve(&a_f2)?;
    let term3 = generator_apply(psi, &f1.adjoint().convolve(f2)?, 1.0)?;
    term1.add(&term2)?.sub(&term3).map(|e| e.scale(Complex64::new(0.5, 0.0)))
}

/// Gradient form by the Gram contraction of the (left) cocycle.
pub fn gamma_gram(c: &Cocycle, f1: &AlgebraElement, f2: &AlgebraElement) -> Result<AlgebraElement> {
    if c.side() != Side::Left {
        return Err(Error::Validation("gamma_gram needs the left cocycle".into()));
    }
    if c.group() != f1.group() || c.group() != f2.group() {
        return Err(Error::Validation("cocycle / element group mismatch".into()));
    }
    let group = c.group();
    let n = group.order();
    let mut out = AlgebraElement::zero(f1.group().clone());
    for g in 0..n {
        let a = f1.coeff(g).conj();
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let gi = group.inv(g);
        for h in 0..n {
            let b = f2.coeff(h);
            if b.norm_sqr() == 0.0 {
                continue;
            }
            let k = c.gram()[(g, h)];
            *out.coeff_mut(group.mul(gi, h)) += a * b * k;
        }
    }
    Ok(out)
}

/// `tau(Gamma(f,f)) = sum_g psi(g) |fhat(g)|^2`, the exact trace identity.
pub fn gamma_trace_oracle(psi: &LengthFunction, f: &AlgebraElement) -> f64 {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(g, c)| psi.value(g) * c.norm_sqr())
        .sum()
}

/// `|| Gamma^{1/2} ||_p` from the PSD matrix of a gradient form, with the
/// pre-clamp minimum eigenvalue as positivity witness.
pub fn gamma_sqrt_lp(gamma: &AlgebraElement, p: f64) -> Result<(f64, f64)> {
    let eigs = herm_eigenvalues(&gamma.to_matrix());
    let min_eig = eigs.first().copied().unwrap_or(0.0);
    Ok((lp_norm_of_psd_sqrt(&eigs, p)?, min_eig))
}

/// Meyer-ratio statistics over random trigonometric polynomials.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeyerStats {
    pub p: f64,
    pub samples: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

/// Per-sample ratio `||A^{1/2} f||_p / max(||Gamma(f,f)^{1/2}||_p,
/// ||Gamma(f*,f*)^{1/2}||_p)` over random polynomials supported off `G_0`.
pub fn meyer_ratio(
    psi: &LengthFunction,
    c: &Cocycle,
    p: f64,
    num_samples: usize,
    seed: u64,
) -> Result<MeyerStats> {
    if !(p >= 2.0) {
        return Err(Error::UnsupportedRange(format!(
            "meyer_ratio needs p >= 2 (got {p}); the p < 2 sum norm is out of scope"
        )));
    }
    if num_samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let zeros = psi.zero_set();
    let mut ratios = Vec::with_capacity(num_samples);
    for i in 0..num_samples {
        let mut rng = Rng::child(seed, "meyer", i as u64);
        let f = AlgebraElement::random(psi.group().clone(), &mut rng, &zeros, true);
        ratios.push(meyer_ratio_single(psi, c, &f, p)?);
    }
    let mut sorted = ratios.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(MeyerStats {
        p,
        samples: num_samples,
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        median: sorted[sorted.len() / 2],
    })
}

/// The ratio for one element.
pub fn meyer_ratio_single(
    psi: &LengthFunction,
    c: &Cocycle,
    f: &AlgebraElement,
    p: f64,
) -> Result<f64> {
    let num = generator_apply(psi, f, 0.5)?.lp_norm(p)?;
    let (col, _) = gamma_sqrt_lp(&gamma_gram(c, f, f)?, p)?;
    let fs = f.adjoint();
    let (row, _) = gamma_sqrt_lp(&gamma_gram(c, &fs, &fs)?, p)?;
    let denom = col.max(row);
    if denom <= 0.0 {
        return Err(Error::NumericalInconsistency(
            "vanishing gradient form for an element off G_0".into(),
        ));
    }
    Ok(num / denom)
}

/// A gaussian field over the cocycle Hilbert space: one standard normal
/// sample `z` per draw, with `B(v) = <z, v>` so that `E B(v) B(w) = <v, w>`.
#[derive(Debug, Clone)]
pub struct GaussianField {
    pub dim: usize,
}

impl GaussianField {
    pub fn new(dim: usize) -> Self {
        GaussianField { dim }
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        rng.normal_vec(self.dim)
    }

    /// `B(v)` evaluated at the sample `z`.
    pub fn eval(z: &[f64], v: &[f64]) -> f64 {
        z.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// `delta f = sum_g (B(v_g) c_g) lambda(g)` with `v_g = b(g)`,
/// `c_g = fhat(g)`.
#[derive(Debug, Clone)]
pub struct DerivationElement {
    group: crate::group::GroupRef,
    dim: usize,
    /// Per element: action matrices of the cocycle (shared) plus the term data.
    vectors: Vec<Vec<f64>>,
    coeffs: Vec<Complex64>,
    alphas: Vec<Mat>,
}

impl DerivationElement {
    pub fn group(&self) -> &crate::group::GroupRef {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, g: usize) -> &[f64] {
        &self.vectors[g]
    }

    pub fn coeff(&self, g: usize) -> Complex64 {
        self.coeffs[g]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
            || self.vectors.iter().all(|v| v.iter().all(|x| *x == 0.0))
    }

    /// Exact second moment `sum_g |c_g|^2 |v_g|^2` (covariance rule); this
    /// is `tau Gamma(f,f)` when the terms come from `delta f`.
    pub fn second_moment(&self) -> f64 {
        self.vectors
            .iter()
            .zip(&self.coeffs)
            .map(|(v, c)| c.norm_sqr() * v.iter().map(|x| x * x).sum::<f64>())
            .sum()
    }

    /// The crossed-product matrix at a gaussian sample:
    /// `M(z)[g,h] = <z, alpha_{g^{-1}} v_{g h^{-1}}> c_{g h^{-1}}`.
    pub fn matrix_at(&self, z: &[f64]) -> CMat {
        let group = &self.group;
        let n = group.order();
        // u_g = alpha_{g^{-1}}^T z, so <z, alpha_{g^{-1}} v> = <u_g, v>
        let mut u = Vec::with_capacity(n);
        for g in 0..n {
            u.push(self.alphas[group.inv(g)].transpose().apply(z));
        }
        CMat::from_fn(n, n, |g, h| {
            let k = group.mul(g, group.inv(h));
            let c = self.coeffs[k];
            if c.norm_sqr() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let ip: f64 = u[g].iter().zip(&self.vectors[k]).map(|(a, b)| a * b).sum();
            c * ip
        })
    }
}

/// The gaussian derivation `delta f`: term `(b(g), fhat(g))` per element.
pub fn delta(c: &Cocycle, f: &AlgebraElement) -> Result<DerivationElement> {
    if c.side() != Side::Left {
        return Err(Error::Validation("the derivation uses the left cocycle".into()));
    }
    if c.group() != f.group() {
        return Err(Error::Validation("cocycle / element group mismatch".into()));
    }
    let n = c.group().order();
    Ok(DerivationElement {
        group: f.group().clone(),
        dim: c.dim(),
        vectors: (0..n).map(|g| c.b(g).to_vec()).collect(),
        coeffs: f.coeffs().to_vec(),
        alphas: (0..n).map(|g| c.alpha(g).clone()).collect(),
    })
}

/// Monte-Carlo estimate of a crossed-product `L_p` norm.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McEstimate {
    pub p: f64,
    pub num_z: usize,
    pub estimate: f64,
    pub std_error: f64,
}

/// Estimates `|| delta ||_p` in `L_p(L_infinity(Omega) x| G)` by averaging
/// `(1/N) sum_i s_i(M(z))^p` over gaussian samples and taking the p-th
/// root. The standard error uses 10 batch means and the delta method.
pub fn crossed_lp_montecarlo(
    d: &DerivationElement,
    p: f64,
    num_z: usize,
    seed: u64,
) -> Result<McEstimate> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter("crossed norm needs p >= 1".into()));
    }
    if num_z < 100 {
        return Err(Error::InvalidParameter("need at least 100 gaussian samples".into()));
    }
    if d.is_zero() {
        return Ok(McEstimate { p, num_z, estimate: 0.0, std_error: 0.0 });
    }
    let n = d.group().order() as f64;
    let field = GaussianField::new(d.dim());
    let mut values = Vec::with_capacity(num_z);
    for i in 0..num_z {
        let mut rng = Rng::child(seed, "crossed-mc", i as u64);
        let z = field.sample(&mut rng);
        let m = d.matrix_at(&z);
        let mean_p = if p == 2.0 {
            m.frobenius_sqr() / n
        } else {
            let eigs = herm_eigenvalues(&m.adjoint().matmul(&m));
            eigs.iter().map(|l| l.max(0.0).powf(p / 2.0)).sum::<f64>() / n
        };
        values.push(mean_p);
    }
    let mean: f64 = values.iter().sum::<f64>() / num_z as f64;
    // batch means standard error of the p-th power mean
    let batches = 10usize;
    let bs = num_z / batches;
    let mut bmeans = Vec::with_capacity(batches);
    for b in 0..batches {
        let chunk = &values[b * bs..(b + 1) * bs];
        bmeans.push(chunk.iter().sum::<f64>() / chunk.len() as f64);
    }
    let bvar = bmeans.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (batches - 1) as f64;
    let se_mean = (bvar / batches as f64).sqrt();
    let estimate = mean.powf(1.0 / p);
    let std_error = if mean > 0.0 {
        se_mean * estimate / (p * mean)
    } else {
        0.0
    };
    Ok(McEstimate { p, num_z, estimate, std_error })
}

/// Monte-Carlo vs gradient-form comparison for the Khintchine lower bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KhintchineBand {
    pub p: f64,
    pub mc_norm: f64,
    pub mc_std_error: f64,
    pub rc_norm: f64,
    pub ratio: f64,
    /// `mc >= rc (1 - 4 se / rc)`, the direction guaranteed by the
    /// conditional-expectation contraction.
    pub pass_lower: bool,
}

/// Compares the crossed-product norm of `delta f` with the row/column norm
/// `max(||Gamma(f,f)^{1/2}||_p, ||Gamma(f*,f*)^{1/2}||_p)`.
pub fn khintchine_band(
    psi: &LengthFunction,
    c: &Cocycle,
    f: &AlgebraElement,
    p: f64,
    num_z: usize,
    seed: u64,
) -> Result<KhintchineBand> {
    if !(p >= 2.0) {
        return Err(Error::UnsupportedRange("khintchine band needs p >= 2".into()));
    }
    let (col, _) = gamma_sqrt_lp(&gamma_gram(c, f, f)?, p)?;
    let fs = f.adjoint();
    let (row, _) = gamma_sqrt_lp(&gamma_gram(c, &fs, &fs)?, p)?;
    let rc_norm = col.max(row);
    let jmass: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(g, cf)| if psi.value(g) > psi.zero_tolerance() { cf.norm_sqr() } else { 0.0 })
        .sum();
    if rc_norm <= 0.0 && jmass > 1e-20 {
        return Err(Error::NumericalInconsistency(
            "rc norm vanished for an element with mass off G_0".into(),
        ));
    }
    let mc = crossed_lp_montecarlo(&delta(c, f)?, p, num_z, seed)?;
    let ratio = if rc_norm > 0.0 { mc.estimate / rc_norm } else { f64::NAN };
    let pass_lower = if rc_norm > 0.0 {
        mc.estimate >= rc_norm * (1.0 - 4.0 * mc.std_error / rc_norm)
    } else {
        mc.estimate.abs() < 1e-12
    };
    Ok(KhintchineBand {
        p,
        mc_norm: mc.estimate,
        mc_std_error: mc.std_error,
        rc_norm,
        ratio,
        pass_lower,
    })
}

/// The Riesz transform extracted from the derivation by the covariance
/// rule: `-i E((B(eta) 1)* delta(A^{-1/2} f))`, coefficientwise
/// `-i <eta, b(g)> psi(g)^{-1/2} fhat(g)`. Computed through the derivation
/// term data so it cross-checks the direct symbol route.
pub fn riesz_via_derivation(
    psi: &LengthFunction,
    c: &Cocycle,
    eta: &[f64],
    f: &AlgebraElement,
) -> Result<AlgebraElement> {
    let jf = crate::algebra::project_j(psi, f)?;
    let half_inv = generator_apply(psi, &jf, -0.5)?;
    let d = delta(c, &half_inv)?;
    // E((B(eta) 1)^* (B(v_g) c_g) lambda(g)) = <eta, v_g> c_g lambda(g)
    let n = f.group().order();
    let mut out = AlgebraElement::zero(f.group().clone());
    for g in 0..n {
        let cov: f64 = eta.iter().zip(d.vector(g)).map(|(a, b)| a * b).sum();
        *out.coeff_mut(g) = Complex64::new(0.0, -1.0) * d.coeff(g) * cov;
    }
    Ok(out)
}
