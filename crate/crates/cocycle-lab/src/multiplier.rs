//! Fourier multiplier symbols and empirical operator-norm probes.
//!
//! `T_m` multiplies Fourier coefficients pointwise. On L2 its norm is
//! exactly `max_g |m_g|` (Plancherel); away from 2 the crate only produces
//! certified lower bounds by randomized coordinate ascent over test
//! elements. Upper bounds are out of reach without convexity structure.
//!
//! ```
//! use cocycle_lab::catalog::zn_roots;
//! use cocycle_lab::multiplier::{l2_norm_exact, lp_norm_search, riesz_symbol};
//!
//! let (_, c) = zn_roots(4)?;
//! // m_g = -i <b(g), eta> / sqrt(psi(g)), zero at the identity
//! let m = riesz_symbol(&c, &[1.0, 0.0])?;
//! assert!((m.value(2).im - 1.0).abs() < 1e-12);
//! assert!((l2_norm_exact(&m) - 1.0).abs() < 1e-12);
//!
//! // search lower bounds never exceed the exact L2 law
//! let search = lp_norm_search(&m, 2.0, 2, 30, 7)?;
//! assert!(search.lower_bound <= 1.0 + 1e-9);
//! # Ok::<(), cocycle_lab::Error>(())
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::group::GroupRef;
use crate::length::LengthFunction;
use crate::rng::Rng;

/// How a symbol was produced; recorded for report provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Lifted,
    Radial,
    Riesz { eta: Vec<f64> },
    ImaginaryPower { s: f64 },
    Explicit,
}

/// A multiplier symbol: one complex value per group element.
#[derive(Debug, Clone)]
pub struct MultiplierSymbol {
    group: GroupRef,
    values: Vec<Complex64>,
    provenance: Provenance,
}

impl MultiplierSymbol {
    pub fn explicit(group: GroupRef, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Validation("symbol length != group order".into()));
        }
        Ok(MultiplierSymbol { group, values, provenance: Provenance::Explicit })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, g: usize) -> Complex64 {
        self.values[g]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Pointwise product symbol `m . m'`.
    pub fn pointwise_mul(&self, other: &MultiplierSymbol) -> Result<MultiplierSymbol> {
        if self.group != other.group {
            return Err(Error::Validation("symbols live on different groups".into()));
        }
        Ok(MultiplierSymbol {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            provenance: Provenance::Explicit,
        })
    }

    /// The dual symbol `g -> conj(m(g^{-1}))` (symbol of the adjoint map).
    pub fn dual(&self) -> MultiplierSymbol {
        let g = &self.group;
        MultiplierSymbol {
            group: self.group.clone(),
            values: (0..g.order()).map(|x| self.values[g.inv(x)].conj()).collect(),
            provenance: Provenance::Explicit,
        }
    }

    pub fn to_json(&self) -> SymbolJson {
        SymbolJson {
            provenance: self.provenance.clone(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn from_json(group: GroupRef, j: &SymbolJson) -> Result<Self> {
        if j.values.len() != group.order() {
            return Err(Error::Validation("symbol length != group order".into()));
        }
        Ok(MultiplierSymbol {
            group,
            values: j.values.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
            provenance: j.provenance.clone(),
        })
    }
}

/// Wire format: provenance plus values as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolJson {
    pub provenance: Provenance,
    pub values: Vec<[f64; 2]>,
}

/// `T_m f`: coefficientwise product.
pub fn apply(m: &MultiplierSymbol, f: &AlgebraElement) -> Result<AlgebraElement> {
    if m.group() != f.group() {
        return Err(Error::Validation("symbol and element group mismatch".into()));
    }
    let coeffs = m.values.iter().zip(f.coeffs()).map(|(a, b)| a * b).collect();
    AlgebraElement::from_coeffs(f.group().clone(), coeffs)
}

/// Directional Riesz symbol `m_g = -i <b(g), eta> / sqrt(psi(g))`, set to 0
/// on the null set `G_0` where the formula degenerates.
pub fn riesz_symbol(c: &Cocycle, eta: &[f64]) -> Result<MultiplierSymbol> {
    if eta.len() != c.dim() {
        return Err(Error::Validation(format!(
            "eta has dimension {}, cocycle has {}",
            eta.len(),
            c.dim()
        )));
    }
    let n = c.group().order();
    let zero_tol = 1e-9 * (1.0 + c.psi().iter().cloned().fold(0.0, f64::max));
    let values = (0..n)
        .map(|g| {
            let psi = c.psi()[g];
            if psi <= zero_tol {
                Complex64::new(0.0, 0.0)
            } else {
                let ip: f64 = c.b(g).iter().zip(eta).map(|(a, b)| a * b).sum();
                Complex64::new(0.0, -ip / psi.sqrt())
            }
        })
        .collect();
    Ok(MultiplierSymbol {
        group: c.group().clone(),
        values,
        provenance: Provenance::Riesz { eta: eta.to_vec() },
    })
}

/// Radial symbol `m_g = h(psi(g))`; errors name the element where `h`
/// produced a non-finite value.
pub fn radial_symbol(
    psi: &LengthFunction,
    h: impl Fn(f64) -> Complex64,
) -> Result<MultiplierSymbol> {
    let group = psi.group().clone();
    let mut values = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let v = h(psi.value(g));
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::SymbolEvaluation {
                at: format!("g = {} (psi = {})", group.label(g), psi.value(g)),
                detail: "radial profile returned a non-finite value".into(),
            });
        }
        values.push(v);
    }
    Ok(MultiplierSymbol { group, values, provenance: Provenance::Radial })
}

/// Imaginary power symbol `psi(g)^{is}`, with the `h(0) := 0` convention on
/// the null set (`E_0` handles that part separately).
pub fn imaginary_power_symbol(psi: &LengthFunction, s: f64) -> Result<MultiplierSymbol> {
    let zero_tol = psi.zero_tolerance();
    let mut m = radial_symbol(psi, |x| {
        if x <= zero_tol {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(1.0, s * x.ln())
        }
    })?;
    m.provenance = Provenance::ImaginaryPower { s };
    Ok(m)
}

/// Lifted symbol `m_g = mtilde(b(g))`. Equal cocycle vectors receive equal
/// values by construction.
pub fn lifted_symbol(
    c: &Cocycle,
    mtilde: impl Fn(&[f64]) -> Complex64,
) -> Result<MultiplierSymbol> {
    let group = c.group().clone();
    let mut values = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let v = mtilde(c.b(g));
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::SymbolEvaluation {
                at: format!("g = {} (b = {:?})", group.label(g), c.b(g)),
                detail: "lifting returned a non-finite value".into(),
            });
        }
        values.push(v);
    }
    Ok(MultiplierSymbol { group, values, provenance: Provenance::Lifted })
}

/// Exact L2 -> L2 operator norm: `max_g |m_g|`.
pub fn l2_norm_exact(m: &MultiplierSymbol) -> f64 {
    m.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Result of the randomized lower-bound search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub lower_bound: f64,
    pub witness: AlgebraElement,
    pub trials: usize,
    pub steps: usize,
}

/// Certified lower bound on `||T_m||_{L_p -> L_p}` by randomized coordinate
/// perturbation ascent on the Fourier coefficients of a test element.
/// Deterministic under `seed`; the bound is at least the ratio of the best
/// random start.
pub fn lp_norm_search(
    m: &MultiplierSymbol,
    p: f64,
    trials: usize,
    steps: usize,
    seed: u64,
) -> Result<SearchResult> {
    if !(p >= 1.0) && !p.is_infinite() {
        return Err(Error::InvalidParameter(format!("search needs p >= 1, got {p}")));
    }
    if trials == 0 || steps == 0 {
        return Err(Error::InvalidParameter("trials and steps must be >= 1".into()));
    }
    let group = m.group().clone();
    let n = group.order();
    let ratio = |f: &AlgebraElement| -> Result<f64> {
        let denom = f.lp_norm(p)?;
        if denom < 1e-300 {
            return Ok(0.0);
        }
        Ok(apply(m, f)?.lp_norm(p)? / denom)
    };

    let peak = (0..n)
        .max_by(|&a, &b| m.values[a].norm().partial_cmp(&m.values[b].norm()).unwrap())
        .unwrap_or(0);
    let mut best: Option<(f64, AlgebraElement)> = None;
    for trial in 0..trials {
        let mut rng = Rng::child(seed, "lp-search", trial as u64);
        // trial 0 starts from the best pure frequency (ratio |m_peak| exactly);
        // the remaining trials start from random polynomials
        let mut f = if trial == 0 {
            AlgebraElement::lambda(group.clone(), peak)
        } else {
            AlgebraElement::random(group.clone(), &mut rng, &[], true)
        };
        let mut current = ratio(&f)?;
        let mut step_size = 0.5;
        for _ in 0..steps {
            let g = rng.below(n);
            let re_part = rng.uniform() < 0.5;
            let delta = step_size * rng.normal();
            let mut cand = f.clone();
            let c = cand.coeff_mut(g);
            if re_part {
                *c += Complex64::new(delta, 0.0);
            } else {
                *c += Complex64::new(0.0, delta);
            }
            if cand.coeff_norm_sqr() < 1e-20 {
                continue;
            }
            let r = ratio(&cand)?;
            if r > current {
                current = r;
                f = cand;
            } else {
                step_size *= 0.97;
                if step_size < 1e-6 {
                    step_size = 0.25;
                }
            }
        }
        if best.as_ref().map_or(true, |(b, _)| current > *b) {
            best = Some((current, f));
        }
    }
    let (lower_bound, witness) = best.expect("at least one trial");
    Ok(SearchResult { lower_bound, witness, trials, steps })
}

/// Both sides of the duality probe: lower bounds for `(m, p)` and for the
/// adjoint symbol at the conjugate exponent. Reported only; the search is
/// too noisy for a hard assertion.
pub fn duality_probe(
    m: &MultiplierSymbol,
    p: f64,
    trials: usize,
    steps: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let primal = lp_norm_search(m, p, trials, steps, seed)?.lower_bound;
    let q = if p.is_infinite() { 1.0 } else { p / (p - 1.0) };
    let dual = lp_norm_search(&m.dual(), q, trials, steps, seed ^ 0xD0A1)?.lower_bound;
    Ok((primal, dual))
}

/// Max residual of the exact Schur factorization behind the Riesz symbol:
/// `mtilde_eta(alpha_g xi) = -i <xi/|xi|, alpha_{g^{-1}} eta>` over sampled
/// unit vectors `xi` and all `g`. This is an algebraic identity, so the
/// residual is rounding-level.
pub fn schur_riesz_residual(c: &Cocycle, eta: &[f64], samples: usize, seed: u64) -> Result<f64> {
    if c.dim() == 0 {
        return Err(Error::NotApplicable("schur residual needs dim >= 1".into()));
    }
    if eta.len() != c.dim() {
        return Err(Error::Validation("eta dimension mismatch".into()));
    }
    let mut rng = Rng::child(seed, "schur-riesz", 0);
    let n = c.group().order();
    let mut worst = 0.0f64;
    for _ in 0..samples.max(64) {
        let xi = rng.unit_vector(c.dim());
        for g in 0..n {
            let axi = c.alpha(g).apply(&xi);
            let norm = axi.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mtilde = if norm < 1e-300 {
                Complex64::new(0.0, 0.0)
            } else {
                let ip: f64 = axi.iter().zip(eta).map(|(a, b)| a * b).sum();
                Complex64::new(0.0, -ip / norm)
            };
            let ainv_eta = c.alpha(c.group().inv(g)).apply(eta);
            let ip: f64 = xi.iter().zip(&ainv_eta).map(|(a, b)| a * b).sum();
            let factorized = Complex64::new(0.0, -ip);
            worst = worst.max((mtilde - factorized).norm());
        }
    }
    Ok(worst)
}

/// Which of the epsilon-removal conditions hold for `(cocycle, symbol)`:
/// abelian group, lattice image, finite action orbit, radial symbol. On a
/// finite carrier the action orbit is necessarily finite and the image
/// `b(G)` is a finite set, so the lattice condition carries no independent
/// content here (a lattice image forces a finite action in general, and
/// that is the flag reported); both flags are kept for symmetry with the
/// infinite-group statement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsilonFreeReport {
    pub abelian: bool,
    pub finite_action: bool,
    pub action_orbit_size: usize,
    pub radial: bool,
}

pub fn epsilon_free_report(c: &Cocycle, m: &MultiplierSymbol) -> EpsilonFreeReport {
    let n = c.group().order();
    let mut orbit: Vec<usize> = Vec::new();
    'outer: for g in 0..n {
        for &h in &orbit {
            if c.alpha(g).max_abs_diff(c.alpha(h)) < 1e-10 {
                continue 'outer;
            }
        }
        orbit.push(g);
    }
    // radial: constant on psi level sets
    let mut radial = true;
    let scale = 1.0 + c.psi().iter().cloned().fold(0.0, f64::max);
    'r: for g in 0..n {
        for h in 0..n {
            if (c.psi()[g] - c.psi()[h]).abs() < 1e-9 * scale
                && (m.value(g) - m.value(h)).norm() > 1e-9
            {
                radial = false;
                break 'r;
            }
        }
    }
    EpsilonFreeReport {
        abelian: c.group().is_abelian(),
        finite_action: true,
        action_orbit_size: orbit.len(),
        radial,
    }
}
