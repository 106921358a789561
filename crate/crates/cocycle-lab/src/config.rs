//! Configuration schemas for the CLI commands.
//!
//! Every config rejects unknown fields so that typos fail loudly rather
//! than silently running a default. Specs are plain data; the builders in
//! this module turn them into live objects, deriving any randomness from
//! the root seed through labelled child streams.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::catalog::{CatalogCocycle, CatalogSpec};
use crate::cocycle::{build_cocycle, Cocycle};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::group::{GroupRef, GroupSpec, DEFAULT_ORDER_CAP};
use crate::length::{random_inner_length, LengthFunction, Side};
use crate::mihlin::ShellConfig;
use crate::multiplier::{
    imaginary_power_symbol, lifted_symbol, radial_symbol, riesz_symbol, MultiplierSymbol,
};
use crate::rng::Rng;

/// A length function: explicit values, the roots length on a cyclic group,
/// or a seeded random certified length.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PsiSpec {
    Explicit { values: Vec<f64> },
    ZnRoots,
    RandomInner { vectors: usize },
}

impl PsiSpec {
    pub fn build(&self, group: &GroupRef, seed: u64) -> Result<LengthFunction> {
        match self {
            PsiSpec::Explicit { values } => LengthFunction::new(group.clone(), values.clone()),
            PsiSpec::ZnRoots => {
                let n = group.order();
                let tau = 2.0 * std::f64::consts::PI / n as f64;
                let mut values: Vec<f64> =
                    (0..n).map(|k| 2.0 - 2.0 * (tau * k as f64).cos()).collect();
                values[0] = 0.0;
                // the roots length is only meaningful on cyclic groups; the
                // constructor will reject it elsewhere via symmetry checks
                LengthFunction::new(group.clone(), values)
            }
            PsiSpec::RandomInner { vectors } => {
                let mut rng = Rng::child(seed, "psi-random-inner", 0);
                Ok(random_inner_length(group, *vectors, &mut rng))
            }
        }
    }
}

/// A cocycle: built from `(group, psi)` by eigendecomposition, or taken
/// from the explicit catalog (group-carried kinds only).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleSpec {
    Build {
        group: GroupSpec,
        psi: PsiSpec,
        #[serde(default = "default_side")]
        side: Side,
        #[serde(default = "default_cocycle_tol")]
        tol: f64,
    },
    Catalog { catalog: CatalogSpec },
}

fn default_side() -> Side {
    Side::Left
}

fn default_cocycle_tol() -> f64 {
    crate::cocycle::DEFAULT_COCYCLE_TOL
}

impl CocycleSpec {
    pub fn build(&self, seed: u64) -> Result<(GroupRef, Cocycle)> {
        match self {
            CocycleSpec::Build { group, psi, side, tol } => {
                let g = group.build()?;
                let p = psi.build(&g, seed)?;
                let c = build_cocycle(&p, *side, *tol)?;
                Ok((g, c))
            }
            CocycleSpec::Catalog { catalog } => match catalog.build(DEFAULT_ORDER_CAP)? {
                CatalogCocycle::Group(g, c) => Ok((g, c)),
                _ => Err(Error::Usage(
                    "this command needs a group-carried cocycle (zn_roots or heisenberg_pullback)"
                        .into(),
                )),
            },
        }
    }
}

/// An algebra element: a translation unitary, explicit coefficients, or a
/// batch of seeded random polynomials.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementSpec {
    Lambda { g: usize },
    Coeffs { coeffs: Vec<[f64; 2]> },
    Random {
        count: usize,
        #[serde(default)]
        zero_on_null_set: bool,
    },
}

impl ElementSpec {
    /// Materializes the elements; `zeros` is the null set used when
    /// `zero_on_null_set` is requested.
    pub fn build(
        &self,
        group: &GroupRef,
        zeros: &[usize],
        seed: u64,
    ) -> Result<Vec<AlgebraElement>> {
        match self {
            ElementSpec::Lambda { g } => {
                if *g >= group.order() {
                    return Err(Error::Usage(format!("lambda index {g} out of range")));
                }
                Ok(vec![AlgebraElement::lambda(group.clone(), *g)])
            }
            ElementSpec::Coeffs { coeffs } => {
                let c = coeffs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                Ok(vec![AlgebraElement::from_coeffs(group.clone(), c)?])
            }
            ElementSpec::Random { count, zero_on_null_set } => {
                let dead: &[usize] = if *zero_on_null_set { zeros } else { &[] };
                Ok((0..*count)
                    .map(|i| {
                        let mut rng = Rng::child(seed, "element-random", i as u64);
                        AlgebraElement::random(group.clone(), &mut rng, dead, true)
                    })
                    .collect())
            }
        }
    }
}

/// A multiplier symbol over a cocycle.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    Riesz { eta: Vec<f64> },
    Radial { expr: String },
    ImaginaryPower { s: f64 },
    Lifted { expr: String },
    Explicit { values: Vec<[f64; 2]> },
}

impl SymbolSpec {
    pub fn build(&self, psi: &LengthFunction, c: &Cocycle) -> Result<MultiplierSymbol> {
        match self {
            SymbolSpec::Riesz { eta } => riesz_symbol(c, eta),
            SymbolSpec::Radial { expr } => {
                let e = Expr::parse(expr, 1)?;
                let failure = std::cell::Cell::new(None);
                let m = radial_symbol(psi, |x| match e.eval(&[x]) {
                    Ok(v) => v,
                    Err(err) => {
                        failure.set(Some(err.to_string()));
                        Complex64::new(f64::NAN, 0.0)
                    }
                });
                if let Some(f) = failure.into_inner() {
                    return Err(Error::Expr(f));
                }
                m
            }
            SymbolSpec::ImaginaryPower { s } => imaginary_power_symbol(psi, *s),
            SymbolSpec::Lifted { expr } => {
                let e = Expr::parse(expr, c.dim().max(1))?;
                let failure = std::cell::Cell::new(None);
                let m = lifted_symbol(c, |b| match e.eval(b) {
                    Ok(v) => v,
                    Err(err) => {
                        failure.set(Some(err.to_string()));
                        Complex64::new(f64::NAN, 0.0)
                    }
                });
                if let Some(f) = failure.into_inner() {
                    return Err(Error::Expr(f));
                }
                m
            }
            SymbolSpec::Explicit { values } => MultiplierSymbol::explicit(
                psi.group().clone(),
                values.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
            ),
        }
    }
}

/// A frequency symbol on the line for the FFT bridge.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FreqSymbolSpec {
    Donut { alpha: f64, beta: f64, gamma: f64 },
    Expr { expr: String },
}

impl FreqSymbolSpec {
    pub fn build(&self) -> Result<Box<dyn Fn(f64) -> Complex64>> {
        match self {
            FreqSymbolSpec::Donut { alpha, beta, gamma } => {
                let d = crate::euclid::donut_symbol(*alpha, *beta, *gamma)?;
                Ok(Box::new(move |xi| Complex64::new(d.eval(xi), 0.0)))
            }
            FreqSymbolSpec::Expr { expr } => {
                let e = Expr::parse(expr, 1)?;
                Ok(Box::new(move |xi| {
                    e.eval(&[xi]).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                }))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Per-command configs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckLengthConfig {
    pub group: GroupSpec,
    pub psi: PsiSpec,
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleConfig {
    pub group: GroupSpec,
    pub psi: PsiSpec,
    #[serde(default = "default_cocycle_tol")]
    pub tol: f64,
    #[serde(default)]
    pub radii: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BmoConfig {
    pub group: GroupSpec,
    pub psi: PsiSpec,
    pub element: ElementSpec,
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
    /// When present, also emit a per-element `L_p` norm sweep CSV.
    #[serde(default)]
    pub p_list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplierConfig {
    pub cocycle: CocycleSpec,
    pub symbol: SymbolSpec,
    pub p_list: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_trials() -> usize {
    4
}

fn default_steps() -> usize {
    120
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MihlinConfig {
    pub expr: String,
    pub dim: usize,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub shells: Option<ShellConfig>,
    #[serde(default)]
    pub threshold: Option<f64>,
}

fn default_eps() -> f64 {
    0.1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpConfig {
    pub group: GroupSpec,
    pub psi: PsiSpec,
    pub p_list: Vec<f64>,
    #[serde(default = "default_num_random")]
    pub num_random: usize,
    /// Base bump: "default" or an expression in `x` (evaluated at
    /// `2^{-m} sqrt(psi)`).
    #[serde(default = "default_bump")]
    pub bump: String,
    #[serde(default)]
    pub m_range: Option<(i32, i32)>,
    #[serde(default = "default_true")]
    pub normalize: bool,
}

fn default_bump() -> String {
    "default".into()
}

impl LpConfig {
    pub fn bump(&self) -> Result<crate::littlewood::Bump> {
        if self.bump == "default" {
            Ok(crate::littlewood::Bump::Default)
        } else {
            Ok(crate::littlewood::Bump::Expression(
                Expr::parse(&self.bump, 1)?,
                self.bump.clone(),
            ))
        }
    }
}

fn default_num_random() -> usize {
    20
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeyerConfig {
    pub cocycle: CocycleSpec,
    pub p_list: Vec<f64>,
    #[serde(default = "default_num_samples")]
    pub num_samples: usize,
}

fn default_num_samples() -> usize {
    100
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KhintchineConfig {
    pub cocycle: CocycleSpec,
    pub element: ElementSpec,
    pub p_list: Vec<f64>,
    #[serde(default = "default_num_z")]
    pub num_z: usize,
}

fn default_num_z() -> usize {
    20_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FftConfig {
    pub symbol: FreqSymbolSpec,
    pub p: f64,
    pub n_list: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Fixed physical scale; absent means `1/N` per grid.
    #[serde(default)]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergeConfig {
    pub inputs: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configs_reject_unknown_fields() {
        let bad = r#"{"group": {"kind": "cyclic", "n": 4}, "psi": {"kind": "zn_roots"}, "bogus": 1}"#;
        assert!(serde_json::from_str::<CheckLengthConfig>(bad).is_err());
        let ok = r#"{"group": {"kind": "cyclic", "n": 4}, "psi": {"kind": "zn_roots"}}"#;
        let cfg: CheckLengthConfig = serde_json::from_str(ok).unwrap();
        let g = cfg.group.build().unwrap();
        let psi = cfg.psi.build(&g, 0).unwrap();
        assert!((psi.value(2) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn config_roundtrip_is_lossless() {
        let src = r#"{"cocycle":{"kind":"catalog","catalog":{"kind":"zn_roots","n":8}},"symbol":{"kind":"riesz","eta":[1.0,0.0]},"p_list":[2.0,4.0],"trials":2,"steps":10}"#;
        let cfg: MultiplierConfig = serde_json::from_str(src).unwrap();
        let back = serde_json::to_string(&cfg).unwrap();
        let cfg2: MultiplierConfig = serde_json::from_str(&back).unwrap();
        assert_eq!(serde_json::to_string(&cfg2).unwrap(), back);
    }

    #[test]
    fn random_specs_are_seed_deterministic() {
        let g = crate::group::build_cyclic(6).unwrap();
        let spec = PsiSpec::RandomInner { vectors: 2 };
        let a = spec.build(&g, 42).unwrap();
        let b = spec.build(&g, 42).unwrap();
        assert_eq!(a.values(), b.values());
        let c = spec.build(&g, 43).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn symbol_specs_build() {
        let (g, c) = crate::catalog::zn_roots(4).unwrap();
        let psi = LengthFunction::new(g, c.psi().to_vec()).unwrap();
        let radial = SymbolSpec::Radial { expr: "1 / (1 + x)".into() };
        let m = radial.build(&psi, &c).unwrap();
        assert!((m.value(0).re - 1.0).abs() < 1e-15);
        let lifted = SymbolSpec::Lifted { expr: "x1 + i * x2".into() };
        assert!(lifted.build(&psi, &c).is_ok());
        let bad = SymbolSpec::Radial { expr: "unknown_fn(x)".into() };
        assert!(bad.build(&psi, &c).is_err());
    }
}
