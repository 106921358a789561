//! Cocycle construction from certified length functions.
//!
//! The Gromov form `K` of a length function is positive semidefinite; its
//! eigendecomposition `K = V L V^T` realizes the cocycle map as the rows of
//! `V L^{1/2}` and the isometric action as the unique linear map sending
//! `b(h)` to `b(gh) - b(g)` (left side). The action solve is exact because
//! `B^T B` is the diagonal of kept eigenvalues.
//!
//! ```
//! use cocycle_lab::cocycle::{build_cocycle, separation_report};
//! use cocycle_lab::group::build_cyclic;
//! use cocycle_lab::length::{LengthFunction, Side};
//!
//! let psi = LengthFunction::new(build_cyclic(4)?, vec![0.0, 2.0, 4.0, 2.0])?;
//! let c = build_cocycle(&psi, Side::Left, 1e-10)?;
//! assert_eq!(c.dim(), 2); // two frequencies carry the whole form
//!
//! // || b(g) - b(h) ||^2 = psi(g^{-1} h), the defining pseudo-metric
//! let res = c.verify();
//! assert!(res.metric < 1e-10 && res.law < 1e-10);
//!
//! let sep = separation_report(&c);
//! assert!(sep.standard && (sep.delta - 2.0).abs() < 1e-12);
//! # Ok::<(), cocycle_lab::Error>(())
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupRef;
use crate::length::{gromov_form, is_conditionally_negative, LengthFunction, Side};
use crate::linalg::{sym_eigen, Mat};

/// Default relative eigenvalue cutoff for the cocycle rank decision.
pub const DEFAULT_COCYCLE_TOL: f64 = 1e-10;

/// A finite-dimensional cocycle `(H, alpha, b)` over a finite group.
#[derive(Debug, Clone)]
pub struct Cocycle {
    group: GroupRef,
    side: Side,
    dim: usize,
    /// `b[g]` is the cocycle vector of element `g`.
    b: Vec<Vec<f64>>,
    /// `alpha[g]` is the orthogonal action matrix of element `g`.
    alpha: Vec<Mat>,
    gram: Mat,
    psi: Vec<f64>,
    tol: f64,
}

/// Residuals of the defining identities, all maxima over the group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleResiduals {
    /// `max |<b(g),b(h)> - K(g,h)|`
    pub gram: f64,
    /// `max | ||b(g)-b(h)||^2 - psi(...) |` for the side-appropriate argument
    pub metric: f64,
    /// `max || alpha_g b(h) - (b(gh) - b(g)) ||` (left; mirrored on the right)
    pub law: f64,
    /// `max || alpha_g^T alpha_g - I ||`
    pub orthogonality: f64,
    /// `max || alpha_g alpha_h - alpha_{gh} ||`
    pub representation: f64,
}

impl CocycleResiduals {
    pub fn max(&self) -> f64 {
        self.gram
            .max(self.metric)
            .max(self.law)
            .max(self.orthogonality)
            .max(self.representation)
    }
}

/// Injectivity / separation summary of a cocycle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparationReport {
    pub delta: f64,
    pub injective: bool,
    pub well_separated: bool,
    pub standard: bool,
}

/// Per-radius packing-bound verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallCount {
    pub radius: f64,
    pub count: usize,
    pub bound: f64,
    pub pass: bool,
}

impl Cocycle {
    /// Assembles a cocycle from explicit data and records the Gromov form.
    /// Used by the explicit catalog; `psi` must already be certified.
    pub(crate) fn from_parts(
        group: GroupRef,
        side: Side,
        b: Vec<Vec<f64>>,
        alpha: Vec<Mat>,
        psi: Vec<f64>,
        tol: f64,
    ) -> Self {
        let dim = b.first().map_or(0, Vec::len);
        let n = group.order();
        let gram = Mat::from_fn(n, n, |g, h| dot(&b[g], &b[h]));
        Cocycle { group, side, dim, b, alpha, gram, psi, tol }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn b(&self, g: usize) -> &[f64] {
        &self.b[g]
    }

    pub fn alpha(&self, g: usize) -> &Mat {
        &self.alpha[g]
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn length_function(&self) -> Result<LengthFunction> {
        LengthFunction::new(self.group.clone(), self.psi.clone())
    }

    /// Max norm of the cocycle vectors.
    pub fn max_vector_norm(&self) -> f64 {
        self.b.iter().map(|v| norm(v)).fold(0.0, f64::max)
    }

    /// Recomputes every defining residual. The representation residual is
    /// O(N^2 d^3) and is skipped above order 64; use [`Cocycle::verify_with`]
    /// to force it.
    pub fn verify(&self) -> CocycleResiduals {
        self.verify_with(self.group.order() <= 64)
    }

    /// Residuals with the representation check opt-in.
    pub fn verify_with(&self, include_representation: bool) -> CocycleResiduals {
        let g = &self.group;
        let n = g.order();
        let mut res = CocycleResiduals {
            gram: 0.0,
            metric: 0.0,
            law: 0.0,
            orthogonality: 0.0,
            representation: 0.0,
        };
        for a in 0..n {
            for b_el in 0..n {
                let ip = dot(&self.b[a], &self.b[b_el]);
                res.gram = res.gram.max((ip - self.gram[(a, b_el)]).abs());
                let dist2 = dist_sqr(&self.b[a], &self.b[b_el]);
                let arg = match self.side {
                    Side::Left => g.mul(g.inv(a), b_el),
                    Side::Right => g.mul(a, g.inv(b_el)),
                };
                res.metric = res.metric.max((dist2 - self.psi[arg]).abs());

                let lhs = self.alpha[a].apply(&self.b[b_el]);
                let rhs = match self.side {
                    Side::Left => sub(&self.b[g.mul(a, b_el)], &self.b[a]),
                    Side::Right => sub(&self.b[g.mul(b_el, g.inv(a))], &self.b[g.inv(a)]),
                };
                res.law = res.law.max(norm(&sub(&lhs, &rhs)));
            }
            res.orthogonality = res.orthogonality.max(self.alpha[a].orthogonality_residual());
        }
        if include_representation {
            for a in 0..n {
                for b_el in 0..n {
                    let prod = self.alpha[a].matmul(&self.alpha[b_el]);
                    res.representation =
                        res.representation.max(prod.max_abs_diff(&self.alpha[g.mul(a, b_el)]));
                }
            }
        }
        res
    }

    pub fn to_json(&self) -> CocycleJson {
        CocycleJson {
            side: self.side,
            dim: self.dim,
            psi: self.psi.clone(),
            b: self.b.iter().flatten().copied().collect(),
            alpha: self.alpha.iter().map(|m| m.data.clone()).collect(),
            gram: self.gram.data.clone(),
            tol: self.tol,
        }
    }

    /// Rebuilds a cocycle from its wire format; shapes are validated here,
    /// the analytic identities through [`Cocycle::verify`].
    pub fn from_json(group: GroupRef, j: &CocycleJson) -> Result<Self> {
        let n = group.order();
        let d = j.dim;
        if j.psi.len() != n || j.b.len() != n * d || j.alpha.len() != n || j.gram.len() != n * n {
            return Err(Error::Validation("cocycle wire data has inconsistent shapes".into()));
        }
        if j.alpha.iter().any(|m| m.len() != d * d) {
            return Err(Error::Validation("action matrix is not d x d".into()));
        }
        let b = if d == 0 {
            vec![Vec::new(); n]
        } else {
            j.b.chunks(d).map(|c| c.to_vec()).collect()
        };
        Ok(Cocycle {
            group,
            side: j.side,
            dim: d,
            b,
            alpha: j
                .alpha
                .iter()
                .map(|data| Mat { rows: d, cols: d, data: data.clone() })
                .collect(),
            gram: Mat { rows: n, cols: n, data: j.gram.clone() },
            psi: j.psi.clone(),
            tol: j.tol,
        })
    }
}

/// Wire format for cocycles: `b` as an `N x d` row-major block, `alpha` as a
/// list of `d x d` row-major matrices, `gram` row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleJson {
    pub side: Side,
    pub dim: usize,
    pub psi: Vec<f64>,
    pub b: Vec<f64>,
    pub alpha: Vec<Vec<f64>>,
    pub gram: Vec<f64>,
    pub tol: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dist_sqr(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Builds the left or right cocycle of a certified length function.
///
/// `tol` is the relative eigenvalue cutoff: eigenvalues of the Gromov form
/// at or below `tol * max_eigenvalue` are treated as zero.
pub fn build_cocycle(psi: &LengthFunction, side: Side, tol: f64) -> Result<Cocycle> {
    if !(0.0..1.0).contains(&tol) {
        return Err(Error::InvalidParameter("cocycle tol must lie in [0,1)".into()));
    }
    let scale = 1.0 + psi.max_value();
    let cert = is_conditionally_negative(psi, 1e-8 * scale * psi.group().order() as f64);
    if !cert.pass {
        return Err(Error::NotConditionallyNegative { min_eig: cert.min_eig, tol: cert.tol });
    }
    let group = psi.group().clone();
    let n = group.order();
    let k = gromov_form(psi, side);
    let (vals, vecs) = sym_eigen(&k);
    let max_eig = vals.last().copied().unwrap_or(0.0).max(0.0);
    let cut = tol * max_eig;
    let kept: Vec<usize> = (0..n).filter(|&i| vals[i] > cut && vals[i] > 0.0).collect();
    let dim = kept.len();

    let mut b = vec![vec![0.0; dim]; n];
    for g in 0..n {
        for (j, &idx) in kept.iter().enumerate() {
            b[g][j] = vecs[(g, idx)] * vals[idx].sqrt();
        }
    }

    // alpha_g = C^T B diag(1/lambda), exact because B^T B = diag(lambda)
    let lambda: Vec<f64> = kept.iter().map(|&i| vals[i]).collect();
    let mut alpha = Vec::with_capacity(n);
    let mut worst_law = 0.0f64;
    for g in 0..n {
        let mut a = Mat::zeros(dim, dim);
        for h in 0..n {
            let target = match side {
                Side::Left => sub(&b[group.mul(g, h)], &b[g]),
                Side::Right => sub(&b[group.mul(h, group.inv(g))], &b[group.inv(g)]),
            };
            for i in 0..dim {
                for j in 0..dim {
                    a[(i, j)] += target[i] * b[h][j];
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                a[(i, j)] /= lambda[j];
            }
        }
        for h in 0..n {
            let lhs = a.apply(&b[h]);
            let rhs = match side {
                Side::Left => sub(&b[group.mul(g, h)], &b[g]),
                Side::Right => sub(&b[group.mul(h, group.inv(g))], &b[group.inv(g)]),
            };
            worst_law = worst_law.max(norm(&sub(&lhs, &rhs)));
        }
        alpha.push(a);
    }
    let law_tol = 1e-8 * scale.sqrt().max(1.0);
    if worst_law > law_tol {
        return Err(Error::DegenerateAction(format!(
            "least-squares action residual {worst_law:.3e} exceeds {law_tol:.1e}"
        )));
    }

    Ok(Cocycle {
        group,
        side,
        dim,
        b,
        alpha,
        gram: k,
        psi: psi.values().to_vec(),
        tol,
    })
}

/// Max deviation between `<b1(g), b1(h)>` and `<b2(g^{-1}), b2(h^{-1})>`,
/// the isometry underlying the left/right identification.
pub fn left_right_isometry_residual(c1: &Cocycle, c2: &Cocycle) -> Result<f64> {
    if c1.group() != c2.group() {
        return Err(Error::Validation("cocycles live on different groups".into()));
    }
    if c1.side() != Side::Left || c2.side() != Side::Right {
        return Err(Error::Validation("expected a (left, right) cocycle pair".into()));
    }
    let scale = 1.0 + c1.psi.iter().cloned().fold(0.0, f64::max);
    let psi_diff = c1
        .psi
        .iter()
        .zip(&c2.psi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if psi_diff > 1e-9 * scale {
        return Err(Error::Validation("cocycles come from different length functions".into()));
    }
    let g = c1.group();
    let n = g.order();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b_el in 0..n {
            let lhs = dot(&c1.b[a], &c1.b[b_el]);
            let rhs = dot(&c2.b[g.inv(a)], &c2.b[g.inv(b_el)]);
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

/// Vector-norm threshold used to decide "zero" and "distinct" for cocycle
/// vectors in separation questions.
pub fn separation_tolerance(c: &Cocycle) -> f64 {
    1e-8 * (1.0 + c.max_vector_norm())
}

/// Separation along the Gromov-product definition: `delta` is the least
/// `psi(g)` over elements with nonvanishing cocycle vector (0 when none).
pub fn separation_report(c: &Cocycle) -> SeparationReport {
    let n = c.group().order();
    let eps = separation_tolerance(c);
    let mut delta = f64::INFINITY;
    let mut any_nonzero = false;
    for g in 0..n {
        if norm(&c.b[g]) > eps {
            any_nonzero = true;
            delta = delta.min(c.psi[g]);
        }
    }
    if !any_nonzero {
        delta = 0.0;
    }
    let mut injective = true;
    'outer: for g in 0..n {
        for h in (g + 1)..n {
            if dist_sqr(&c.b[g], &c.b[h]).sqrt() <= eps {
                injective = false;
                break 'outer;
            }
        }
    }
    let well_separated = any_nonzero && delta > 0.0;
    SeparationReport { delta, injective, well_separated, standard: injective && well_separated }
}

/// Distinct-vector counts against the packing bound
/// `count <= (1 + 2R/delta)^d` (constant 1), generic over any vector family.
pub fn packing_counts(
    vectors: &[Vec<f64>],
    dim: usize,
    delta: f64,
    radii: &[f64],
    eps: f64,
) -> Vec<BallCount> {
    radii
        .iter()
        .map(|&r| {
            let mut reps: Vec<&Vec<f64>> = Vec::new();
            for v in vectors {
                if norm(v) <= r + eps
                    && !reps.iter().any(|u| dist_sqr(v, u).sqrt() <= eps)
                {
                    reps.push(v);
                }
            }
            let count = reps.len();
            let bound = (1.0 + 2.0 * r / delta).powi(dim as i32);
            BallCount { radius: r, count, bound, pass: (count as f64) <= bound + 1e-9 }
        })
        .collect()
}

/// Packing bound per radius for a group cocycle; needs `delta > 0`.
pub fn ball_count_check(c: &Cocycle, radii: &[f64]) -> Result<Vec<BallCount>> {
    let sep = separation_report(c);
    if !(sep.delta > 0.0) {
        return Err(Error::NotApplicable("packing bound needs delta > 0".into()));
    }
    Ok(packing_counts(&c.b, c.dim(), sep.delta, radii, separation_tolerance(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_cyclic, build_symmetric, DEFAULT_ORDER_CAP};
    use crate::length::random_inner_length;
    use crate::rng::Rng;

    fn roots_z4() -> LengthFunction {
        LengthFunction::new(build_cyclic(4).unwrap(), vec![0.0, 2.0, 4.0, 2.0]).unwrap()
    }

    #[test]
    fn z4_roots_cocycle_geometry() {
        let psi = roots_z4();
        let c = build_cocycle(&psi, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        assert_eq!(c.dim(), 2);
        let res = c.verify();
        assert!(res.gram < 1e-10, "gram {}", res.gram);
        assert!(res.max() < 1e-8, "{res:?}");
        // hand geometry b(k) = (cos(pi k/2) - 1, sin(pi k/2)), compared
        // through the basis-invariant Gram matrix
        for g in 0..4 {
            for h in 0..4 {
                let bg = [(std::f64::consts::FRAC_PI_2 * g as f64).cos() - 1.0,
                          (std::f64::consts::FRAC_PI_2 * g as f64).sin()];
                let bh = [(std::f64::consts::FRAC_PI_2 * h as f64).cos() - 1.0,
                          (std::f64::consts::FRAC_PI_2 * h as f64).sin()];
                let hand = bg[0] * bh[0] + bg[1] * bh[1];
                assert!((c.gram()[(g, h)] - hand).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn null_length_gives_zero_cocycle() {
        let psi = LengthFunction::new(build_cyclic(4).unwrap(), vec![0.0; 4]).unwrap();
        let c = build_cocycle(&psi, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        assert_eq!(c.dim(), 0);
        let sep = separation_report(&c);
        assert_eq!(sep.delta, 0.0);
        assert!(!sep.injective);
        assert!(!sep.well_separated);
    }

    #[test]
    fn z2_single_block() {
        let psi = LengthFunction::new(build_cyclic(2).unwrap(), vec![0.0, 4.0]).unwrap();
        let c = build_cocycle(&psi, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        assert_eq!(c.dim(), 1);
        assert!((norm(c.b(1)) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn negativity_failure_rejected() {
        let psi = LengthFunction::new(build_cyclic(4).unwrap(), vec![0.0, 1.0, 10.0, 1.0]).unwrap();
        assert!(matches!(
            build_cocycle(&psi, Side::Left, DEFAULT_COCYCLE_TOL),
            Err(Error::NotConditionallyNegative { .. })
        ));
    }

    #[test]
    fn left_right_residuals() {
        let psi = roots_z4();
        let l = build_cocycle(&psi, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        let r = build_cocycle(&psi, Side::Right, DEFAULT_COCYCLE_TOL).unwrap();
        assert!(left_right_isometry_residual(&l, &r).unwrap() < 1e-10);

        // word-length-squared candidate on S_3, only if certified
        let s3 = build_symmetric(3, DEFAULT_ORDER_CAP).unwrap();
        let mut rng = Rng::seed_from(11);
        let psi3 = random_inner_length(&s3, 2, &mut rng);
        let l3 = build_cocycle(&psi3, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        let r3 = build_cocycle(&psi3, Side::Right, DEFAULT_COCYCLE_TOL).unwrap();
        assert!(left_right_isometry_residual(&l3, &r3).unwrap() < 1e-8);
        assert!(l3.verify().max() < 1e-8);
        assert!(r3.verify().max() < 1e-8);

        // zero cocycles
        let z = LengthFunction::new(build_cyclic(3).unwrap(), vec![0.0; 3]).unwrap();
        let lz = build_cocycle(&z, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        let rz = build_cocycle(&z, Side::Right, DEFAULT_COCYCLE_TOL).unwrap();
        assert_eq!(left_right_isometry_residual(&lz, &rz).unwrap(), 0.0);

        // mismatched group rejected
        let other = LengthFunction::new(build_cyclic(5).unwrap(), vec![0.0; 5]).unwrap();
        let lo = build_cocycle(&other, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        assert!(left_right_isometry_residual(&lo, &rz).is_err());
    }

    #[test]
    fn separation_and_packing_z4_roots() {
        let c = build_cocycle(&roots_z4(), Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        let sep = separation_report(&c);
        assert!((sep.delta - 2.0).abs() < 1e-12);
        assert!(sep.injective && sep.standard);

        let counts = ball_count_check(&c, &[0.0, 1.5, 10.0]).unwrap();
        assert_eq!(counts[0].count, 1);
        assert!((counts[0].bound - 1.0).abs() < 1e-12);
        assert!(counts[0].pass);
        assert_eq!(counts[1].count, 3);
        assert!((counts[1].bound - 6.25).abs() < 1e-12);
        assert!(counts[1].pass);
        assert_eq!(counts[2].count, 4); // whole ball, all vectors distinct
        assert!(counts[2].pass);
    }

    #[test]
    fn packing_not_applicable_for_null() {
        let z = LengthFunction::new(build_cyclic(3).unwrap(), vec![0.0; 3]).unwrap();
        let c = build_cocycle(&z, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        assert!(matches!(ball_count_check(&c, &[1.0]), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn action_preserves_inner_products_of_random_vectors() {
        let mut rng = Rng::seed_from(23);
        let g = build_symmetric(3, DEFAULT_ORDER_CAP).unwrap();
        let psi = random_inner_length(&g, 2, &mut rng);
        let c = build_cocycle(&psi, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        for _ in 0..50 {
            let x = rng.normal_vec(c.dim());
            let y = rng.normal_vec(c.dim());
            let ip: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            for gg in 0..g.order() {
                let ax = c.alpha(gg).apply(&x);
                let ay = c.alpha(gg).apply(&y);
                let aip: f64 = ax.iter().zip(&ay).map(|(a, b)| a * b).sum();
                let scale = 1.0 + ip.abs();
                assert!((aip - ip).abs() < 1e-8 * scale, "{}", (aip - ip).abs());
            }
        }
    }

    #[test]
    fn shared_types_are_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<crate::group::FiniteGroup>();
        assert_send_sync::<crate::group::WordBall>();
        assert_send_sync::<LengthFunction>();
        assert_send_sync::<Cocycle>();
        assert_send_sync::<crate::algebra::AlgebraElement>();
        assert_send_sync::<crate::multiplier::MultiplierSymbol>();
        assert_send_sync::<crate::littlewood::DyadicFamily>();
    }

    #[test]
    fn cocycle_json_round_trip() {
        let psi = roots_z4();
        let c = build_cocycle(&psi, Side::Left, DEFAULT_COCYCLE_TOL).unwrap();
        let wire = serde_json::to_string(&c.to_json()).unwrap();
        let parsed: CocycleJson = serde_json::from_str(&wire).unwrap();
        let back = Cocycle::from_json(psi.group().clone(), &parsed).unwrap();
        assert!(back.verify().max() < 1e-8);
        assert!(back.gram().max_abs_diff(c.gram()) == 0.0);

        // shape violations are rejected
        let mut bad = parsed.clone();
        bad.psi.pop();
        assert!(Cocycle::from_json(psi.group().clone(), &bad).is_err());
    }

    #[test]
    fn random_certified_lengths_round_trip() {
        let mut rng = Rng::seed_from(21);
        for n in [3usize, 5, 8] {
            let g = build_cyclic(n).unwrap();
            let psi = random_inner_length(&g, 2, &mut rng);
            for side in [Side::Left, Side::Right] {
                let c = build_cocycle(&psi, side, DEFAULT_COCYCLE_TOL).unwrap();
                let res = c.verify();
                let scale = 1.0 + psi.max_value();
                assert!(res.metric < 1e-10 * scale, "metric {}", res.metric);
                assert!(res.law < 1e-8 * scale.sqrt(), "law {}", res.law);
                assert!(res.orthogonality < 1e-8, "orth {}", res.orthogonality);
            }
        }
    }
}
