//! Dense linear algebra kernels.
//!
//! Everything downstream (PSD certificates, Schatten norms, cocycle
//! construction) reduces to symmetric/Hermitian eigendecompositions, so the
//! crate carries its own cyclic Jacobi solvers instead of an external BLAS.
//! Jacobi is slow in O-notation but extremely accurate, which is what the
//! 1e-10 contracts in the rest of the crate need.

use num_complex::Complex64;

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `max_ij |A_ij - B_ij|`
    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `|| A^T A - I ||_max`, the orthogonality residual.
    pub fn orthogonality_residual(&self) -> f64 {
        let g = self.transpose().matmul(self);
        let mut worst = 0.0f64;
        for i in 0..g.rows {
            for j in 0..g.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).abs());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= *b;
        }
        out
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi.
///
/// Returns `(eigenvalues ascending, eigenvector columns)` with
/// `A = V diag(l) V^T`. Input is symmetrized before iterating.
pub fn sym_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut h = Mat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let mut v = Mat::identity(n);
    let scale = h.frobenius().max(1e-300);
    let stop = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += h[(p, q)] * h[(p, q)];
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h[(p, q)];
                if hpq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (h[(q, q)] - h[(p, p)]) / (2.0 * hpq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // rotate rows/cols p,q
                for k in 0..n {
                    let hkp = h[(k, p)];
                    let hkq = h[(k, q)];
                    h[(k, p)] = c * hkp - s * hkq;
                    h[(k, q)] = s * hkp + c * hkq;
                }
                for k in 0..n {
                    let hpk = h[(p, k)];
                    let hqk = h[(q, k)];
                    h[(p, k)] = c * hpk - s * hqk;
                    h[(q, k)] = s * hpk + c * hqk;
                }
                h[(p, q)] = 0.0;
                h[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(i, i)].partial_cmp(&h[(j, j)]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| h[(i, i)]).collect();
    let vecs = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    (vals, vecs)
}

/// Eigenvalues (ascending) and unitary eigenvectors of a complex Hermitian
/// matrix, by Jacobi rotations with complex phase.
pub fn herm_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut h = CMat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let mut v = CMat::identity(n);
    let scale = h.frobenius_sqr().sqrt().max(1e-300);
    let stop = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += h[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h[(p, q)];
                let m = hpq.norm();
                if m <= 1e-300 {
                    continue;
                }
                let phase = hpq / m;
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                let theta = (aqq - app) / (2.0 * m);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // unitary U = [[c, s phase], [-s conj(phase), c]] on (p,q),
                // the complex-phase version of the plane rotation
                let sp = s * phase;
                let spc = s * phase.conj();
                for k in 0..n {
                    let hkp = h[(k, p)];
                    let hkq = h[(k, q)];
                    h[(k, p)] = c * hkp - spc * hkq;
                    h[(k, q)] = sp * hkp + c * hkq;
                }
                for k in 0..n {
                    let hpk = h[(p, k)];
                    let hqk = h[(q, k)];
                    h[(p, k)] = c * hpk - sp * hqk;
                    h[(q, k)] = spc * hpk + c * hqk;
                }
                h[(p, q)] = Complex64::new(0.0, 0.0);
                h[(q, p)] = Complex64::new(0.0, 0.0);
                h[(p, p)] = Complex64::new(h[(p, p)].re, 0.0);
                h[(q, q)] = Complex64::new(h[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - spc * vkq;
                    v[(k, q)] = sp * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(i, i)].re.partial_cmp(&h[(j, j)].re).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| h[(i, i)].re).collect();
    let vecs = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    (vals, vecs)
}

/// Eigenvalues only, ascending.
pub fn herm_eigenvalues(a: &CMat) -> Vec<f64> {
    herm_eigen(a).0
}

/// Singular values (descending) of a complex matrix, via the Hermitian
/// eigenvalues of `A* A` clamped at zero.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let gram = a.adjoint().matmul(a);
    let mut vals: Vec<f64> = herm_eigenvalues(&gram)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    vals.reverse();
    vals
}

/// Thin SVD of a real square matrix: `A = U diag(s) V^T`, singular values
/// descending. Columns of `U` associated to (numerically) zero singular
/// values are completed so that `U V^T` acts as the identity there.
pub fn svd_real(a: &Mat) -> (Mat, Vec<f64>, Mat) {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let gram = a.transpose().matmul(a);
    let (mut vals, mut vecs) = sym_eigen(&gram);
    vals.reverse();
    vecs = Mat::from_fn(n, n, |i, j| vecs[(i, n - 1 - j)]);
    let smax = vals.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let sv: Vec<f64> = vals.iter().map(|l| l.max(0.0).sqrt()).collect();

    let mut u = Mat::zeros(n, n);
    let cutoff = 1e-12 * smax.max(1e-300);
    let mut fixed: Vec<usize> = Vec::new();
    for j in 0..n {
        if sv[j] > cutoff {
            let vj: Vec<f64> = (0..n).map(|i| vecs[(i, j)]).collect();
            let uj = a.apply(&vj);
            for i in 0..n {
                u[(i, j)] = uj[i] / sv[j];
            }
            fixed.push(j);
        }
    }
    // complete remaining columns: seed with the matching V column so that
    // U V^T restricts to the identity on the numerical null space
    for j in 0..n {
        if sv[j] > cutoff {
            continue;
        }
        let mut cand: Vec<f64> = (0..n).map(|i| vecs[(i, j)]).collect();
        let mut ok = orthonormalize_against(&mut cand, &u, &fixed);
        if !ok {
            // fall back to coordinate vectors
            for axis in 0..n {
                cand = vec![0.0; n];
                cand[axis] = 1.0;
                ok = orthonormalize_against(&mut cand, &u, &fixed);
                if ok {
                    break;
                }
            }
        }
        assert!(ok, "failed to complete orthogonal basis");
        for i in 0..n {
            u[(i, j)] = cand[i];
        }
        fixed.push(j);
    }
    (u, sv, vecs)
}

fn orthonormalize_against(v: &mut [f64], basis: &Mat, cols: &[usize]) -> bool {
    let n = v.len();
    for _ in 0..2 {
        for &c in cols {
            let dot: f64 = (0..n).map(|i| v[i] * basis[(i, c)]).sum();
            for i in 0..n {
                v[i] -= dot * basis[(i, c)];
            }
        }
    }
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-8 {
        return false;
    }
    for x in v.iter_mut() {
        *x /= norm;
    }
    true
}

/// Orthogonal Procrustes: the orthogonal matrix maximizing `tr(Q^T M)`,
/// i.e. the best orthogonal fit `Q source ~ target` for
/// `M = sum_i target_i source_i^T`.
pub fn procrustes(m: &Mat) -> Mat {
    let (u, _s, v) = svd_real(m);
    u.matmul(&v.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn random_sym(n: usize, rng: &mut Rng) -> Mat {
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = rng.normal();
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        a
    }

    #[test]
    fn sym_eigen_reconstructs() {
        let mut rng = Rng::seed_from(1);
        for n in [1, 2, 5, 12, 30] {
            let a = random_sym(n, &mut rng);
            let (vals, vecs) = sym_eigen(&a);
            assert!(vecs.orthogonality_residual() < 1e-12);
            let mut lam = Mat::zeros(n, n);
            for i in 0..n {
                lam[(i, i)] = vals[i];
            }
            let recon = vecs.matmul(&lam).matmul(&vecs.transpose());
            assert!(recon.max_abs_diff(&a) < 1e-11 * (1.0 + a.frobenius()));
            for w in vals.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn sym_eigen_circulant_oracle() {
        // circulant over Z_8 with first row c: eigenvalues sum_j c_j cos(2 pi jk/8)
        let n = 8;
        let c = [0.0, 1.0, 3.0, -2.0, 5.0, -2.0, 3.0, 1.0]; // symmetric c_j = c_{n-j}
        let a = Mat::from_fn(n, n, |i, j| c[(j + n - i) % n]);
        let (vals, _) = sym_eigen(&a);
        let mut expected: Vec<f64> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| c[j] * (2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64).cos())
                    .sum()
            })
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (v, e) in vals.iter().zip(&expected) {
            assert!((v - e).abs() < 1e-10, "{v} vs {e}");
        }
    }

    #[test]
    fn herm_eigen_matches_real_embedding() {
        let mut rng = Rng::seed_from(2);
        for n in [2, 3, 7, 15] {
            let mut h = CMat::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    if i == j {
                        h[(i, i)] = Complex64::new(rng.normal(), 0.0);
                    } else {
                        let z = Complex64::new(rng.normal(), rng.normal());
                        h[(i, j)] = z;
                        h[(j, i)] = z.conj();
                    }
                }
            }
            let (vals, vecs) = herm_eigen(&h);
            // unitarity
            let g = vecs.adjoint().matmul(&vecs);
            let idn = CMat::identity(n);
            assert!(g.max_abs_diff(&idn) < 1e-12);
            // independent oracle: real 2n x 2n embedding [[A,-B],[B,A]]
            let emb = Mat::from_fn(2 * n, 2 * n, |i, j| {
                let (bi, ii) = (i / n, i % n);
                let (bj, jj) = (j / n, j % n);
                match (bi, bj) {
                    (0, 0) | (1, 1) => h[(ii, jj)].re,
                    (0, 1) => -h[(ii, jj)].im,
                    _ => h[(ii, jj)].im,
                }
            });
            let (evals, _) = sym_eigen(&emb);
            // embedding doubles each eigenvalue
            for (k, v) in vals.iter().enumerate() {
                assert!((evals[2 * k] - v).abs() < 1e-10);
                assert!((evals[2 * k + 1] - v).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn singular_values_of_unitary_are_one() {
        let n = 6;
        // permutation + phases is unitary
        let mut a = CMat::zeros(n, n);
        for i in 0..n {
            a[((i + 2) % n, i)] = Complex64::from_polar(1.0, 0.7 * i as f64);
        }
        for s in singular_values(&a) {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_and_procrustes() {
        let mut rng = Rng::seed_from(3);
        for n in [2, 4, 9] {
            let a = random_sym(n, &mut rng).matmul(&random_sym(n, &mut rng));
            let (u, s, v) = svd_real(&a);
            assert!(u.orthogonality_residual() < 1e-10);
            assert!(v.orthogonality_residual() < 1e-10);
            let mut sd = Mat::zeros(n, n);
            for i in 0..n {
                sd[(i, i)] = s[i];
            }
            let recon = u.matmul(&sd).matmul(&v.transpose());
            assert!(recon.max_abs_diff(&a) < 1e-9 * (1.0 + a.frobenius()));

            // procrustes recovers a rotation from its own cross-covariance
            let q0 = procrustes(&random_sym(n, &mut rng));
            assert!(q0.orthogonality_residual() < 1e-10);
            let m = q0.clone(); // M = Q * I
            let q = procrustes(&m);
            assert!(q.max_abs_diff(&q0) < 1e-9);
        }
    }
}
