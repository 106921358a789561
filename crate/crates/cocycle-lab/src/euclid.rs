//! FFT experiments on periodized grids.
//!
//! Grid signals are complex samples on `N` points (`N` a power of two) with
//! the period normalized to 1. Frequencies are signed integers in
//! `(-N/2, N/2]`; a symbol is evaluated at `frequency * scale` with `scale`
//! defaulting to `1/N`. Norms use the normalized counting measure, so the
//! `p = 2` operator norm of a symbol is exactly its sup over the grid
//! frequencies.
//!
//! ```
//! use cocycle_lab::euclid::{donut_symbol, fft_apply, GridSignal};
//! use cocycle_lab::rng::Rng;
//! use num_complex::Complex64;
//!
//! let donut = donut_symbol(1.0, std::f64::consts::SQRT_2, 0.25)?;
//! assert_eq!(donut.eval(0.0), 0.0); // both sines vanish
//!
//! // applying the symbol never beats its sup times the L2 norm
//! let mut rng = Rng::seed_from(3);
//! let f = GridSignal::random(256, &mut rng)?;
//! let out = fft_apply(&|xi| Complex64::new(donut.eval(xi), 0.0), &f, 1.0 / 256.0)?;
//! assert!(out.norm(2.0)? <= 2f64.powf(0.25) * f.norm(2.0)? + 1e-12);
//! # Ok::<(), cocycle_lab::Error>(())
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Complex samples on a power-of-two grid.
#[derive(Debug, Clone)]
pub struct GridSignal {
    pub samples: Vec<Complex64>,
}

impl GridSignal {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        let n = samples.len();
        if n == 0 || n & (n - 1) != 0 {
            return Err(Error::InvalidParameter(format!(
                "grid length must be a power of two, got {n}"
            )));
        }
        Ok(GridSignal { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn random(n: usize, rng: &mut Rng) -> Result<Self> {
        GridSignal::new((0..n).map(|_| rng.complex_normal()).collect())
    }

    /// `((1/N) sum |f(x)|^p)^{1/p}`; `p = infinity` is the max.
    pub fn norm(&self, p: f64) -> Result<f64> {
        if p.is_infinite() && p > 0.0 {
            return Ok(self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter(format!("grid norm needs p >= 1, got {p}")));
        }
        let n = self.len() as f64;
        Ok((self.samples.iter().map(|z| z.norm().powf(p)).sum::<f64>() / n).powf(1.0 / p))
    }

    /// Normalized DFT coefficients `fhat(k) = (1/N) sum_x f(x) e^{-2 pi i k x / N}`,
    /// so that `(1/N) sum |f|^2 = sum |fhat|^2`.
    pub fn dft(&self) -> Vec<Complex64> {
        let mut buf = self.samples.clone();
        fft_in_place(&mut buf, false);
        let n = self.len() as f64;
        for z in buf.iter_mut() {
            *z /= n;
        }
        buf
    }

    pub fn from_dft(coeffs: &[Complex64]) -> Result<Self> {
        let mut buf = coeffs.to_vec();
        fft_in_place(&mut buf, true);
        GridSignal::new(buf)
    }

    /// Binary little-endian `(re, im)` pairs.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len() * 16);
        for z in &self.samples {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() % 16 != 0 {
            return Err(Error::Validation("signal byte length must be a multiple of 16".into()));
        }
        let samples = bytes
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[0..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..16].try_into().unwrap()),
                )
            })
            .collect();
        GridSignal::new(samples)
    }

    /// CSV with header `re,im`, one sample per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im\n");
        for z in &self.samples {
            out.push_str(&format!("{:.17e},{:.17e}\n", z.re, z.im));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 && line.trim() == "re,im" {
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let Some((re, im)) = line.split_once(',') else {
                return Err(Error::Validation(format!("signal CSV line {i} is not re,im")));
            };
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Validation(format!("bad float '{s}' on line {i}")))
            };
            samples.push(Complex64::new(parse(re)?, parse(im)?));
        }
        GridSignal::new(samples)
    }
}

/// Iterative radix-2 FFT; `invert` applies the inverse transform without
/// normalization (the normalization convention lives in `dft`/`from_dft`).
fn fft_in_place(buf: &mut [Complex64], invert: bool) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    // bit reversal
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let sign = if invert { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * std::f64::consts::PI / len as f64;
        let wl = Complex64::from_polar(1.0, ang);
        let mut i = 0;
        while i < n {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = buf[i + k];
                let v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wl;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Signed frequency of DFT bin `k` on an `N`-grid: values in `(-N/2, N/2]`.
pub fn signed_frequency(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// The donut symbol `xi -> (sin^2(alpha xi) + sin^2(beta xi))^gamma`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DonutSymbol {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Set when `gamma` falls outside `(0, 1)`; the symbol stays evaluable.
    pub warning: Option<String>,
}

/// Builds the donut symbol; the boundedness statement needs
/// `0 < gamma < 1/2`, values outside `(0, 1)` only warn.
pub fn donut_symbol(alpha: f64, beta: f64, gamma: f64) -> Result<DonutSymbol> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParameter("donut symbol needs alpha, beta > 0".into()));
    }
    let warning = if gamma <= 0.0 || gamma >= 1.0 {
        Some(format!("gamma = {gamma} outside (0,1); the multiplier statement needs (0, 1/2)"))
    } else {
        None
    };
    Ok(DonutSymbol { alpha, beta, gamma, warning })
}

impl DonutSymbol {
    pub fn eval(&self, xi: f64) -> f64 {
        let s = (self.alpha * xi).sin().powi(2) + (self.beta * xi).sin().powi(2);
        s.powf(self.gamma)
    }
}

/// Applies a frequency symbol to a grid signal: DFT, multiply at
/// `signed_frequency * scale`, inverse DFT.
pub fn fft_apply(
    symbol: &dyn Fn(f64) -> Complex64,
    signal: &GridSignal,
    scale: f64,
) -> Result<GridSignal> {
    let n = signal.len();
    let mut coeffs = signal.dft();
    for (k, c) in coeffs.iter_mut().enumerate() {
        let xi = signed_frequency(k, n) as f64 * scale;
        *c *= symbol(xi);
    }
    GridSignal::from_dft(&coeffs)
}

/// Exact `p = 2` operator norm on the grid: sup of `|symbol|` over the grid
/// frequencies.
pub fn l2_norm_exact_grid(symbol: &dyn Fn(f64) -> Complex64, n: usize, scale: f64) -> f64 {
    (0..n)
        .map(|k| symbol(signed_frequency(k, n) as f64 * scale).norm())
        .fold(0.0, f64::max)
}

/// One grid size in a norm sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: usize,
    pub p: f64,
    pub lower_bound: f64,
    pub trials: usize,
}

/// Randomized-ascent lower bound on the `L_p -> L_p` norm of the symbol on
/// one grid. At `p = 2` the norm is returned exactly (Plancherel).
pub fn empirical_norm_lower_bound(
    symbol: &dyn Fn(f64) -> Complex64,
    p: f64,
    n: usize,
    trials: usize,
    steps: usize,
    seed: u64,
    scale: f64,
) -> Result<f64> {
    if p == 2.0 {
        return Ok(l2_norm_exact_grid(symbol, n, scale));
    }
    if !(p >= 1.0) && !p.is_infinite() {
        return Err(Error::InvalidParameter("sweep needs p >= 1".into()));
    }
    let ratio = |f: &GridSignal| -> Result<f64> {
        let denom = f.norm(p)?;
        if denom < 1e-300 {
            return Ok(0.0);
        }
        Ok(fft_apply(symbol, f, scale)?.norm(p)? / denom)
    };
    // bin with the largest symbol modulus; the pure frequency there has
    // ratio |symbol| at every p and makes a strong deterministic start
    let peak = (0..n)
        .max_by(|&a, &b| {
            let sa = symbol(signed_frequency(a, n) as f64 * scale).norm();
            let sb = symbol(signed_frequency(b, n) as f64 * scale).norm();
            sa.partial_cmp(&sb).unwrap()
        })
        .unwrap_or(0);
    let mut best = 0.0f64;
    for trial in 0..trials.max(1) {
        let mut rng = Rng::child(seed, "fft-sweep", (n as u64) << 16 | trial as u64);
        let mut f = if trial == 0 {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
            coeffs[peak] = Complex64::new(1.0, 0.0);
            GridSignal::from_dft(&coeffs)?
        } else {
            GridSignal::random(n, &mut rng)?
        };
        let mut current = ratio(&f)?;
        let mut step_size = 0.5;
        for _ in 0..steps {
            let idx = rng.below(n);
            let delta = step_size * rng.normal();
            let mut cand = f.clone();
            if rng.uniform() < 0.5 {
                cand.samples[idx] += Complex64::new(delta, 0.0);
            } else {
                cand.samples[idx] += Complex64::new(0.0, delta);
            }
            let r = ratio(&cand)?;
            if r > current {
                current = r;
                f = cand;
            } else {
                step_size *= 0.97;
                if step_size < 1e-5 {
                    step_size = 0.25;
                }
            }
        }
        best = best.max(current);
    }
    Ok(best)
}

/// Lower bounds across grid sizes.
pub fn empirical_norm_sweep(
    symbol: &dyn Fn(f64) -> Complex64,
    p: f64,
    n_list: &[usize],
    trials: usize,
    steps: usize,
    seed: u64,
    scale_of: &dyn Fn(usize) -> f64,
) -> Result<Vec<SweepPoint>> {
    n_list
        .iter()
        .map(|&n| {
            let lb =
                empirical_norm_lower_bound(symbol, p, n, trials, steps, seed, scale_of(n))?;
            Ok(SweepPoint { n, p, lower_bound: lb, trials })
        })
        .collect()
}

/// Restriction comparison: empirical norms of the symbol sampled at lattice
/// step `h` versus `h/2` on the same grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictionCompare {
    pub coarse: f64,
    pub fine: f64,
    pub drift: f64,
}

pub fn restriction_compare(
    symbol: &dyn Fn(f64) -> Complex64,
    h: f64,
    p: f64,
    n: usize,
    trials: usize,
    steps: usize,
    seed: u64,
) -> Result<RestrictionCompare> {
    let coarse = empirical_norm_lower_bound(symbol, p, n, trials, steps, seed, h)?;
    let fine = empirical_norm_lower_bound(symbol, p, n, trials, steps, seed ^ 0xF1, h / 2.0)?;
    Ok(RestrictionCompare { coarse, fine, drift: (coarse - fine).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plancherel_roundtrip() {
        let mut rng = Rng::seed_from(71);
        for n in [1usize, 2, 8, 64, 512] {
            let f = GridSignal::random(n, &mut rng).unwrap();
            let coeffs = f.dft();
            let time_sq = f.norm(2.0).unwrap().powi(2);
            let freq_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
            assert!((time_sq - freq_sq).abs() < 1e-10 * (1.0 + time_sq));
            let back = GridSignal::from_dft(&coeffs).unwrap();
            let err: f64 = back
                .samples
                .iter()
                .zip(&f.samples)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10);
        }
        assert!(GridSignal::new(vec![Complex64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn symbol_composition_and_identity() {
        let mut rng = Rng::seed_from(72);
        let f = GridSignal::random(128, &mut rng).unwrap();
        let s1 = |xi: f64| Complex64::new((xi * 1.3).cos(), 0.2 * xi);
        let s2 = |xi: f64| Complex64::new(0.5, (xi * 0.7).sin());
        let a = fft_apply(&s2, &fft_apply(&s1, &f, 1.0).unwrap(), 1.0).unwrap();
        let prod = |xi: f64| s1(xi) * s2(xi);
        let b = fft_apply(&prod, &f, 1.0).unwrap();
        let err: f64 = a
            .samples
            .iter()
            .zip(&b.samples)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
        // identity symbol
        let ident = fft_apply(&|_| Complex64::new(1.0, 0.0), &f, 1.0).unwrap();
        let err: f64 = ident
            .samples
            .iter()
            .zip(&f.samples)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn parseval_bound_and_peak_frequency() {
        let n = 64;
        let s = |xi: f64| Complex64::new(1.0 / (1.0 + xi * xi), 0.0);
        let mut rng = Rng::seed_from(73);
        let f = GridSignal::random(n, &mut rng).unwrap();
        let out = fft_apply(&s, &f, 1.0).unwrap();
        let smax = l2_norm_exact_grid(&s, n, 1.0);
        assert!(out.norm(2.0).unwrap() <= smax * f.norm(2.0).unwrap() + 1e-10);
        // equality for the pure frequency achieving the sup (xi = 0)
        let pure = GridSignal::new(vec![Complex64::new(1.0, 0.0); n]).unwrap();
        let pout = fft_apply(&s, &pure, 1.0).unwrap();
        assert!((pout.norm(2.0).unwrap() - smax * pure.norm(2.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn domination_orders_l2_norms() {
        let n = 256;
        let s1 = |xi: f64| Complex64::new(0.5 / (1.0 + xi.abs()), 0.0);
        let s2 = |xi: f64| Complex64::new(1.0 / (1.0 + xi.abs()), 0.0);
        assert!(l2_norm_exact_grid(&s1, n, 0.1) <= l2_norm_exact_grid(&s2, n, 0.1) + 1e-15);
    }

    #[test]
    fn donut_symbol_values() {
        let d = donut_symbol(1.0, std::f64::consts::SQRT_2, 0.25).unwrap();
        assert!(d.warning.is_none());
        // both sines vanish at xi = 0
        assert_eq!(d.eval(0.0), 0.0);
        // bounded by 2^gamma
        for k in 0..200 {
            let xi = k as f64 * 0.37;
            assert!(d.eval(xi) <= 2f64.powf(0.25) + 1e-12);
        }
        // alpha = beta collapses to 2^gamma |sin|^{2 gamma}
        let same = donut_symbol(1.3, 1.3, 0.25).unwrap();
        for k in 1..50 {
            let xi = k as f64 * 0.11;
            let expect = 2f64.powf(0.25) * (1.3 * xi).sin().abs().powf(0.5);
            assert!((same.eval(xi) - expect).abs() < 1e-12);
        }
        let warned = donut_symbol(1.0, 2.0, 1.5).unwrap();
        assert!(warned.warning.is_some());
        assert!(warned.eval(1.0).is_finite());
    }

    #[test]
    fn sweep_constant_symbol() {
        let one = |_: f64| Complex64::new(1.0, 0.0);
        for p in [2.0, 4.0] {
            let pts =
                empirical_norm_sweep(&one, p, &[64, 128], 2, 30, 5, &|n| 1.0 / n as f64).unwrap();
            for pt in pts {
                assert!((pt.lower_bound - 1.0).abs() < 1e-9, "{pt:?}");
            }
        }
    }

    #[test]
    fn restriction_drift_zero_for_constants() {
        let one = |_: f64| Complex64::new(1.0, 0.0);
        let r = restriction_compare(&one, 0.5, 4.0, 64, 2, 30, 5).unwrap();
        assert!(r.drift < 1e-9);
        // p = 2 drift computable exactly from the two lattice sups
        let s = |xi: f64| Complex64::new((-xi * xi).exp(), 0.0);
        let r2 = restriction_compare(&s, 0.5, 2.0, 64, 1, 1, 5).unwrap();
        let coarse = l2_norm_exact_grid(&s, 64, 0.5);
        let fine = l2_norm_exact_grid(&s, 64, 0.25);
        assert!((r2.drift - (coarse - fine).abs()) < 1e-12);
    }

    #[test]
    fn signal_bytes_roundtrip() {
        let mut rng = Rng::seed_from(74);
        let f = GridSignal::random(16, &mut rng).unwrap();
        let back = GridSignal::from_bytes(&f.to_bytes()).unwrap();
        for (a, b) in back.samples.iter().zip(&f.samples) {
            assert_eq!(a, b);
        }
        let csv_back = GridSignal::from_csv(&f.to_csv()).unwrap();
        for (a, b) in csv_back.samples.iter().zip(&f.samples) {
            assert_eq!(a, b);
        }
        assert!(GridSignal::from_csv("re,im\n1.0\n").is_err());
    }
}
