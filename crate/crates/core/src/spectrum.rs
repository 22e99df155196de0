//! Boundary functions on uniform circle grids and their Fourier data.
//!
//! A [`BoundarySamples`] value holds `f(e^{2πij/M})` for `j = 0..M`. The
//! discrete transform gives the coefficients `f̂(n)` over a symmetric window
//! `|n| <= K`, which are exact for trigonometric polynomials of degree at most
//! `K` whenever `M > 2K` and otherwise carry aliasing from the tail beyond
//! `M - K`. Downstream rank decisions assume `M >= 8K`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::polynomial::ComplexPolynomial;

/// Smallest admissible grid.
pub const MIN_GRID_SIZE: usize = 4;
/// Default grid size for sampled analyses.
pub const DEFAULT_GRID_SIZE: usize = 4096;
/// Series evaluation refuses points with `|z| > 1 - DEFAULT_INTERIOR_MARGIN`.
pub const DEFAULT_INTERIOR_MARGIN: f64 = 1e-3;
/// Relative coefficient noise floor.
pub const DEFAULT_COEFF_NOISE: f64 = 1e-10;

/// The grid point `e^{2πij/M}`, exact at quarter turns.
pub fn grid_point(j: usize, grid_size: usize) -> Complex64 {
    let j = j % grid_size;
    if (4 * j) % grid_size == 0 {
        return match 4 * j / grid_size {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid_size as f64)
}

/// Values of a boundary function on the uniform grid of `M` points.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySamples {
    values: Vec<Complex64>,
}

impl BoundarySamples {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.len() < MIN_GRID_SIZE {
            return Err(Error::InvalidInput(format!(
                "grid size {} is below the minimum {MIN_GRID_SIZE}",
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite sample {} at grid index {j}",
                values[j]
            )));
        }
        Ok(Self { values })
    }

    /// Evaluates `generator` at every grid point.
    pub fn sample<F>(generator: F, grid_size: usize) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64,
    {
        if grid_size < MIN_GRID_SIZE {
            return Err(Error::InvalidInput(format!(
                "grid size {grid_size} is below the minimum {MIN_GRID_SIZE}"
            )));
        }
        Self::new(
            (0..grid_size)
                .map(|j| generator(grid_point(j, grid_size)))
                .collect(),
        )
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn point(&self, j: usize) -> Complex64 {
        grid_point(j, self.grid_size())
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `(1/M) Σ |f(z_j)|²`, summed pairwise.
    pub fn mean_square(&self) -> f64 {
        let squares: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        pairwise_sum(&squares) / self.grid_size() as f64
    }

    /// Samples of `P(z) f(z) + Q(z)` on the same grid.
    pub fn composite(&self, p: &ComplexPolynomial, q: &ComplexPolynomial) -> Result<Self> {
        let m = self.grid_size();
        Self::new(
            self.values
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let z = grid_point(j, m);
                    p.eval(z) * v + q.eval(z)
                })
                .collect(),
        )
    }

    /// Pointwise map `f(z_j) ↦ g(z_j, f(z_j))`.
    pub fn map<G>(&self, g: G) -> Result<Self>
    where
        G: Fn(Complex64, Complex64) -> Complex64,
    {
        let m = self.grid_size();
        Self::new(
            self.values
                .iter()
                .enumerate()
                .map(|(j, &v)| g(grid_point(j, m), v))
                .collect(),
        )
    }

    /// All `M` discrete coefficients, `out[n mod M] = (1/M) Σ_j f(z_j) z_j^{-n}`.
    pub fn dft(&self) -> Vec<Complex64> {
        let m = self.grid_size();
        let mut buf = self.values.clone();
        FftPlanner::<f64>::new().plan_fft_forward(m).process(&mut buf);
        let scale = 1.0 / m as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Inverse of [`BoundarySamples::dft`]: values from a full coefficient array.
    pub fn from_dft(coeffs: &[Complex64]) -> Result<Self> {
        let mut buf = coeffs.to_vec();
        FftPlanner::<f64>::new()
            .plan_fft_inverse(buf.len())
            .process(&mut buf);
        Self::new(buf)
    }
}

/// Coefficients `f̂(n)` for `|n| <= K`, computed from a grid of `M` samples.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSpectrum {
    half_window: usize,
    coeffs: Vec<Complex64>,
    source_grid_size: usize,
}

impl FourierSpectrum {
    /// Builds a spectrum from explicit coefficients `f̂(-K), ..., f̂(K)`.
    pub fn from_coeffs(half_window: usize, coeffs: Vec<Complex64>, source_grid_size: usize) -> Result<Self> {
        if coeffs.len() != 2 * half_window + 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients for half window {half_window}, got {}",
                2 * half_window + 1,
                coeffs.len()
            )));
        }
        if half_window > max_half_window(source_grid_size) {
            return Err(Error::Precondition(format!(
                "half window {half_window} exceeds the alias-free bound {} for grid size {source_grid_size}",
                max_half_window(source_grid_size)
            )));
        }
        Ok(Self {
            half_window,
            coeffs,
            source_grid_size,
        })
    }

    pub fn half_window(&self) -> usize {
        self.half_window
    }

    pub fn source_grid_size(&self) -> usize {
        self.source_grid_size
    }

    pub fn try_coeff(&self, n: i64) -> Option<Complex64> {
        let k = self.half_window as i64;
        (n.abs() <= k).then(|| self.coeffs[(n + k) as usize])
    }

    /// `f̂(n)`.
    ///
    /// # Panics
    ///
    /// When `|n|` exceeds the half window.
    pub fn coeff(&self, n: i64) -> Complex64 {
        self.try_coeff(n).unwrap_or_else(|| {
            panic!(
                "coefficient index {n} outside half window {}",
                self.half_window
            )
        })
    }

    /// Coefficients in index order `-K..=K`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Σ_{|n|<=K} |f̂(n)|²`.
    pub fn energy(&self) -> f64 {
        let squares: Vec<f64> = self.coeffs.iter().map(|c| c.norm_sqr()).collect();
        pairwise_sum(&squares)
    }

    /// `Σ_{-K<=n<0} |f̂(n)|²`.
    pub fn coanalytic_energy(&self) -> f64 {
        let squares: Vec<f64> = self.coeffs[..self.half_window]
            .iter()
            .map(|c| c.norm_sqr())
            .collect();
        pairwise_sum(&squares)
    }

    /// Spectrum of `z^s f`, i.e. `n ↦ f̂(n - s)`, on the largest window the
    /// current one supports.
    pub fn shifted(&self, s: i64) -> Result<Self> {
        let k = self.half_window as i64;
        let new_k = k - s.abs();
        if new_k < 0 {
            return Err(Error::Precondition(format!(
                "shift {s} exhausts half window {k}"
            )));
        }
        let coeffs = (-new_k..=new_k).map(|n| self.coeff(n - s)).collect();
        Self::from_coeffs(new_k as usize, coeffs, self.source_grid_size)
    }

    /// Spectrum of `P·f` restricted to the window the product supports:
    /// `(Pf)^(j) = Σ_k P̂(k) f̂(j - k)`.
    pub fn times_polynomial(&self, p: &ComplexPolynomial) -> Result<Self> {
        let d = p.coeffs().len() as i64 - 1;
        let k = self.half_window as i64;
        let new_k = k - d;
        if new_k < 0 {
            return Err(Error::Precondition(format!(
                "polynomial degree {d} exhausts half window {k}"
            )));
        }
        let coeffs = (-new_k..=new_k)
            .map(|j| {
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| c * self.coeff(j - i as i64))
                    .sum()
            })
            .collect();
        Self::from_coeffs(new_k as usize, coeffs, self.source_grid_size)
    }

    /// Evaluates the truncated Fourier series `Σ_{|n|<=K} f̂(n) z^n` on the
    /// source grid.
    pub fn synthesize(&self) -> Result<BoundarySamples> {
        let m = self.source_grid_size;
        let k = self.half_window as i64;
        let mut full = vec![Complex64::new(0.0, 0.0); m];
        for n in -k..=k {
            full[n.rem_euclid(m as i64) as usize] += self.coeff(n);
        }
        BoundarySamples::from_dft(&full)
    }
}

/// Largest half window free of index wrap-around on an `M` grid.
pub fn max_half_window(grid_size: usize) -> usize {
    grid_size.saturating_sub(1) / 2
}

/// `f̂(n) = (1/M) Σ_j f(z_j) z_j^{-n}` for `|n| <= K`.
pub fn fourier_coefficients(samples: &BoundarySamples, half_window: usize) -> Result<FourierSpectrum> {
    let m = samples.grid_size();
    if half_window > max_half_window(m) {
        return Err(Error::Precondition(format!(
            "half window {half_window} too large for grid size {m} (max {})",
            max_half_window(m)
        )));
    }
    let full = samples.dft();
    let k = half_window as i64;
    let coeffs = (-k..=k)
        .map(|n| full[n.rem_euclid(m as i64) as usize])
        .collect();
    FourierSpectrum::from_coeffs(half_window, coeffs, m)
}

/// The split `f = F + conj(G)` on the circle, truncated to the window.
///
/// `F` carries `f̂(n)` for `n >= 0`; `G` carries `conj(f̂(-k))` at `z^k` for
/// `k >= 1`, with `G(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticSplit {
    pub analytic: ComplexPolynomial,
    pub coanalytic: ComplexPolynomial,
}

/// Interior values of the two halves of the split.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub analytic: Complex64,
    pub coanalytic: Complex64,
    /// Estimated contribution of the omitted coefficients `|n| > K`.
    pub truncation_bound: f64,
}

pub fn analytic_split(spec: &FourierSpectrum) -> AnalyticSplit {
    let k = spec.half_window() as i64;
    let analytic = ComplexPolynomial::new((0..=k).map(|n| spec.coeff(n)).collect());
    let coanalytic = ComplexPolynomial::new(
        std::iter::once(Complex64::new(0.0, 0.0))
            .chain((1..=k).map(|n| spec.coeff(-n).conj()))
            .collect(),
    );
    AnalyticSplit {
        analytic,
        coanalytic,
    }
}

impl AnalyticSplit {
    /// Reassembles `f̂(n)` from the two halves.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        if n >= 0 {
            self.analytic.coeffs().get(n as usize).copied().unwrap_or(zero)
        } else {
            self.coanalytic
                .coeffs()
                .get((-n) as usize)
                .copied()
                .unwrap_or(zero)
                .conj()
        }
    }

    /// Horner evaluation of `F(z)` and `G(z)` for `|z| <= 1 - interior_margin`.
    pub fn evaluate(&self, z: Complex64, interior_margin: f64) -> Result<SeriesValue> {
        let r = z.norm();
        if r > 1.0 - interior_margin {
            return Err(Error::Domain(format!(
                "|z| = {r} is within {interior_margin} of the circle; use the Cauchy evaluator"
            )));
        }
        let bound = tail_bound(self.analytic.coeffs(), r) + tail_bound(self.coanalytic.coeffs(), r);
        Ok(SeriesValue {
            analytic: self.analytic.eval(z),
            coanalytic: self.coanalytic.eval(z),
            truncation_bound: bound,
        })
    }
}

/// Geometric extrapolation of `Σ_{n>K} |c_n| r^n` from the last eight
/// coefficients.
fn tail_bound(coeffs: &[Complex64], r: f64) -> f64 {
    let n = coeffs.len();
    if n < 9 {
        return 0.0;
    }
    let window_max = |lo: usize, hi: usize| coeffs[lo..hi].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let recent = window_max(n - 4, n);
    let earlier = window_max(n - 8, n - 4);
    if recent == 0.0 {
        return 0.0;
    }
    if earlier == 0.0 {
        return f64::INFINITY;
    }
    let ratio = (recent / earlier).powf(0.25) * r;
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    recent * r.powi(n as i32 - 1) * ratio / (1.0 - ratio)
}

/// Fejér weight `1 - |n|/(m+1)` applied to each `|n| <= m`.
pub fn cesaro_coefficients(spec: &FourierSpectrum, m: usize) -> Result<FourierSpectrum> {
    if m > spec.half_window() {
        return Err(Error::Precondition(format!(
            "Cesàro order {m} exceeds half window {}",
            spec.half_window()
        )));
    }
    let mm = m as i64;
    let coeffs = (-mm..=mm)
        .map(|n| spec.coeff(n) * (1.0 - n.unsigned_abs() as f64 / (m as f64 + 1.0)))
        .collect();
    FourierSpectrum::from_coeffs(m, coeffs, spec.source_grid_size())
}

/// `C_m = (S_0 + ... + S_m)/(m+1)` evaluated on the source grid.
pub fn cesaro_mean(spec: &FourierSpectrum, m: usize) -> Result<BoundarySamples> {
    cesaro_coefficients(spec, m)?.synthesize()
}

/// Sum with a fixed pairwise tree so results do not depend on evaluation order.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1..=8 => xs.iter().sum(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
