//! Hankel systems built from negative Fourier coefficients.
//!
//! Row `r` of a [`HankelSystem`] of order `N` holds `f̂(-1-r), ..., f̂(-1-r-N)`,
//! so a vector `D` in its null space gives a polynomial
//! `P(z) = D_0 + ... + D_N z^N` with `(Pf)^(-1-r) = 0` for every row. With
//! `R = N` rows this is the square-plus-one system whose nontrivial solution
//! always exists; detection uses `R = 2N` so least squares filters spurious
//! annihilators of the truncated problem.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::ComplexPolynomial;
use crate::spectrum::{FourierSpectrum, DEFAULT_COEFF_NOISE};

/// Relative singular value cliff for rank and null-space decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct HankelSystem {
    order: usize,
    matrix: DMatrix<Complex64>,
    /// Absolute level below which entries and singular values are noise.
    noise_floor: f64,
}

impl HankelSystem {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row_count(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.matrix[(r, c)]
    }

    /// `‖system · D‖₂`.
    pub fn residual(&self, p: &ComplexPolynomial) -> f64 {
        (0..self.row_count())
            .map(|r| {
                (0..=self.order)
                    .map(|c| self.matrix[(r, c)] * p.coeffs().get(c).copied().unwrap_or_default())
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// The `R × (N+1)` Hankel matrix with entry `(r, c) = f̂(-1-r-c)`.
pub fn build_system(spec: &FourierSpectrum, order: usize, rows: usize) -> Result<HankelSystem> {
    if rows < order {
        return Err(Error::Precondition(format!(
            "{rows} rows cannot carry the {order} equations of an order-{order} system"
        )));
    }
    let deepest = order + rows;
    if deepest > spec.half_window() {
        return Err(Error::Precondition(format!(
            "system needs f̂(-{deepest}) but the half window is {}",
            spec.half_window()
        )));
    }
    let matrix = DMatrix::from_fn(rows, order + 1, |r, c| spec.coeff(-1 - (r + c) as i64));
    Ok(HankelSystem {
        order,
        matrix,
        noise_floor: DEFAULT_COEFF_NOISE * spec.max_modulus(),
    })
}

/// Outcome of a null-vector solve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Annihilator {
    /// Largest-modulus coefficient normalized to exactly `1`.
    pub polynomial: ComplexPolynomial,
    /// `‖system · D‖₂` for the normalized coefficients.
    pub residual: f64,
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
    /// Dimension of the numerical null space.
    pub nullity: usize,
    /// The system is numerically zero; every vector annihilates.
    pub all_annihilating: bool,
}

impl Annihilator {
    /// Two or more singular values fell below the cliff.
    pub fn degenerate(&self) -> bool {
        self.nullity > 1
    }
}

/// Singular values (descending) and right singular vectors of `m`, padded
/// with zero rows so the full right basis is available.
fn right_svd(m: &DMatrix<Complex64>) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let cols = m.ncols();
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::<Complex64>::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("finite singular values")
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..cols).map(|c| v_t[(i, c)].conj()).collect())
        .collect();
    (values, vectors)
}

fn null_threshold(singular_values: &[f64], rank_tol: f64, noise_floor: f64) -> f64 {
    let top = singular_values.first().copied().unwrap_or(0.0);
    (rank_tol * top).max(noise_floor)
}

/// Smallest-singular-direction annihilator.
///
/// When the numerical null space has dimension `d > 1`, the returned vector is
/// the element of that space with the lowest degree (its top `d - 1`
/// coefficients eliminated), which is the reduced denominator for exact
/// rational data.
pub fn annihilator(system: &HankelSystem, rank_tol: f64) -> Annihilator {
    let n = system.order + 1;
    let max_entry = system.matrix.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max_entry <= system.noise_floor {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs[0] = Complex64::new(1.0, 0.0);
        let polynomial = ComplexPolynomial::new(coeffs);
        return Annihilator {
            residual: system.residual(&polynomial),
            polynomial,
            singular_values: vec![0.0; n],
            nullity: n,
            all_annihilating: true,
        };
    }
    let (values, vectors) = right_svd(&system.matrix);
    let threshold = null_threshold(&values, rank_tol, system.noise_floor);
    let nullity = values.iter().filter(|&&s| s <= threshold).count().max(1);
    let basis = &vectors[n - nullity..];
    let coeffs = if nullity == 1 {
        basis[0].clone()
    } else {
        lowest_degree_combination(basis)
    };
    let polynomial = ComplexPolynomial::new(coeffs).normalized();
    Annihilator {
        residual: system.residual(&polynomial),
        polynomial,
        singular_values: values,
        nullity,
        all_annihilating: false,
    }
}

/// Combination of `basis` whose top `basis.len() - 1` coordinates vanish.
fn lowest_degree_combination(basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let d = basis.len();
    let n = basis[0].len();
    let top = DMatrix::from_fn(d - 1, d, |r, c| basis[c][n - d + 1 + r]);
    let (_, weights) = right_svd(&top);
    let w = &weights[d - 1];
    let mut out: Vec<Complex64> = (0..n)
        .map(|k| (0..d).map(|c| basis[c][k] * w[c]).sum())
        .collect();
    for c in out.iter_mut().skip(n - d + 1) {
        *c = Complex64::new(0.0, 0.0);
    }
    out
}

/// Rank verdict with the singular-value gap that supports it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// `σ_rank / σ_{rank+1}`; infinite when the next value is zero or absent,
    /// and for rank zero.
    pub gap: f64,
    pub threshold: f64,
}

/// Numerical rank of the square `(max_order+1)`-sized Hankel truncation.
pub fn rank_report(spec: &FourierSpectrum, max_order: usize, rank_tol: f64) -> Result<RankReport> {
    let system = build_system(spec, max_order, max_order + 1)?;
    let (values, _) = right_svd(&system.matrix);
    let threshold = null_threshold(&values, rank_tol, system.noise_floor);
    let rank = values.iter().filter(|&&s| s > threshold).count();
    let gap = match (rank.checked_sub(1).map(|i| values[i]), values.get(rank)) {
        (Some(above), Some(&below)) if below > 0.0 => above / below,
        _ => f64::INFINITY,
    };
    Ok(RankReport {
        rank,
        singular_values: values,
        gap,
        threshold,
    })
}

pub fn numeric_rank(spec: &FourierSpectrum, max_order: usize, rank_tol: f64) -> Result<usize> {
    Ok(rank_report(spec, max_order, rank_tol)?.rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{fourier_coefficients, BoundarySamples};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spectrum<F: Fn(Complex64) -> Complex64>(g: F, m: usize, k: usize) -> FourierSpectrum {
        fourier_coefficients(&BoundarySamples::sample(g, m).unwrap(), k).unwrap()
    }

    /// Spectrum assembled directly from given negative coefficients.
    fn negative_only(neg: &[Complex64], k: usize) -> FourierSpectrum {
        let mut coeffs = vec![c(0.0, 0.0); 2 * k + 1];
        for (i, &v) in neg.iter().enumerate() {
            coeffs[k - 1 - i] = v;
        }
        FourierSpectrum::from_coeffs(k, coeffs, 4 * k + 4).unwrap()
    }

    #[test]
    fn single_row_of_simple_pole() {
        let spec = spectrum(|z| 1.0 / (z - 0.5), 4096, 64);
        let sys = build_system(&spec, 1, 1).unwrap();
        assert!((sys.entry(0, 0) - 1.0).norm() < 1e-12);
        assert!((sys.entry(0, 1) - 0.5).norm() < 1e-12);
        let ann = annihilator(&sys, DEFAULT_RANK_TOL);
        let d = ann.polynomial.coeffs();
        assert!((d[0] + 0.5).norm() < 1e-12);
        assert_eq!(d[1], c(1.0, 0.0));
        assert!(ann.residual <= 1e-9);
    }

    #[test]
    fn analytic_input_gives_zero_system() {
        let spec = spectrum(|z| z * z + 3.0, 256, 32);
        let sys = build_system(&spec, 2, 4).unwrap();
        let ann = annihilator(&sys, DEFAULT_RANK_TOL);
        assert!(ann.all_annihilating);
        assert_eq!(ann.polynomial.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn conjugate_identity_gives_monomial() {
        let spec = negative_only(&[c(1.0, 0.0)], 8);
        let sys = build_system(&spec, 1, 1).unwrap();
        assert_eq!(sys.entry(0, 0), c(1.0, 0.0));
        assert_eq!(sys.entry(0, 1), c(0.0, 0.0));
        let ann = annihilator(&sys, DEFAULT_RANK_TOL);
        assert!(ann.polynomial.coeffs()[0].norm() < 1e-15);
        assert_eq!(ann.polynomial.coeffs()[1], c(1.0, 0.0));
    }

    #[test]
    fn two_pole_annihilator() {
        let spec = spectrum(|z| 1.0 / (z - 0.3) + 1.0 / (z + 0.5), 4096, 64);
        let sys = build_system(&spec, 2, 4).unwrap();
        let ann = annihilator(&sys, DEFAULT_RANK_TOL);
        // (z - 0.3)(z + 0.5) = z² + 0.2 z - 0.15
        let expected = [c(-0.15, 0.0), c(0.2, 0.0), c(1.0, 0.0)];
        for (a, b) in ann.polynomial.coeffs().iter().zip(expected) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
        assert!(ann.residual <= 1e-8);
        assert!(!ann.degenerate());
    }

    #[test]
    fn oversized_budget_reports_degeneracy_and_reduces() {
        let spec = spectrum(|z| 1.0 / (z - 0.5), 4096, 64);
        let sys = build_system(&spec, 3, 6).unwrap();
        let ann = annihilator(&sys, DEFAULT_RANK_TOL);
        assert_eq!(ann.nullity, 3);
        assert!(ann.degenerate());
        let p = ann.polynomial.trimmed(1e-9);
        assert_eq!(p.degree(), 1);
        assert!((p.coeffs()[0] + 0.5).norm() < 1e-9);
    }

    #[test]
    fn hankel_structure_and_window_checks() {
        let spec = spectrum(|z| 1.0 / (z - c(0.2, 0.6)) + 2.0 / (z + 0.4), 1024, 40);
        let sys = build_system(&spec, 5, 10).unwrap();
        for r in 1..10 {
            for col in 0..5 {
                assert_eq!(sys.entry(r, col), sys.entry(r - 1, col + 1));
            }
        }
        assert!(matches!(build_system(&spec, 20, 21), Err(Error::Precondition(_))));
        assert!(matches!(build_system(&spec, 3, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numeric_rank(&spectrum(|z| z.exp(), 1024, 64), 8, DEFAULT_RANK_TOL).unwrap(), 0);
        let report = rank_report(&spectrum(|z| 1.0 / (z - 0.5), 4096, 64), 8, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(report.rank, 1);
        assert!(report.gap > 1e4);
    }

    #[test]
    fn lacunary_rank_grows_with_order() {
        // Entry (r, c) of the explicit truncation is 2^{-k} when
        // r + c + 1 = 3^k. At max_order 10 the anti-diagonal r + c = 8 alone
        // meets 9 distinct rows and columns, so the rank is at least 9 there.
        let neg: Vec<Complex64> = (1..=200)
            .map(|n| {
                let mut k = 0;
                let mut p = 1;
                while p < n {
                    p *= 3;
                    k += 1;
                }
                if p == n && k >= 1 { c(0.5f64.powi(k), 0.0) } else { c(0.0, 0.0) }
            })
            .collect();
        let spec = negative_only(&neg, 200);
        let r10 = numeric_rank(&spec, 10, DEFAULT_RANK_TOL).unwrap();
        let r20 = numeric_rank(&spec, 20, DEFAULT_RANK_TOL).unwrap();
        assert!(r10 >= 5, "rank {r10}");
        assert_eq!(r10, 9);
        assert!(r20 > r10);
    }

    #[test]
    fn scale_invariance() {
        let g = |z: Complex64| 1.0 / (z - 0.3) + 0.5 / (z - c(-0.1, 0.6));
        let a = spectrum(g, 2048, 64);
        let b = spectrum(|z| g(z) * c(-3.0, 40.0), 2048, 64);
        assert_eq!(numeric_rank(&a, 6, DEFAULT_RANK_TOL).unwrap(), 2);
        assert_eq!(numeric_rank(&b, 6, DEFAULT_RANK_TOL).unwrap(), 2);
        let pa = annihilator(&build_system(&a, 2, 4).unwrap(), DEFAULT_RANK_TOL).polynomial;
        let pb = annihilator(&build_system(&b, 2, 4).unwrap(), DEFAULT_RANK_TOL).polynomial;
        for (x, y) in pa.coeffs().iter().zip(pb.coeffs()) {
            assert!((x - y).norm() < 1e-10);
        }
    }
}
