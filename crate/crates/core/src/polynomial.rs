//! Dense complex polynomials in the monomial basis.
//!
//! Coefficients are stored lowest degree first, `coeffs[k]` multiplying `z^k`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A polynomial `D_0 + D_1 z + ... + D_d z^d` with complex coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            coeffs
        };
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0)])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monic polynomial `(z - r_1)(z - r_2)...` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, &r| acc.mul(&Self::new(vec![-r, Complex64::new(1.0, 0.0)])))
    }

    /// Monic product over `(root, multiplicity)` pairs.
    pub fn from_root_multiplicities(roots: &[(Complex64, usize)]) -> Self {
        let expanded: Vec<Complex64> = roots
            .iter()
            .flat_map(|&(r, m)| std::iter::repeat_n(r, m))
            .collect();
        Self::from_roots(&expanded)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Index of the highest nonzero coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.norm() != 0.0)
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops trailing coefficients with modulus `<= tol * max_modulus`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let cutoff = tol * self.max_modulus();
        let last = self
            .coeffs
            .iter()
            .rposition(|c| c.norm() > cutoff)
            .unwrap_or(0);
        Self::new(self.coeffs[..=last].to_vec())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Self::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + other.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Synthetic division by `(z - root)`, discarding the remainder.
    pub fn deflate(&self, root: Complex64) -> Self {
        let d = self.degree();
        if d == 0 {
            return self.clone();
        }
        let mut quotient = vec![Complex64::new(0.0, 0.0); d];
        let mut carry = Complex64::new(0.0, 0.0);
        for k in (1..=d).rev() {
            carry = carry * root + self.coeffs[k];
            quotient[k - 1] = carry;
        }
        Self::new(quotient)
    }

    /// Scales so the largest-modulus coefficient equals exactly `1`
    /// (ties broken by the lowest index).
    pub fn normalized(&self) -> Self {
        let Some((idx, _)) = self
            .coeffs
            .iter()
            .enumerate()
            .fold(None::<(usize, f64)>, |best, (k, c)| match best {
                Some((_, m)) if c.norm() <= m => best,
                _ => Some((k, c.norm())),
            })
            .filter(|&(_, m)| m > 0.0)
        else {
            return self.clone();
        };
        let pivot = self.coeffs[idx];
        let mut out: Vec<Complex64> = self.coeffs.iter().map(|&c| c / pivot).collect();
        out[idx] = Complex64::new(1.0, 0.0);
        Self::new(out)
    }

    /// Roots as eigenvalues of the companion matrix, each polished by
    /// guarded Newton steps on the original coefficients.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let d = self.degree();
        if self.is_zero() {
            return Err(Error::Precondition("roots of the zero polynomial".into()));
        }
        if d == 0 {
            return Ok(Vec::new());
        }
        let lead = self.coeffs[d];
        let mut companion = DMatrix::<Complex64>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..d {
            companion[(i, d - 1)] = -self.coeffs[i] / lead;
        }
        let schur = Schur::try_new(companion, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Resolution("companion eigenvalue iteration did not converge".into()))?;
        let (_, t) = schur.unpack();
        let dp = self.derivative();
        let roots = (0..d)
            .map(|i| {
                let mut z = t[(i, i)];
                let mut pz = self.eval(z).norm();
                for _ in 0..3 {
                    let slope = dp.eval(z);
                    if slope.norm() == 0.0 {
                        break;
                    }
                    let candidate = z - self.eval(z) / slope;
                    let pc = self.eval(candidate).norm();
                    if !(pc < pz) {
                        break;
                    }
                    z = candidate;
                    pz = pc;
                }
                z
            })
            .collect();
        Ok(roots)
    }
}
