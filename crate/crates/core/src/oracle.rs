//! Closed-form reference results for rational functions.
//!
//! Everything here is computed from the zero/pole description alone, never
//! from samples, so it serves as the independent check on the sampled
//! pipeline.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::ComplexPolynomial;

/// Poles closer than this to the circle are rejected by coefficient oracles.
pub const MIN_POLE_CLEARANCE: f64 = 1e-3;
/// Zeros and poles closer than this to the circle make the winding undefined.
pub const MIN_WINDING_CLEARANCE: f64 = 1e-9;
/// Largest multiplicity drawn by [`random_rational`].
pub const MAX_RANDOM_MULTIPLICITY: usize = 3;
/// Minimum distance between distinct random poles, and between random zeros
/// and poles.
pub const RANDOM_SEPARATION: f64 = 0.15;

/// `scale · Π (z - zero)^m / Π (z - pole)^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalDocument", into = "RationalDocument")]
pub struct RationalFunction {
    zeros: Vec<(Complex64, usize)>,
    poles: Vec<(Complex64, usize)>,
    scale: Complex64,
}

#[derive(Serialize, Deserialize)]
struct RationalDocument {
    zeros: Vec<(f64, f64, usize)>,
    poles: Vec<(f64, f64, usize)>,
    scale: (f64, f64),
}

impl TryFrom<RationalDocument> for RationalFunction {
    type Error = Error;

    fn try_from(doc: RationalDocument) -> Result<Self> {
        let unpack = |v: Vec<(f64, f64, usize)>| v.into_iter().map(|(re, im, m)| (Complex64::new(re, im), m)).collect();
        RationalFunction::new(unpack(doc.zeros), unpack(doc.poles), Complex64::new(doc.scale.0, doc.scale.1))
    }
}

impl From<RationalFunction> for RationalDocument {
    fn from(r: RationalFunction) -> Self {
        let pack = |v: Vec<(Complex64, usize)>| v.into_iter().map(|(z, m)| (z.re, z.im, m)).collect();
        RationalDocument {
            zeros: pack(r.zeros),
            poles: pack(r.poles),
            scale: (r.scale.re, r.scale.im),
        }
    }
}

impl RationalFunction {
    pub fn new(zeros: Vec<(Complex64, usize)>, poles: Vec<(Complex64, usize)>, scale: Complex64) -> Result<Self> {
        if scale.norm() == 0.0 || !scale.re.is_finite() || !scale.im.is_finite() {
            return Err(Error::InvalidInput("scale must be finite and nonzero".into()));
        }
        let all = zeros.iter().chain(&poles);
        if all.clone().any(|&(z, m)| m == 0 || !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("zeros and poles need finite locations and positive multiplicities".into()));
        }
        for &(z, _) in &zeros {
            if poles.iter().any(|&(p, _)| (z - p).norm() < 1e-12) {
                return Err(Error::InvalidInput(format!("zero {z} coincides with a pole")));
            }
        }
        Ok(Self { zeros, poles, scale })
    }

    pub fn polynomial(zeros: Vec<(Complex64, usize)>, scale: Complex64) -> Result<Self> {
        Self::new(zeros, Vec::new(), scale)
    }

    pub fn zeros(&self) -> &[(Complex64, usize)] {
        &self.zeros
    }

    pub fn poles(&self) -> &[(Complex64, usize)] {
        &self.poles
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let num: Complex64 = self.zeros.iter().map(|&(a, m)| (z - a).powi(m as i32)).product();
        let den: Complex64 = self.poles.iter().map(|&(a, m)| (z - a).powi(m as i32)).product();
        self.scale * num / den
    }

    pub fn numerator(&self) -> ComplexPolynomial {
        ComplexPolynomial::from_root_multiplicities(&self.zeros).scale(self.scale)
    }

    pub fn denominator(&self) -> ComplexPolynomial {
        ComplexPolynomial::from_root_multiplicities(&self.poles)
    }

    /// Poles in the open unit disc.
    pub fn interior_poles(&self) -> Vec<(Complex64, usize)> {
        self.poles.iter().copied().filter(|(a, _)| a.norm() < 1.0).collect()
    }

    /// Number of poles in the disc, counted with multiplicity.
    pub fn interior_pole_count(&self) -> usize {
        self.interior_poles().iter().map(|&(_, m)| m).sum()
    }

    /// `f · Π_{|a|<1} (z - a)^m`, which belongs to the disc algebra.
    pub fn without_interior_poles(&self) -> Self {
        Self {
            zeros: self.zeros.clone(),
            poles: self.poles.iter().copied().filter(|(a, _)| a.norm() >= 1.0).collect(),
            scale: self.scale,
        }
    }

    fn circle_clearance(&self) -> f64 {
        self.zeros
            .iter()
            .chain(&self.poles)
            .map(|(a, _)| (a.norm() - 1.0).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Taylor coefficients `0..len` of `(z - a)^m f(z)` at `a`, where
    /// `(a, m)` is one of the poles.
    fn regular_part_taylor(&self, pole_index: usize, len: usize) -> Vec<Complex64> {
        let (a, _) = self.poles[pole_index];
        let zero = Complex64::new(0.0, 0.0);
        let mut series = vec![zero; len];
        series[0] = self.scale;
        let mul = |s: &[Complex64], factor: &[Complex64]| -> Vec<Complex64> {
            (0..len)
                .map(|k| (0..=k).map(|i| s[i] * factor.get(k - i).copied().unwrap_or(zero)).sum())
                .collect()
        };
        for &(b, m) in &self.zeros {
            // (a + t - b) = (a - b) + t
            for _ in 0..m {
                series = mul(&series, &[a - b, Complex64::new(1.0, 0.0)]);
            }
        }
        for (idx, &(b, m)) in self.poles.iter().enumerate() {
            if idx == pole_index {
                continue;
            }
            // 1/((a - b) + t) = Σ (-1)^k t^k / (a - b)^{k+1}
            let d = a - b;
            let inv: Vec<Complex64> = (0..len)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign / d.powi(k as i32 + 1)
                })
                .collect();
            for _ in 0..m {
                series = mul(&series, &inv);
            }
        }
        series
    }

    /// Principal parts at interior poles: `(a, [c_1, ..., c_m])` with the
    /// singular part `Σ_l c_l / (z - a)^l`.
    pub fn principal_parts(&self) -> Vec<(Complex64, Vec<Complex64>)> {
        self.poles
            .iter()
            .enumerate()
            .filter(|(_, (a, _))| a.norm() < 1.0)
            .map(|(idx, &(a, m))| {
                let taylor = self.regular_part_taylor(idx, m);
                (a, (1..=m).map(|l| taylor[m - l]).collect())
            })
            .collect()
    }

    /// `f̂(-1), ..., f̂(-depth)` from the partial-fraction expansion on the
    /// circle: `1/(z-a)^l = Σ_{k>=l} C(k-1, l-1) a^{k-l} z^{-k}`.
    pub fn exact_negative_coefficients(&self, depth: usize) -> Result<Vec<Complex64>> {
        if let Some(&(a, _)) = self
            .poles
            .iter()
            .find(|(a, _)| (a.norm() - 1.0).abs() <= MIN_POLE_CLEARANCE)
        {
            return Err(Error::Conditioning(format!(
                "pole {a} lies within {MIN_POLE_CLEARANCE} of the circle"
            )));
        }
        let parts = self.principal_parts();
        Ok((1..=depth)
            .map(|k| {
                parts
                    .iter()
                    .flat_map(|(a, cs)| {
                        cs.iter().enumerate().filter(move |(i, _)| i + 1 <= k).map(move |(i, &c)| {
                            let l = i + 1;
                            c * binomial(k - 1, l - 1) * a.powi((k - l) as i32)
                        })
                    })
                    .sum()
            })
            .collect())
    }

    /// Zeros minus poles in the open disc, with multiplicity.
    pub fn exact_winding(&self) -> Result<i64> {
        if self.circle_clearance() <= MIN_WINDING_CLEARANCE {
            return Err(Error::Domain("a zero or pole lies on the circle; winding undefined".into()));
        }
        let inside = |v: &[(Complex64, usize)]| -> i64 {
            v.iter().filter(|(a, _)| a.norm() < 1.0).map(|&(_, m)| m as i64).sum()
        };
        Ok(inside(&self.zeros) - inside(&self.poles))
    }

    /// Sorted multiset of interior poles, for comparisons.
    pub fn sorted_interior_poles(&self) -> Vec<(Complex64, usize)> {
        let mut v = self.interior_poles();
        v.sort_by(|x, y| {
            (x.0.re, x.0.im)
                .partial_cmp(&(y.0.re, y.0.im))
                .expect("finite pole locations")
        });
        v
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Reproducible random rational function.
///
/// Distribution: total pole multiplicity uniform in `0..=max_poles`, split
/// into distinct poles whose multiplicities are uniform in
/// `1..=min(3, remaining)`; locations uniform (by area) in the disc of
/// radius `pole_radius_cap`, redrawn until at least [`RANDOM_SEPARATION`] from
/// earlier poles. Zero count uniform in `0..=max_poles`, simple zeros drawn
/// the same way and kept [`RANDOM_SEPARATION`] away from every pole. Scale
/// has unit modulus and uniform phase.
pub fn random_rational(seed: u64, max_poles: usize, pole_radius_cap: f64) -> Result<RationalFunction> {
    if !(0.0..1.0).contains(&pole_radius_cap) {
        return Err(Error::InvalidInput(format!(
            "pole radius cap {pole_radius_cap} must lie in [0, 1)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw_point = |rng: &mut ChaCha8Rng, avoid: &[(Complex64, usize)]| -> Complex64 {
        loop {
            let r = pole_radius_cap * rng.random::<f64>().sqrt();
            let z = Complex64::from_polar(r, TAU * rng.random::<f64>());
            if avoid.iter().all(|&(p, _)| (z - p).norm() >= RANDOM_SEPARATION) {
                return z;
            }
        }
    };
    let total = rng.random_range(0..=max_poles);
    let mut poles: Vec<(Complex64, usize)> = Vec::new();
    let mut remaining = total;
    while remaining > 0 {
        let m = rng.random_range(1..=remaining.min(MAX_RANDOM_MULTIPLICITY));
        let z = draw_point(&mut rng, &poles);
        poles.push((z, m));
        remaining -= m;
    }
    let zero_count = rng.random_range(0..=max_poles);
    let zeros = (0..zero_count).map(|_| (draw_point(&mut rng, &poles), 1)).collect();
    let scale = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
    RationalFunction::new(zeros, poles, scale)
}
