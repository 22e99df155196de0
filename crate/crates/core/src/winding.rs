//! Winding numbers of sampled nonvanishing boundary functions.
//!
//! The winding number is the total change of argument divided by `2π`,
//! accumulated from principal-value arguments of consecutive sample ratios.
//! A consecutive step of `π/2` or more means the grid cannot resolve the
//! curve, and the computation fails instead of aliasing.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::ComplexPolynomial;
use crate::spectrum::BoundarySamples;

/// Default nonvanishing threshold relative to the largest grid modulus.
pub const DEFAULT_RELATIVE_MIN_MODULUS: f64 = 1e-8;
/// Number of grid doublings a generator-backed computation may spend.
pub const REFINEMENT_BUDGET: usize = 3;
/// Accumulated turns must lie this close to an integer.
pub const ROUNDING_SLACK: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i64,
    pub min_modulus: f64,
    pub max_phase_step: f64,
    /// Accumulated argument change in turns, before rounding.
    pub turns: f64,
    pub grid_size: usize,
}

/// Absolute threshold `rel * max_j |values[j]|`.
pub fn relative_tolerance(samples: &BoundarySamples, rel: f64) -> f64 {
    rel * samples.max_modulus()
}

pub fn winding_number(samples: &BoundarySamples, min_mod_tol: f64) -> Result<WindingResult> {
    let values = samples.values();
    let m = values.len();
    let mut min_modulus = f64::INFINITY;
    for (j, v) in values.iter().enumerate() {
        let r = v.norm();
        if !(r >= min_mod_tol) || r == 0.0 {
            return Err(Error::WindingUndefined {
                index: j,
                modulus: r,
                tolerance: min_mod_tol,
            });
        }
        min_modulus = min_modulus.min(r);
    }
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    for j in 0..m {
        let step = (values[(j + 1) % m] / values[j]).arg();
        max_step = max_step.max(step.abs());
        total += step;
    }
    if max_step >= FRAC_PI_2 {
        return Err(Error::Resolution(format!(
            "phase step {max_step:.4} rad reaches π/2 on a grid of {m} points"
        )));
    }
    let turns = total / (2.0 * PI);
    let winding = turns.round();
    if (turns - winding).abs() > ROUNDING_SLACK {
        return Err(Error::Resolution(format!(
            "accumulated change {turns:.4} turns is not within {ROUNDING_SLACK} of an integer"
        )));
    }
    Ok(WindingResult {
        winding: winding as i64,
        min_modulus,
        max_phase_step: max_step,
        turns,
        grid_size: m,
    })
}

/// Winding number of `P f + Q` on the grid of `f`.
pub fn composite_winding(
    f: &BoundarySamples,
    p: &ComplexPolynomial,
    q: &ComplexPolynomial,
    min_mod_tol: f64,
) -> Result<WindingResult> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::Precondition(
            "P and Q are both identically zero".into(),
        ));
    }
    winding_number(&f.composite(p, q)?, min_mod_tol)
}

/// Samples `generator` at `grid_size` and retries at up to
/// [`REFINEMENT_BUDGET`] successive doublings while the grid under-resolves
/// the curve. The nonvanishing threshold is `rel_min_mod` times the largest
/// modulus on each grid.
pub fn winding_number_refined<F>(generator: F, grid_size: usize, rel_min_mod: f64) -> Result<WindingResult>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut m = grid_size;
    let mut attempt = 0;
    loop {
        let samples = BoundarySamples::sample(&generator, m)?;
        match winding_number(&samples, relative_tolerance(&samples, rel_min_mod)) {
            Err(Error::Resolution(_)) if attempt < REFINEMENT_BUDGET => {
                attempt += 1;
                m *= 2;
            }
            other => return other,
        }
    }
}

/// [`winding_number_refined`] applied to `P(z) g(z) + Q(z)`.
pub fn composite_winding_refined<F>(
    generator: F,
    p: &ComplexPolynomial,
    q: &ComplexPolynomial,
    grid_size: usize,
    rel_min_mod: f64,
) -> Result<WindingResult>
where
    F: Fn(Complex64) -> Complex64,
{
    if p.is_zero() && q.is_zero() {
        return Err(Error::Precondition(
            "P and Q are both identically zero".into(),
        ));
    }
    winding_number_refined(|z| p.eval(z) * generator(z) + q.eval(z), grid_size, rel_min_mod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn wind<F: Fn(Complex64) -> Complex64>(g: F, m: usize) -> Result<WindingResult> {
        let s = BoundarySamples::sample(g, m)?;
        winding_number(&s, relative_tolerance(&s, DEFAULT_RELATIVE_MIN_MODULUS))
    }

    #[test]
    fn monomial_and_constant() {
        assert_eq!(wind(|z| z * z * z, 64).unwrap().winding, 3);
        assert_eq!(wind(|_| c(5.0, 0.0), 64).unwrap().winding, 0);
    }

    #[test]
    fn rational_zero_minus_pole_counts() {
        assert_eq!(wind(|z| (z - 0.5) / (z + 1.0 / 3.0), 256).unwrap().winding, 0);
        assert_eq!(wind(|z| (z - 0.5) / (z - 2.0), 256).unwrap().winding, 1);
        assert_eq!(wind(|z| (z - 2.0) / (z - 0.5), 256).unwrap().winding, -1);
    }

    #[test]
    fn vanishing_sample_reports_index() {
        let s = BoundarySamples::sample(|z| z - 1.0, 16).unwrap();
        match winding_number(&s, 1e-8) {
            Err(Error::WindingUndefined { index, .. }) => assert_eq!(index, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undersampled_curve_fails_fast() {
        let s = BoundarySamples::sample(|z| z.powi(5), 8).unwrap();
        assert!(matches!(winding_number(&s, 1e-8), Err(Error::Resolution(_))));
    }

    #[test]
    fn refinement_recovers_undersampled_curve() {
        let r = winding_number_refined(|z| z.powi(5), 8, DEFAULT_RELATIVE_MIN_MODULUS).unwrap();
        assert_eq!(r.winding, 5);
        assert_eq!(r.grid_size, 32);
        // z^20 needs more than three doublings from 8 points.
        assert!(matches!(
            winding_number_refined(|z| z.powi(20), 8, DEFAULT_RELATIVE_MIN_MODULUS),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn composite_cases() {
        let f = BoundarySamples::sample(|z| 1.0 / (z - 0.5), 128).unwrap();
        let r = composite_winding(&f, &ComplexPolynomial::zero(), &ComplexPolynomial::one(), 1e-8).unwrap();
        assert_eq!(r.winding, 0);
        let p = ComplexPolynomial::from_roots(&[c(0.5, 0.0)]);
        let r = composite_winding(&f, &p, &ComplexPolynomial::zero(), 1e-8).unwrap();
        assert_eq!(r.winding, 0);
        assert!((r.min_modulus - 1.0).abs() < 1e-14);
        assert!(matches!(
            composite_winding(&f, &ComplexPolynomial::zero(), &ComplexPolynomial::zero(), 1e-8),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn reported_turns_are_near_the_integer() {
        let r = wind(|z| z * z / (z - c(0.1, 0.3)), 512).unwrap();
        assert_eq!(r.winding, 1);
        assert!((r.turns - 1.0).abs() < 1e-9);
        assert!(r.max_phase_step < FRAC_PI_2);
    }

    fn blaschke<'a>(zeros: &'a [(f64, f64)], poles: &'a [(f64, f64)]) -> impl Fn(Complex64) -> Complex64 + 'a {
        move |z| {
            let num: Complex64 = zeros.iter().map(|&(a, b)| z - c(a, b)).product();
            let den: Complex64 = poles.iter().map(|&(a, b)| z - c(a, b)).product();
            num / den
        }
    }

    fn point_in_disc() -> impl Strategy<Value = (f64, f64)> {
        (0.0f64..0.85, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| (r * t.cos(), r * t.sin()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn multiplicative_and_conjugation(
            za in prop::collection::vec(point_in_disc(), 0..3),
            pa in prop::collection::vec(point_in_disc(), 0..3),
            zb in prop::collection::vec(point_in_disc(), 0..3),
        ) {
            let m = 2048;
            let fa = blaschke(&za, &pa);
            let fb = blaschke(&zb, &[]);
            let wa = wind(&fa, m).unwrap().winding;
            let wb = wind(&fb, m).unwrap().winding;
            let wab = wind(|z| fa(z) * fb(z), m).unwrap().winding;
            prop_assert_eq!(wa, za.len() as i64 - pa.len() as i64);
            prop_assert_eq!(wab, wa + wb);
            prop_assert_eq!(wind(|z| fa(z).conj(), m).unwrap().winding, -wa);
        }

        #[test]
        fn small_perturbations_keep_the_integer(
            zs in prop::collection::vec(point_in_disc(), 1..4),
            noise in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1024),
        ) {
            let s = BoundarySamples::sample(blaschke(&zs, &[]), 1024).unwrap();
            let base = winding_number(&s, 1e-12).unwrap();
            let delta = 0.49 * base.min_modulus / 2f64.sqrt();
            let perturbed = BoundarySamples::new(
                s.values().iter().zip(&noise).map(|(v, &(a, b))| v + c(a, b) * delta).collect(),
            ).unwrap();
            prop_assert_eq!(winding_number(&perturbed, 1e-12).unwrap().winding, base.winding);
        }
    }
}
