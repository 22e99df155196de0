//! Explicit winding-number witnesses.
//!
//! If `f` extends meromorphically with at most `N` poles then
//! `W(Pf + Q) >= -N` for every admissible pair of polynomials. A pair with
//! `W(Pf + Q) <= -N - 1` therefore certifies that no such extension exists.
//! This module builds those pairs (from the pattern lemma and from the
//! annihilate-and-shift construction), builds zero-free completions
//! `Ψ + ∏(z - a_j) Q`, and samples random pairs for consistency checks.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::coefficient_scale;
use crate::hankel::{annihilator, build_system};
use crate::oracle::RationalFunction;
use crate::polynomial::ComplexPolynomial;
use crate::spectrum::{cesaro_coefficients, cesaro_mean, fourier_coefficients, max_half_window, BoundarySamples, FourierSpectrum};
use crate::tolerances::Tolerances;
use crate::winding::{relative_tolerance, winding_number, WindingResult};

/// Rings `|α| = 2^{-t} ‖φ‖∞` tried by the α search.
pub const ALPHA_RINGS: i32 = 20;
/// Phases per ring.
pub const ALPHA_PHASES: usize = 16;
/// Extra coefficients beyond `4N` the falsifier needs in the window.
pub const FALSIFIER_TAIL_MARGIN: usize = 8;
/// Pattern coefficients must be below this fraction of `|f̂(-N-1)|`.
pub const PATTERN_RELATIVE_TOL: f64 = 1e-9;
/// Slack on the strip half-width `1/2`.
pub const STRIP_SLACK: f64 = 1e-6;
/// Jet mismatch allowed in a zero-free completion.
pub const JET_TOLERANCE: f64 = 1e-6;
const JET_RADIUS: f64 = 0.05;
const JET_NODES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateKind {
    /// `W(Pf + Q) <= -N - 1`.
    Falsifier,
    /// `W(Pf + Q) >= -N`.
    Consistency,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingCertificate {
    pub kind: CertificateKind,
    pub pole_budget: usize,
    pub p: ComplexPolynomial,
    pub q: ComplexPolynomial,
    pub winding: i64,
    pub min_modulus: f64,
    pub grid_size: usize,
    /// Nonvanishing threshold relative to the largest composite modulus.
    pub min_mod_rel: f64,
}

impl WindingCertificate {
    fn new(budget: usize, p: ComplexPolynomial, q: ComplexPolynomial, r: &WindingResult, min_mod_rel: f64) -> Self {
        let kind = if r.winding <= -(budget as i64) - 1 {
            CertificateKind::Falsifier
        } else {
            CertificateKind::Consistency
        };
        Self {
            kind,
            pole_budget: budget,
            p,
            q,
            winding: r.winding,
            min_modulus: r.min_modulus,
            grid_size: r.grid_size,
            min_mod_rel,
        }
    }

    /// Recomputes `W(Pf + Q)` from raw samples, possibly on another grid.
    pub fn verify(&self, f: &BoundarySamples) -> Result<WindingResult> {
        composite_result(f, &self.p, &self.q, self.min_mod_rel)
    }
}

fn composite_result(f: &BoundarySamples, p: &ComplexPolynomial, q: &ComplexPolynomial, rel: f64) -> Result<WindingResult> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::Precondition("P and Q are both identically zero".into()));
    }
    let c = f.composite(p, q)?;
    winding_number(&c, relative_tolerance(&c, rel))
}

fn is_inadmissible(e: &Error) -> bool {
    matches!(e, Error::WindingUndefined { .. } | Error::Resolution(_))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma41Witness {
    pub certificate: WindingCertificate,
    /// Smallest Cesàro order meeting the half-unit approximation bound.
    pub cesaro_order: usize,
    /// `max |C_m - z^{N+1} f / A₀|` on the grid.
    pub approximation_error: f64,
    /// `max |Re(z^{N+1}(f/A₀ - R - T)) - 1|` on the grid.
    pub strip_deviation: f64,
    pub leading_coefficient: Complex64,
}

/// Builds `Q = -A₀(R_m + T_m)` with `W(f + Q) = -N - 1` for `f` whose
/// coefficients `f̂(-1..-N)` and `f̂(-N-2..-2N-1)` vanish while
/// `A₀ = f̂(-N-1)` does not.
pub fn lemma41_witness(f: &BoundarySamples, budget: usize, half_window: usize, tol: &Tolerances) -> Result<Lemma41Witness> {
    let n1 = budget as i64 + 1;
    if half_window < 2 * budget + 2 {
        return Err(Error::Precondition(format!(
            "half window {half_window} cannot hold the pattern for N = {budget}"
        )));
    }
    let spec = fourier_coefficients(f, half_window)?;
    let a0 = spec.coeff(-n1);
    let scale = coefficient_scale(&spec);
    if a0.norm() <= 1e-12 * scale || a0.norm() == 0.0 {
        return Err(Error::Precondition(format!(
            "pattern violated: f̂(-{n1}) = {a0} vanishes"
        )));
    }
    let pattern_tol = PATTERN_RELATIVE_TOL * a0.norm();
    for j in (1..n1).chain(n1 + 1..=2 * n1 - 1) {
        let c = spec.coeff(-j);
        if c.norm() > pattern_tol {
            return Err(Error::Precondition(format!(
                "pattern violated at index -{j}: |f̂(-{j})| = {:e} exceeds {pattern_tol:e}",
                c.norm()
            )));
        }
    }

    let g = f.map(|z, v| z.powi(n1 as i32) * v / a0)?;
    let g_spec = fourier_coefficients(&g, half_window)?;
    for m in 0..=half_window {
        let c = cesaro_mean(&g_spec, m)?;
        let approximation_error = c
            .values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if approximation_error > 0.5 {
            continue;
        }
        let cc = cesaro_coefficients(&g_spec, m)?;
        let mm = m as i64;
        let r: Vec<Complex64> = (n1..=mm).map(|n| cc.coeff(n)).collect();
        let t: Vec<Complex64> = (n1..=mm).map(|k| cc.coeff(-k).conj()).collect();
        let rt = ComplexPolynomial::new(r).add(&ComplexPolynomial::new(t));
        let strip_deviation = g
            .values()
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let z = g.point(j);
                ((v - z.powi(n1 as i32) * rt.eval(z)).re - 1.0).abs()
            })
            .fold(0.0, f64::max);
        if strip_deviation > 0.5 + STRIP_SLACK {
            return Err(Error::Resolution(format!(
                "composite leaves the strip: deviation {strip_deviation:e} at Cesàro order {m}"
            )));
        }
        let q = rt.scale(-a0).trimmed(0.0);
        let p = ComplexPolynomial::one();
        let result = composite_result(f, &p, &q, tol.min_mod_rel)?;
        if result.winding != -n1 {
            return Err(Error::Resolution(format!(
                "recomputed winding {} differs from {}",
                result.winding, -n1
            )));
        }
        return Ok(Lemma41Witness {
            certificate: WindingCertificate::new(budget, p, q, &result, tol.min_mod_rel),
            cesaro_order: m,
            approximation_error,
            strip_deviation,
            leading_coefficient: a0,
        });
    }
    Err(Error::Resolution(format!(
        "no Cesàro order up to {half_window} approximates z^{n1} f within 1/2"
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FalsifyOutcome {
    Certificate(Box<WindingCertificate>),
    /// The coanalytic tail of `Pf` vanishes: `f` extends and no pair exists.
    NoFalsifierFound {
        pole_budget: usize,
        annihilator: ComplexPolynomial,
        tail_residual: f64,
    },
}

/// Annihilates `f̂(-1..-N)` with `P`, splits `Pf = F₁ + φ`, and searches
/// `α` near the origin so that `Q = -F₁ + α` (truncated at the window) gives
/// `W(Pf + Q) <= -N - 1`. The tail of `Pf` is measured relative to
/// `Σ|f̂(n)|` and compared with `tol.tail_tol`.
pub fn falsify(spec: &FourierSpectrum, f: &BoundarySamples, budget: usize, tol: &Tolerances) -> Result<FalsifyOutcome> {
    let k = spec.half_window();
    let needed = 4 * budget + FALSIFIER_TAIL_MARGIN;
    if k < needed {
        return Err(Error::Precondition(format!(
            "budget {budget} needs half window {needed}, have {k}"
        )));
    }
    if spec.source_grid_size() != f.grid_size() {
        return Err(Error::Precondition(format!(
            "spectrum from {} samples does not match a grid of {}",
            spec.source_grid_size(),
            f.grid_size()
        )));
    }
    let p = if budget == 0 {
        ComplexPolynomial::one()
    } else {
        annihilator(&build_system(spec, budget, budget)?, tol.rank_tol).polynomial
    };
    let pf = f.composite(&p, &ComplexPolynomial::zero())?;
    let pf_spec = fourier_coefficients(&pf, k)?;
    let scale = coefficient_scale(spec);
    let tail = (budget as i64 + 1..=k as i64)
        .map(|n| pf_spec.coeff(-n).norm())
        .fold(0.0, f64::max);
    let tail_residual = if scale == 0.0 { 0.0 } else { tail / scale };
    if tail_residual <= tol.tail_tol {
        return Ok(FalsifyOutcome::NoFalsifierFound {
            pole_budget: budget,
            annihilator: p,
            tail_residual,
        });
    }

    let f1 = ComplexPolynomial::new((0..=k as i64).map(|n| pf_spec.coeff(n)).collect());
    let phi = pf.map(|z, v| v - f1.eval(z))?;
    let radius = phi.max_modulus();
    let target = -(budget as i64) - 1;
    let mut tried = 0;
    let mut best_min_modulus = 0.0;
    let mut best_winding = None;
    for alpha in alpha_candidates(radius) {
        tried += 1;
        let q = f1.scale(Complex64::new(-1.0, 0.0)).add(&ComplexPolynomial::constant(alpha));
        match composite_result(f, &p, &q, tol.min_mod_rel) {
            Ok(r) => {
                if r.winding <= target {
                    return Ok(FalsifyOutcome::Certificate(Box::new(WindingCertificate::new(
                        budget,
                        p,
                        q,
                        &r,
                        tol.min_mod_rel,
                    ))));
                }
                if best_winding.is_none_or(|w| r.winding < w) {
                    best_winding = Some(r.winding);
                }
                best_min_modulus = f64::max(best_min_modulus, r.min_modulus);
            }
            Err(e) if is_inadmissible(&e) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::SearchExhausted {
        tried,
        best_min_modulus,
        best_winding,
    })
}

/// `0`, then `2^{-t} r e^{2πi k/16}` for `t = 1..=20`, `k = 0..16`, in that
/// order.
fn alpha_candidates(radius: f64) -> impl Iterator<Item = Complex64> {
    std::iter::once(Complex64::new(0.0, 0.0)).chain((1..=ALPHA_RINGS).flat_map(move |t| {
        (0..ALPHA_PHASES).map(move |k| Complex64::from_polar(radius * 2f64.powi(-t), TAU * k as f64 / ALPHA_PHASES as f64))
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub q: ComplexPolynomial,
    /// Hermite interpolant of the logarithmic jets.
    pub phi: ComplexPolynomial,
    pub points: Vec<(Complex64, usize)>,
    pub winding: i64,
    pub min_modulus: f64,
    /// Largest Taylor coefficient of `e^Φ - Ψ` of order below `p_j` at any `α_j`.
    pub jet_error: f64,
    /// `max |Ψ + ∏(z - α_j)^{p_j} Q - e^Φ|` on the grid.
    pub approximation_error: f64,
    /// Highest jet order matched at `α_j` is `p_j + 1 - jet_shortfall`; 1
    /// means the order-`p_j` jet was dropped to keep `e^Φ` resolvable.
    pub jet_shortfall: usize,
}

/// Taylor coefficients of `p` at `a`, orders `0..count`, by repeated
/// synthetic division.
fn taylor_at(p: &ComplexPolynomial, a: Complex64, count: usize) -> Vec<Complex64> {
    let mut q = p.clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(q.eval(a));
        q = if q.degree() == 0 {
            ComplexPolynomial::zero()
        } else {
            q.deflate(a)
        };
    }
    out
}

/// Taylor coefficients of `log g` from those of `g` (with `g(a) != 0`).
fn log_jets(c: &[Complex64]) -> Vec<Complex64> {
    let mut d = vec![c[0].ln()];
    for l in 1..c.len() {
        let mut acc = c[l] * l as f64;
        for k in 1..l {
            acc -= d[k] * c[l - k] * k as f64;
        }
        d.push(acc / (c[0] * l as f64));
    }
    d
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Polynomial of degree `Σ(len) - 1` whose Taylor data at each point match
/// the given jets.
fn hermite_interpolate(data: &[(Complex64, Vec<Complex64>)]) -> Result<ComplexPolynomial> {
    let size: usize = data.iter().map(|(_, d)| d.len()).sum();
    if size == 0 {
        return Ok(ComplexPolynomial::zero());
    }
    let mut a = DMatrix::<Complex64>::zeros(size, size);
    let mut b = DVector::<Complex64>::zeros(size);
    let mut row = 0;
    for (alpha, jets) in data {
        for (l, &d) in jets.iter().enumerate() {
            for n in l..size {
                a[(row, n)] = alpha.powu((n - l) as u32) * binomial(n, l);
            }
            b[row] = d;
            row += 1;
        }
    }
    let x = a
        .clone()
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Conditioning("Hermite system is singular".into()))?;
    let residual = (&a * &x - &b).norm();
    if !(residual <= 1e-8 * (1.0 + b.norm())) {
        return Err(Error::Conditioning(format!(
            "Hermite system solved with residual {residual:e}"
        )));
    }
    Ok(ComplexPolynomial::new(x.iter().copied().collect()))
}

fn exp_poly(phi: &ComplexPolynomial, z: Complex64) -> Complex64 {
    phi.eval(z).exp()
}

fn merge_points(points: &[(Complex64, usize)]) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for &(a, p) in points {
        match out.iter_mut().find(|(b, _)| (a - *b).norm() <= 1e-12) {
            Some(entry) => entry.1 += p,
            None => out.push((a, p)),
        }
    }
    out
}

/// Polynomial `Q` making `Ψ + ∏(z - α_j)^{p_j} Q` zero-free on the closed
/// disc, via `Q = (e^Φ - Ψ)/∏(z - α_j)^{p_j}` with `Φ` interpolating the
/// logarithmic jets of `Ψ` through order `p_j`. `Ψ` must be holomorphic
/// (its negative coefficients numerically zero) and nonzero at each `α_j`.
pub fn zero_free_completion(psi: &FourierSpectrum, points: &[(Complex64, usize)], tol: &Tolerances) -> Result<Completion> {
    if points.iter().any(|&(_, p)| p == 0) {
        return Err(Error::InvalidInput("interior point with multiplicity 0".into()));
    }
    let points = merge_points(points);
    if let Some(&(a, _)) = points.iter().find(|(a, _)| a.norm() >= 1.0 - tol.interior_margin) {
        return Err(Error::Domain(format!(
            "point {a} is not inside the disc by margin {}",
            tol.interior_margin
        )));
    }
    let scale = coefficient_scale(psi);
    if psi.coanalytic_energy().sqrt() > tol.tail_tol * scale {
        return Err(Error::Precondition(
            "Ψ has a nonzero coanalytic part; it is not in the disc algebra".into(),
        ));
    }
    let k = psi.half_window() as i64;
    let psi_poly = ComplexPolynomial::new((0..=k).map(|n| psi.coeff(n)).collect());
    for &(a, _) in &points {
        if psi_poly.eval(a).norm() <= 1e-10 * scale {
            return Err(Error::Precondition(format!("Ψ vanishes at {a}")));
        }
    }
    // Matching through order p_j can force Φ to swing so far that e^Φ spans
    // more than double precision resolves; the division only needs orders
    // below p_j, so that weaker interpolation is the fallback.
    match complete_with(psi, &psi_poly, &points, 0, tol) {
        Err(Error::Completion(_)) => complete_with(psi, &psi_poly, &points, 1, tol),
        other => other,
    }
}

fn complete_with(
    psi: &FourierSpectrum,
    psi_poly: &ComplexPolynomial,
    points: &[(Complex64, usize)],
    shortfall: usize,
    tol: &Tolerances,
) -> Result<Completion> {
    let mut data = Vec::with_capacity(points.len());
    for &(a, p) in points {
        let c = taylor_at(psi_poly, a, p + 1 - shortfall);
        data.push((a, log_jets(&c)));
    }
    let phi = hermite_interpolate(&data)?;
    let weight = ComplexPolynomial::from_root_multiplicities(points);

    let samples = psi.synthesize()?;
    let m = samples.grid_size();
    let quotient = samples.map(|z, v| (exp_poly(&phi, z) - v) / weight.eval(z))?;
    let coeffs = quotient.dft();
    let top = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let q = ComplexPolynomial::new(coeffs[..=max_half_window(m)].to_vec()).trimmed(1e-16 * top);

    let composite = samples.composite(&ComplexPolynomial::one(), &ComplexPolynomial::zero())?
        .map(|z, v| v + weight.eval(z) * q.eval(z))?;
    let approximation_error = composite
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| (v - exp_poly(&phi, composite.point(j))).norm())
        .fold(0.0, f64::max);
    let result = match winding_number(&composite, relative_tolerance(&composite, tol.min_mod_rel)) {
        Ok(r) => r,
        Err(e) if is_inadmissible(&e) => {
            return Err(Error::Completion(format!("composite is not verifiably nonvanishing: {e}")))
        }
        Err(e) => return Err(e),
    };
    if result.winding != 0 {
        return Err(Error::Completion(format!(
            "composite winds {} times, min modulus {:e}",
            result.winding, result.min_modulus
        )));
    }

    let mut jet_error: f64 = 0.0;
    for &(a, p) in points {
        let others = points
            .iter()
            .filter(|(b, _)| *b != a)
            .map(|(b, _)| (a - b).norm() / 2.0)
            .fold(f64::INFINITY, f64::min);
        let rho = JET_RADIUS.min((1.0 - a.norm()) / 2.0).min(others);
        let jets = circle_taylor(|z| exp_poly(&phi, z) - psi_poly.eval(z), a, rho, p);
        jet_error = jets.iter().map(|c| c.norm()).fold(jet_error, f64::max);
    }
    if jet_error > JET_TOLERANCE {
        return Err(Error::Completion(format!("jet mismatch {jet_error:e} exceeds {JET_TOLERANCE:e}")));
    }
    Ok(Completion {
        q,
        phi,
        points: points.to_vec(),
        winding: result.winding,
        min_modulus: result.min_modulus,
        jet_error,
        approximation_error,
        jet_shortfall: shortfall,
    })
}

/// Taylor coefficients of orders `0..count` at `a` by the trapezoid rule on
/// the circle of radius `rho`.
fn circle_taylor<G: Fn(Complex64) -> Complex64>(g: G, a: Complex64, rho: f64, count: usize) -> Vec<Complex64> {
    let values: Vec<(Complex64, Complex64)> = (0..JET_NODES)
        .map(|k| {
            let w = Complex64::from_polar(1.0, TAU * k as f64 / JET_NODES as f64);
            (w, g(a + w * rho))
        })
        .collect();
    (0..count)
        .map(|l| {
            let s: Complex64 = values.iter().map(|(w, v)| v * w.powi(-(l as i32))).sum();
            s / (JET_NODES as f64 * rho.powi(l as i32))
        })
        .collect()
}

/// Polynomial of degree uniform in `0..=max_degree` with coefficients
/// uniform in the disc of radius `radius`.
pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: usize, radius: f64) -> ComplexPolynomial {
    let degree = rng.random_range(0..=max_degree);
    ComplexPolynomial::new(
        (0..=degree)
            .map(|_| {
                let r = radius * rng.random::<f64>().sqrt();
                Complex64::from_polar(r, TAU * rng.random::<f64>())
            })
            .collect(),
    )
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub pole_budget: usize,
    pub draws: usize,
    pub admissible: usize,
    pub min_winding: Option<i64>,
    /// Admissible draws with `W(Pf + Q) <= -N - 1`.
    pub violations: Vec<WindingCertificate>,
}

/// Random pairs `(P, Q)` of degree at most `max_degree`; for `f` extending
/// with `N` poles every admissible draw should wind at least `-N`.
pub fn only_if_sweep(
    f: &BoundarySamples,
    budget: usize,
    draws: usize,
    max_degree: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SweepReport {
        pole_budget: budget,
        draws,
        ..Default::default()
    };
    for _ in 0..draws {
        let mut p = random_polynomial(&mut rng, max_degree, 1.0);
        if p.is_zero() {
            p = ComplexPolynomial::one();
        }
        let size = f.composite(&p, &ComplexPolynomial::zero())?.max_modulus().max(1e-300);
        let q = random_polynomial(&mut rng, max_degree, size);
        match composite_result(f, &p, &q, tol.min_mod_rel) {
            Ok(r) => {
                report.admissible += 1;
                report.min_winding = Some(report.min_winding.map_or(r.winding, |w| w.min(r.winding)));
                if r.winding < -(budget as i64) {
                    report.violations.push(WindingCertificate::new(budget, p, q, &r, tol.min_mod_rel));
                }
            }
            Err(e) if is_inadmissible(&e) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub draws: usize,
    pub admissible: usize,
    /// Winding of `f + Q` to number of admissible draws.
    pub histogram: BTreeMap<i64, usize>,
}

/// Distribution of `W(f + Q)` over random `Q` (no `P`). Purely descriptive.
pub fn q_only_probe(f: &BoundarySamples, draws: usize, max_degree: usize, seed: u64, tol: &Tolerances) -> Result<ProbeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProbeReport {
        draws,
        ..Default::default()
    };
    let radius = f.max_modulus().max(1e-300);
    let one = ComplexPolynomial::one();
    for _ in 0..draws {
        let q = random_polynomial(&mut rng, max_degree, radius);
        match composite_result(f, &one, &q, tol.min_mod_rel) {
            Ok(r) => {
                report.admissible += 1;
                *report.histogram.entry(r.winding).or_default() += 1;
            }
            Err(e) if is_inadmissible(&e) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialQ {
    pub q: ComplexPolynomial,
    pub winding: i64,
    pub min_modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop63Report {
    pub pole_count: usize,
    /// The completion-based `Q`; `W(f + SQ)` should equal `-pole_count`.
    pub special: Option<SpecialQ>,
    /// Why no completion-based `Q` was built.
    pub special_unavailable: Option<String>,
    pub draws: usize,
    pub admissible: usize,
    pub min_winding: Option<i64>,
    /// Admissible draws with `W(f + SQ) < 0`.
    pub negative_windings: usize,
}

/// Checks `W(f + SQ)` for rational `f` and `S` with zeros inside the disc:
/// the completion-based `Q` and `draws` random `Q` of degree at most 6.
pub fn check_prop63(
    f: &RationalFunction,
    s: &ComplexPolynomial,
    draws: usize,
    seed: u64,
    grid_size: usize,
    tol: &Tolerances,
) -> Result<Prop63Report> {
    let s = s.trimmed(0.0);
    if s.is_zero() {
        return Err(Error::Precondition("S is identically zero".into()));
    }
    let s_roots = s.roots()?;
    if let Some(r) = s_roots.iter().find(|r| r.norm() >= 1.0 - tol.interior_margin) {
        return Err(Error::Precondition(format!("S has the root {r} outside the disc")));
    }
    let samples = BoundarySamples::sample(|z| f.eval(z), grid_size)?;
    let poles = f.interior_poles();
    let pole_count = f.interior_pole_count();

    let h = f.without_interior_poles();
    let h_samples = BoundarySamples::sample(|z| h.eval(z), grid_size)?;
    let h_scale = h_samples.max_modulus();
    let shared = s_roots.iter().find(|&&r| h.eval(r).norm() <= 1e-8 * h_scale);
    let (special, special_unavailable) = match shared {
        Some(r) => (None, Some(format!("the extension vanishes at the root {r} of S"))),
        None => {
            let h_spec = fourier_coefficients(&h_samples, max_half_window(grid_size))?;
            let mut points = poles.clone();
            points.extend(s_roots.iter().map(|&r| (r, 1)));
            let completion = zero_free_completion(&h_spec, &points, tol)?;
            let lead = *s.coeffs().last().expect("nonzero polynomial");
            let q = completion.q.scale(1.0 / lead);
            let r = composite_result(&samples, &ComplexPolynomial::one(), &s.mul(&q), tol.min_mod_rel)?;
            (
                Some(SpecialQ {
                    q,
                    winding: r.winding,
                    min_modulus: r.min_modulus,
                }),
                None,
            )
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = samples.max_modulus().max(1e-300);
    let mut admissible = 0;
    let mut min_winding: Option<i64> = None;
    let mut negative_windings = 0;
    for _ in 0..draws {
        let q = random_polynomial(&mut rng, 6, radius);
        match composite_result(&samples, &ComplexPolynomial::one(), &s.mul(&q), tol.min_mod_rel) {
            Ok(r) => {
                admissible += 1;
                min_winding = Some(min_winding.map_or(r.winding, |w| w.min(r.winding)));
                if r.winding < 0 {
                    negative_windings += 1;
                }
            }
            Err(e) if is_inadmissible(&e) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(Prop63Report {
        pole_count,
        special,
        special_unavailable,
        draws,
        admissible,
        min_winding,
        negative_windings,
    })
}
