//! Deciding meromorphic extendibility from the moment conditions.
//!
//! `f` extends meromorphically through the disc with at most `N` poles
//! exactly when a nonzero `P` of degree at most `N` makes every negative
//! coefficient of `P f` vanish. The pipeline solves the Hankel system for
//! `P`, checks a finite stretch of the tail equations, then reduces `P` to
//! its interior roots: exterior roots cannot be poles, and boundary roots are
//! divided out only when the tail still vanishes without them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hankel::{annihilator, build_system};
use crate::polynomial::ComplexPolynomial;
use crate::spectrum::{pairwise_sum, BoundarySamples, FourierSpectrum};
use crate::tolerances::Tolerances;

/// Schema tag written into serialized reports.
pub const REPORT_SCHEMA: &str = "cauchy-scope/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    ExtendsHolomorphically,
    ExtendsMeromorphically,
    NoExtensionWithinBudget,
}

impl Verdict {
    pub fn extends(self) -> bool {
        !matches!(self, Verdict::NoExtensionWithinBudget)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub location: Complex64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeromorphicReport {
    pub schema: String,
    pub verdict: Verdict,
    pub pole_budget: usize,
    /// Monic product over the interior poles; the tested annihilator when
    /// the verdict is negative.
    pub denominator: ComplexPolynomial,
    pub poles: Vec<Pole>,
    /// `max |(Pf)^(-n)|` over the checked `n > N`, relative to `Σ|f̂(n)|`.
    pub tail_residual: f64,
    /// Same quantity over `1 <= n <= N`.
    pub system_residual: f64,
    pub boundary_roots: Vec<Complex64>,
    pub checked_tail_depth: usize,
    /// Dimension of the numerical null space of the order-`N` system; above
    /// one, a representative was chosen and others were not tested.
    pub null_space_dimension: usize,
}

impl MeromorphicReport {
    pub fn pole_count(&self) -> usize {
        self.poles.iter().map(|p| p.multiplicity).sum()
    }
}

/// Roots of a polynomial grouped into clusters and split by modulus.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootClasses {
    pub interior: Vec<(Complex64, usize)>,
    pub boundary: Vec<(Complex64, usize)>,
    pub exterior: Vec<(Complex64, usize)>,
}

/// Companion-matrix roots of `p`, merged by single linkage at
/// `cluster_radius` (cluster location is the centroid) and partitioned by
/// modulus against `1 ± boundary_band`.
pub fn classify_roots(p: &ComplexPolynomial, boundary_band: f64, cluster_radius: f64) -> Result<RootClasses> {
    let roots = p.roots()?;
    let mut classes = RootClasses::default();
    for (z, m) in cluster(&roots, cluster_radius) {
        let z = refine_multiple_root(p, z, m);
        let r = z.norm();
        if r < 1.0 - boundary_band {
            classes.interior.push((z, m));
        } else if r > 1.0 + boundary_band {
            classes.exterior.push((z, m));
        } else {
            classes.boundary.push((z, m));
        }
    }
    Ok(classes)
}

/// A root of multiplicity `m` is a simple root of the `(m-1)`-th derivative,
/// where Newton's method is well conditioned. Falls back to the centroid if
/// the iteration wanders.
fn refine_multiple_root(p: &ComplexPolynomial, z0: Complex64, m: usize) -> Complex64 {
    if m < 2 {
        return z0;
    }
    let mut d = p.clone();
    for _ in 1..m {
        d = d.derivative();
    }
    let dd = d.derivative();
    let mut z = z0;
    for _ in 0..8 {
        let slope = dd.eval(z);
        if slope == Complex64::new(0.0, 0.0) {
            break;
        }
        let step = d.eval(z) / slope;
        z -= step;
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    if z.is_finite() && (z - z0).norm() <= 10.0 * (1.0 + z0.norm()) * f64::EPSILON.cbrt() {
        z
    } else {
        z0
    }
}

fn cluster(roots: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    // Single linkage: repeatedly merge labels of close pairs.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in i + 1..n {
                if (roots[i] - roots[j]).norm() <= radius && label[i] != label[j] {
                    let (keep, drop) = (label[i].min(label[j]), label[i].max(label[j]));
                    label.iter_mut().filter(|l| **l == drop).for_each(|l| *l = keep);
                    changed = true;
                }
            }
        }
    }
    let mut out = Vec::new();
    for l in 0..n {
        let members: Vec<Complex64> = (0..n).filter(|&i| label[i] == l).map(|i| roots[i]).collect();
        if !members.is_empty() {
            let centroid = members.iter().sum::<Complex64>() / members.len() as f64;
            out.push((centroid, members.len()));
        }
    }
    out.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).expect("finite roots"));
    out
}

/// Default tail depth `3N + 8`.
pub fn default_tail_depth(budget: usize) -> usize {
    3 * budget + 8
}

/// Normalizing scale for residuals: the ℓ¹ norm of the window, an upper bound
/// for the sup norm of the truncated series.
pub(crate) fn coefficient_scale(spec: &FourierSpectrum) -> f64 {
    let moduli: Vec<f64> = spec.coeffs().iter().map(|c| c.norm()).collect();
    pairwise_sum(&moduli)
}

/// `|(Pf)^(-n)| = |Σ_k D_k f̂(-n-k)|` for `n = 1..=last`.
fn moment_residuals(spec: &FourierSpectrum, p: &ComplexPolynomial, last: usize) -> Vec<f64> {
    (1..=last as i64)
        .map(|n| {
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, &d)| d * spec.coeff(-n - k as i64))
                .sum::<Complex64>()
                .norm()
        })
        .collect()
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(0.0, f64::max)
}

struct Residuals {
    system: f64,
    tail: f64,
}

fn residuals(spec: &FourierSpectrum, p: &ComplexPolynomial, budget: usize, depth: usize, scale: f64) -> Residuals {
    let p = p.normalized();
    let r = moment_residuals(spec, &p, budget + depth);
    let (system, tail) = r.split_at(budget);
    Residuals {
        system: max_of(system) / scale,
        tail: max_of(tail) / scale,
    }
}

/// Decides whether the spectrum admits an extension with at most `budget`
/// poles, checking the tail equations for `n = N+1 ..= N + tail_depth`.
pub fn detect_meromorphic(
    spec: &FourierSpectrum,
    budget: usize,
    tail_depth: Option<usize>,
    tol: &Tolerances,
) -> Result<MeromorphicReport> {
    let depth = tail_depth.unwrap_or_else(|| default_tail_depth(budget));
    let needed = 2 * budget + depth;
    if spec.half_window() < needed {
        return Err(Error::Precondition(format!(
            "budget {budget} with tail depth {depth} needs half window {needed}, have {}",
            spec.half_window()
        )));
    }
    let scale = coefficient_scale(spec);
    let report = |verdict, denominator, poles, res: Residuals, boundary_roots, nullity| MeromorphicReport {
        schema: REPORT_SCHEMA.to_string(),
        verdict,
        pole_budget: budget,
        denominator,
        poles,
        tail_residual: res.tail,
        system_residual: res.system,
        boundary_roots,
        checked_tail_depth: depth,
        null_space_dimension: nullity,
    };

    let limit = tol.tail_tol;
    if scale == 0.0 || spec.coanalytic_energy().sqrt() <= limit * scale {
        let one = ComplexPolynomial::one();
        let res = if scale == 0.0 {
            Residuals { system: 0.0, tail: 0.0 }
        } else {
            residuals(spec, &one, budget, depth, scale)
        };
        return Ok(report(Verdict::ExtendsHolomorphically, one, Vec::new(), res, Vec::new(), budget + 1));
    }

    let system = build_system(spec, budget, 2 * budget)?;
    let ann = annihilator(&system, tol.rank_tol);
    let mut p = ann.polynomial.trimmed(0.0);
    let res = residuals(spec, &p, budget, depth, scale);
    if res.system > limit || res.tail > limit {
        return Ok(report(
            Verdict::NoExtensionWithinBudget,
            ann.polynomial,
            Vec::new(),
            res,
            Vec::new(),
            ann.nullity,
        ));
    }

    let passes = |q: &ComplexPolynomial| {
        let r = residuals(spec, q, budget, depth, scale);
        r.system <= limit && r.tail <= limit
    };

    let classes = classify_roots(&p, tol.boundary_band, tol.cluster_radius)?;
    let mut boundary_roots = Vec::new();
    for &(a, m) in &classes.boundary {
        for _ in 0..m {
            p = p.deflate(a);
            let r = residuals(spec, &p, budget, depth, scale);
            if r.system > limit || r.tail > limit {
                return Err(Error::AmbiguousRoot {
                    root: a,
                    residual: r.system.max(r.tail),
                });
            }
            boundary_roots.push(a);
        }
    }

    // Interior roots that the tail equations do not need are not poles.
    let mut interior = classes.interior.clone();
    let mut i = 0;
    while i < interior.len() {
        let mut trial = interior.clone();
        trial[i].1 -= 1;
        let reduced = ComplexPolynomial::from_root_multiplicities(&trial);
        if passes(&reduced) {
            interior = trial.into_iter().filter(|&(_, m)| m > 0).collect();
            i = 0;
        } else {
            i += 1;
        }
    }

    let denominator = ComplexPolynomial::from_root_multiplicities(&interior);
    let res = residuals(spec, &denominator, budget, depth, scale);
    if res.system > limit || res.tail > limit {
        return Err(Error::Conditioning(format!(
            "discarding exterior roots {:?} raised the moment residual to {:e}",
            classes.exterior,
            res.system.max(res.tail)
        )));
    }
    let poles: Vec<Pole> = interior
        .iter()
        .map(|&(location, multiplicity)| Pole {
            location,
            multiplicity,
        })
        .collect();
    let verdict = if !poles.is_empty() {
        Verdict::ExtendsMeromorphically
    } else if spec.coanalytic_energy().sqrt() <= limit * scale {
        Verdict::ExtendsHolomorphically
    } else {
        Verdict::NoExtensionWithinBudget
    };
    Ok(report(verdict, denominator, poles, res, boundary_roots, ann.nullity))
}

/// Scans budgets `0..=cap` and returns the first extension verdict, or the
/// report at `cap` when none extends.
pub fn minimal_budget(
    spec: &FourierSpectrum,
    cap: usize,
    tail_depth: Option<usize>,
    tol: &Tolerances,
) -> Result<MeromorphicReport> {
    let mut last = None;
    for budget in 0..=cap {
        let report = detect_meromorphic(spec, budget, tail_depth, tol)?;
        if report.verdict.extends() {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("budget range is nonempty"))
}

/// `H(w)/P(w)` with `H(w) = (1/2πi) ∮ P(ζ) f(ζ) / (ζ - w) dζ` by the
/// trapezoid rule on the sample grid, `P` the report's interior denominator.
pub fn cauchy_extend(f: &BoundarySamples, report: &MeromorphicReport, w: Complex64, tol: &Tolerances) -> Result<Complex64> {
    if !report.verdict.extends() {
        return Err(Error::Precondition(
            "no extension to evaluate: verdict is NO_EXTENSION_WITHIN_BUDGET".into(),
        ));
    }
    if w.norm() > 1.0 - tol.interior_margin {
        return Err(Error::Domain(format!(
            "|w| = {} is within {} of the circle",
            w.norm(),
            tol.interior_margin
        )));
    }
    if let Some(pole) = report
        .poles
        .iter()
        .find(|p| (p.location - w).norm() <= tol.pole_clearance)
    {
        return Err(Error::Domain(format!(
            "w = {w} lies within {} of the pole {}",
            tol.pole_clearance, pole.location
        )));
    }
    let p = &report.denominator;
    let m = f.grid_size();
    // dζ = iζ dθ, so (1/2πi)∮ g/(ζ-w) dζ ≈ (1/M) Σ g(ζ_j) ζ_j / (ζ_j - w).
    let terms: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let zeta = f.point(j);
            p.eval(zeta) * v * zeta / (zeta - w)
        })
        .collect();
    let re: Vec<f64> = terms.iter().map(|t| t.re).collect();
    let im: Vec<f64> = terms.iter().map(|t| t.im).collect();
    let h = Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) / m as f64;
    Ok(h / p.eval(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::fourier_coefficients;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn analyze<F: Fn(Complex64) -> Complex64>(g: F, budget: usize) -> (BoundarySamples, MeromorphicReport) {
        let s = BoundarySamples::sample(g, 4096).unwrap();
        let spec = fourier_coefficients(&s, 256).unwrap();
        let r = detect_meromorphic(&spec, budget, None, &Tolerances::default()).unwrap();
        (s, r)
    }

    #[test]
    fn simple_pole_is_recovered() {
        let (s, r) = analyze(|z| 1.0 / (z - 0.5), 1);
        assert_eq!(r.verdict, Verdict::ExtendsMeromorphically);
        assert_eq!(r.poles.len(), 1);
        assert_eq!(r.poles[0].multiplicity, 1);
        assert!((r.poles[0].location - 0.5).norm() < 1e-10);
        assert!(r.tail_residual <= 1e-8);
        let v = cauchy_extend(&s, &r, c(0.0, 0.0), &Tolerances::default()).unwrap();
        assert!((v + 2.0).norm() < 1e-10);
    }

    #[test]
    fn polynomial_extends_holomorphically() {
        let (s, r) = analyze(|z| z * z * z + 2.0, 3);
        assert_eq!(r.verdict, Verdict::ExtendsHolomorphically);
        assert!(r.poles.is_empty());
        let (s3, r3) = analyze(|z| z * z * z, 0);
        assert_eq!(r3.verdict, Verdict::ExtendsHolomorphically);
        let v = cauchy_extend(&s3, &r3, c(0.3, 0.0), &Tolerances::default()).unwrap();
        assert!((v - 0.027).norm() < 1e-14);
        drop(s);
    }

    #[test]
    fn sixth_section_example() {
        let (s, r) = analyze(|z| z / (z - 0.5), 1);
        assert_eq!(r.verdict, Verdict::ExtendsMeromorphically);
        assert!((r.poles[0].location - 0.5).norm() < 1e-10);
        let v = cauchy_extend(&s, &r, c(0.25, 0.0), &Tolerances::default()).unwrap();
        assert!((v + 1.0).norm() < 1e-10);
        let (_, r0) = analyze(|z| z / (z - 0.5), 0);
        assert_eq!(r0.verdict, Verdict::NoExtensionWithinBudget);
    }

    #[test]
    fn lacunary_has_no_small_extension() {
        let lac = |z: Complex64| (1..=4).map(|k| 0.5f64.powi(k) * z.powi(-(3i32.pow(k as u32)))).sum::<Complex64>();
        let (_, r) = analyze(lac, 4);
        assert_eq!(r.verdict, Verdict::NoExtensionWithinBudget);
        assert!(r.tail_residual > 1e-3 || r.system_residual > 1e-3);
    }

    #[test]
    fn root_classification_examples() {
        let p = ComplexPolynomial::from_roots(&[c(0.5, 0.0), c(2.0, 0.0)]);
        let cl = classify_roots(&p, 1e-6, 1e-6).unwrap();
        assert_eq!(cl.interior.len(), 1);
        assert!((cl.interior[0].0 - 0.5).norm() < 1e-12);
        assert!((cl.exterior[0].0 - 2.0).norm() < 1e-12);

        let sq = ComplexPolynomial::from_real(&[0.0, 0.0, 1.0]);
        let cl = classify_roots(&sq, 1e-6, 1e-6).unwrap();
        assert_eq!(cl.interior, vec![(c(0.0, 0.0), 2)]);

        let b = ComplexPolynomial::from_roots(&[c(1.0, 0.0), c(0.3, 0.0)]);
        let cl = classify_roots(&b, 1e-6, 1e-6).unwrap();
        assert_eq!(cl.boundary.len(), 1);
        assert!((cl.boundary[0].0 - 1.0).norm() < 1e-12);
        assert!((cl.interior[0].0 - 0.3).norm() < 1e-12);

        let cl = classify_roots(&ComplexPolynomial::constant(c(2.0, 0.0)), 1e-6, 1e-6).unwrap();
        assert_eq!(cl, RootClasses::default());
    }

    #[test]
    fn window_too_small_is_rejected() {
        let s = BoundarySamples::sample(|z| 1.0 / (z - 0.5), 256).unwrap();
        let spec = fourier_coefficients(&s, 20).unwrap();
        assert!(matches!(
            detect_meromorphic(&spec, 3, None, &Tolerances::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn evaluation_domain_errors() {
        let (s, r) = analyze(|z| 1.0 / (z - 0.5), 1);
        let tol = Tolerances::default();
        assert!(matches!(cauchy_extend(&s, &r, c(0.5004, 0.0), &tol), Err(Error::Domain(_))));
        assert!(matches!(cauchy_extend(&s, &r, c(0.0, 0.9995), &tol), Err(Error::Domain(_))));
        let (_, bad) = analyze(|z| 1.0 / (z - 0.5), 0);
        assert!(matches!(cauchy_extend(&s, &bad, c(0.0, 0.0), &tol), Err(Error::Precondition(_))));
    }

    #[test]
    fn larger_budget_keeps_the_pole_multiset() {
        let g = |z: Complex64| (z - c(0.1, 0.7)) / ((z - 0.4) * (z + c(0.3, 0.2)).powi(2));
        let s = BoundarySamples::sample(g, 4096).unwrap();
        let spec = fourier_coefficients(&s, 256).unwrap();
        let tol = Tolerances::default();
        let base = detect_meromorphic(&spec, 3, None, &tol).unwrap();
        assert_eq!(base.verdict, Verdict::ExtendsMeromorphically);
        assert_eq!(base.pole_count(), 3);
        for budget in 4..=8 {
            let r = detect_meromorphic(&spec, budget, None, &tol).unwrap();
            assert_eq!(r.verdict, Verdict::ExtendsMeromorphically, "budget {budget}");
            assert_eq!(r.poles.len(), base.poles.len());
            for (a, b) in r.poles.iter().zip(&base.poles) {
                assert_eq!(a.multiplicity, b.multiplicity);
                assert!((a.location - b.location).norm() < 1e-6);
            }
        }
        let min = minimal_budget(&spec, 6, None, &tol).unwrap();
        assert_eq!(min.pole_budget, 3);
    }

    #[test]
    fn exterior_roots_are_irrelevant() {
        let p = ComplexPolynomial::from_roots(&[c(0.2, 0.3), c(-0.5, 0.0)]);
        let with = p.mul(&ComplexPolynomial::from_roots(&[c(1.7, -0.4)]));
        let a = classify_roots(&p, 1e-6, 1e-6).unwrap();
        let b = classify_roots(&with, 1e-6, 1e-6).unwrap();
        assert_eq!(a.interior.len(), b.interior.len());
        for (x, y) in a.interior.iter().zip(&b.interior) {
            assert!((x.0 - y.0).norm() < 1e-12 && x.1 == y.1);
        }
        assert_eq!(b.exterior.len(), 1);
    }

    #[test]
    fn report_serializes_with_schema_and_pairs() {
        let (_, r) = analyze(|z| 1.0 / (z - 0.5), 1);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["schema"], "cauchy-scope/1");
        assert_eq!(v["verdict"], "EXTENDS_MEROMORPHICALLY");
        assert!(v["poles"][0]["location"].as_array().unwrap().len() == 2);
        let back: MeromorphicReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
