use cauchy_scope::extension::{detect_meromorphic, Verdict};
use cauchy_scope::oracle::{random_rational, RationalFunction};
use cauchy_scope::spectrum::fourier_coefficients;
use cauchy_scope::winding::{relative_tolerance, winding_number};
use cauchy_scope::{BoundarySamples, Tolerances};
use num_complex::Complex64;
use proptest::prelude::*;

const GOLDEN: &str = include_str!("golden/random_rational_seed0_max2.json");

#[test]
fn seed_zero_matches_the_golden_file() {
    let expected: RationalFunction = serde_json::from_str(GOLDEN).unwrap();
    assert_eq!(random_rational(0, 2, 0.8).unwrap(), expected);
}

#[test]
fn pipeline_agrees_with_the_oracle() {
    let tol = Tolerances::default();
    for seed in 0..100 {
        let r = random_rational(seed, 5, 0.8).unwrap();
        let samples = BoundarySamples::sample(|z| r.eval(z), 4096).unwrap();
        let spec = fourier_coefficients(&samples, 256).unwrap();

        let exact = r.exact_negative_coefficients(256).unwrap();
        for (k, c) in exact.iter().enumerate() {
            let got = spec.coeff(-(k as i64) - 1);
            assert!((got - c).norm() <= 1e-9, "seed {seed}: f̂(-{}) = {got}, oracle {c}", k + 1);
        }

        let w = winding_number(&samples, relative_tolerance(&samples, tol.min_mod_rel)).unwrap();
        assert_eq!(w.winding, r.exact_winding().unwrap(), "seed {seed}");

        let n = r.interior_pole_count();
        let report = detect_meromorphic(&spec, n, None, &tol).unwrap();
        let truth = r.sorted_interior_poles();
        assert_eq!(report.poles.len(), truth.len(), "seed {seed}");
        for (t, m) in &truth {
            let hit = report
                .poles
                .iter()
                .find(|p| (p.location - t).norm() <= 1e-6)
                .unwrap_or_else(|| panic!("seed {seed}: pole {t} not recovered"));
            assert_eq!(hit.multiplicity, *m, "seed {seed}");
        }
    }
}

fn disc_point(cap: f64) -> impl Strategy<Value = Complex64> {
    (0.0..cap, 0.0..std::f64::consts::TAU).prop_map(move |(r, t): (f64, f64)| Complex64::from_polar(r.sqrt() * cap.sqrt(), t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Scaling f and adding a polynomial leave the pole multiset alone.
    #[test]
    fn poles_ignore_scaling_and_analytic_terms(
        a in disc_point(0.8),
        b in disc_point(0.8),
        scale in 0.01f64..100.0,
        shift in prop::collection::vec(-2.0f64..2.0, 0..5),
    ) {
        prop_assume!((a - b).norm() > 0.15);
        let g = |z: Complex64| {
            let poly: Complex64 = shift.iter().enumerate().map(|(k, &c)| c * z.powi(k as i32)).sum();
            scale * (1.0 / ((z - a) * (z - b)) + poly)
        };
        let s = BoundarySamples::sample(g, 4096).unwrap();
        let spec = fourier_coefficients(&s, 256).unwrap();
        let r = detect_meromorphic(&spec, 2, None, &Tolerances::default()).unwrap();
        prop_assert_eq!(r.verdict, Verdict::ExtendsMeromorphically);
        prop_assert_eq!(r.poles.len(), 2);
        for t in [a, b] {
            prop_assert!(r.poles.iter().any(|p| (p.location - t).norm() < 1e-6 && p.multiplicity == 1));
        }
    }

    // A budget above the pole count returns the same multiset.
    #[test]
    fn extra_budget_is_harmless(a in disc_point(0.7), extra in 1usize..5) {
        let s = BoundarySamples::sample(|z| (z - a).powi(-2), 4096).unwrap();
        let spec = fourier_coefficients(&s, 256).unwrap();
        let r = detect_meromorphic(&spec, 2 + extra, None, &Tolerances::default()).unwrap();
        prop_assert_eq!(r.poles.len(), 1);
        prop_assert_eq!(r.poles[0].multiplicity, 2);
        prop_assert!((r.poles[0].location - a).norm() < 1e-6);
    }
}
