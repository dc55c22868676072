use conestab::radial::{ground_state, hardy_bound, RadialBasis, RadialModel};
use conestab::{
    build_radial_model, friedrichs_eigenvalues, garding_constants, heat_decay_check,
    model_cone_spectrum, CrossSectionSpectrum,
};
use proptest::prelude::*;

// First Bessel zeros, tabulated to 16 digits.
const J0_1: f64 = 2.404825557695773;
const J1_1: f64 = 3.831705970207512;
const J2_1: f64 = 5.135622301840683;
const J1_2: f64 = 7.015586669815619;

fn first(nu: f64, m: usize) -> f64 {
    friedrichs_eigenvalues(&build_radial_model(nu, 0.0, m, 2.0).unwrap(), 1).unwrap()[0]
}

#[test]
fn tabulated_bessel_zeros() {
    for (nu, j) in [(0.0, J0_1), (1.0, J1_1), (2.0, J2_1)] {
        let rel = (first(nu, 2000) - j * j).abs() / (j * j);
        assert!(rel < 1e-6, "nu={nu} rel={rel}");
    }
}

#[test]
fn second_eigenvalue_nu_one() {
    let e = friedrichs_eigenvalues(&build_radial_model(1.0, 0.0, 2000, 2.0).unwrap(), 2).unwrap();
    assert!((e[1] - J1_2 * J1_2).abs() / (J1_2 * J1_2) < 1e-5);
}

#[test]
fn sine_case() {
    let e = first(0.5, 4000);
    assert!((e - std::f64::consts::PI.powi(2)).abs() < 1e-5, "{e}");
}

#[test]
fn both_bases_agree_at_small_root() {
    // ν = 0.4: weighted is the default, hats converge slowly but to the same value.
    let p = 0.4f64 * 0.4 - 0.25;
    let w = friedrichs_eigenvalues(
        &RadialModel::new(p, 0.0, 2000, 2.0, RadialBasis::Weighted).unwrap(),
        1,
    )
    .unwrap()[0];
    let h = friedrichs_eigenvalues(
        &RadialModel::new(p, 0.0, 2000, 2.0, RadialBasis::Hat).unwrap(),
        1,
    )
    .unwrap()[0];
    assert!(h >= w);
    assert!((h - w) / w < 0.05, "{h} {w}");
}

#[test]
fn sub_hardy_potential_is_unbounded() {
    let coarse = ground_state(-0.275, 0.0, 1000, 3.0).unwrap();
    let fine = ground_state(-0.275, 0.0, 4000, 3.0).unwrap();
    assert!(fine < coarse && fine < -1e5, "{coarse} {fine}");
}

#[test]
fn garding_rejects_negative_operator() {
    let m = RadialModel::new(-0.275, 0.0, 2000, 3.0, RadialBasis::Hat).unwrap();
    assert!(garding_constants(&m.stiffness, m.gradient.as_ref().unwrap(), &m.mass, 0).is_err());
}

#[test]
fn hardy_bounds() {
    assert_eq!(hardy_bound(3).unwrap(), 1.0);
    assert_eq!(hardy_bound(5).unwrap(), 0.25);
    assert!(hardy_bound(1).is_err());
}

#[test]
fn sphere_cone_spectrum_is_sorted_with_oracles() {
    let s = CrossSectionSpectrum::round_sphere(4, 4).unwrap();
    let rows = model_cone_spectrum(&s, 3, 2, 800, 2.0).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.windows(2).all(|w| w[0].eigenvalue <= w[1].eigenvalue));
    for r in &rows {
        if let Some(e) = r.rel_error() {
            assert!(e < 1e-4, "{r:?}");
        }
    }
}

#[test]
fn heat_report_on_radial_pencil() {
    let model = build_radial_model(2.0, 0.0, 600, 2.0).unwrap();
    let report = heat_decay_check(&model.pencil(), 0, &[0.01, 0.1]).unwrap();
    assert!(report.passed(), "{:?}", report.violations);
    assert!((report.lambda1 - J2_1 * J2_1).abs() / (J2_1 * J2_1) < 1e-4);
    let tsv = report.to_tsv();
    assert!(tsv.starts_with("t\tnorm\tbound"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigenvalue_increases_with_potential(a in -0.24f64..3.0, b in -0.24f64..3.0) {
        prop_assume!((a - b).abs() > 1e-3);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(ground_state(lo, 0.0, 300, 2.0).unwrap() < ground_state(hi, 0.0, 300, 2.0).unwrap());
    }

    #[test]
    fn deflation_lowers_spectrum(p in 0.0f64..2.0, eps in 0.01f64..0.9) {
        prop_assert!(ground_state(p, eps, 300, 2.0).unwrap() < ground_state(p, 0.0, 300, 2.0).unwrap());
    }

    #[test]
    fn hat_eigenvalues_are_upper_bounds(nu in 0.5f64..4.0) {
        // Conforming Galerkin: refinement never raises the first eigenvalue.
        let coarse = friedrichs_eigenvalues(&RadialModel::new(nu * nu - 0.25, 0.0, 100, 1.0, RadialBasis::Hat).unwrap(), 1).unwrap()[0];
        let fine = friedrichs_eigenvalues(&RadialModel::new(nu * nu - 0.25, 0.0, 200, 1.0, RadialBasis::Hat).unwrap(), 1).unwrap()[0];
        prop_assert!(fine <= coarse * (1.0 + 1e-12));
    }
}
