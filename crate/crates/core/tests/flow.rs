use conestab::flow::{
    choose_constants, picard_fixed_point, project_to_manifold, restart_flow, run_flow, FlowConfig,
    RestartOptions, SurrogateSystem, Tier,
};
use nalgebra::DVector;
use proptest::prelude::*;

#[test]
fn constants_for_reference_case() {
    let k = choose_constants(4, 1.0, 1.0, 1.0).unwrap();
    assert_eq!(k.mu, 2f64.powi(-6));
    assert_eq!(k.epsilon, 2f64.powi(-7));
    assert_eq!(k.t, 4.0);
    assert!(k.c * (-k.alpha * k.t).exp() < 1.0 / 8.0);
    assert!(k.contraction_factor() < 1.0);
}

#[test]
fn tier_a_bound_columns_and_geometric_tail() {
    let trace = run_flow(&FlowConfig {
        min_legs: 11,
        ..FlowConfig::default()
    })
    .unwrap();
    assert!(trace.passed(), "{:?}", trace.violations);
    let eps = trace.constants.epsilon;
    for r in trace.records.iter().take(11) {
        assert!(r.dist_g_to_pi <= eps * 0.5f64.powi(r.k as i32) + 1e-14);
    }
    // Partial sums of the projected steps against the summed geometric series.
    let total: f64 = trace.records.iter().map(|r| r.dist_pi_step).sum();
    assert!(total <= eps * 0.25 / (1.0 - 0.5));
    assert!(trace.limit_dist_to_h0 <= trace.r);
}

#[test]
fn linear_tier_a_matches_semigroup() {
    let config = FlowConfig {
        zero_quadratic: true,
        min_legs: 5,
        ..FlowConfig::default()
    };
    let trace = run_flow(&config).unwrap();
    let d0 = trace.records[0].dist_g_to_pi;
    for r in &trace.records {
        let want = (-trace.constants.alpha * r.k as f64 * trace.constants.t).exp() * d0;
        assert!((r.dist_g_to_pi - want).abs() <= 1e-15 + 1e-12 * want);
    }
}

#[test]
fn seed_is_recorded_and_reproducible() {
    let config = FlowConfig {
        tier: Tier::B,
        c: 1.2,
        seed: 99,
        ..FlowConfig::default()
    };
    let a = run_flow(&config).unwrap();
    let b = run_flow(&config).unwrap();
    assert_eq!(a.seed, 99);
    assert_eq!(a.to_tsv(), b.to_tsv());
}

#[test]
fn tier_b_rejects_undersized_c() {
    // The curved projection has sampled Lipschitz constant above 1.
    let config = FlowConfig {
        tier: Tier::B,
        c: 1.0,
        ..FlowConfig::default()
    };
    assert!(run_flow(&config).is_err());
}

#[test]
fn invalid_configs() {
    for config in [
        FlowConfig {
            kernel_dim: 0,
            ..FlowConfig::default()
        },
        FlowConfig {
            c: 0.5,
            ..FlowConfig::default()
        },
        FlowConfig {
            n: 1,
            ..FlowConfig::default()
        },
        FlowConfig {
            time_steps: 10,
            ..FlowConfig::default()
        },
        FlowConfig {
            r: Some(-1.0),
            ..FlowConfig::default()
        },
    ] {
        assert!(run_flow(&config).is_err(), "{config:?}");
    }
}

#[test]
fn zero_data_trace() {
    let s = SurrogateSystem::build(&FlowConfig::default()).unwrap();
    let trace = restart_flow(&s, &s.chart.h0, 4, 0.1, RestartOptions::default()).unwrap();
    assert!(trace
        .records
        .iter()
        .all(|r| r.dist_g_to_pi == 0.0 && r.dist_step == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tier_a_passes_for_any_seed(seed in any::<u64>()) {
        let trace = run_flow(&FlowConfig { seed, min_legs: 11, ..FlowConfig::default() }).unwrap();
        prop_assert!(trace.passed(), "{:?}", trace.violations);
        prop_assert!(trace.geometric_ratio() <= 0.51);
        prop_assert!(trace.records.iter().all(|r| r.dist_step <= r.dist_g_to_pi / 4.0 + 1e-14));
    }

    #[test]
    fn projection_idempotent(seed in any::<u64>(), a in -0.02f64..0.02, b in -0.02f64..0.02) {
        let s = SurrogateSystem::build(&FlowConfig { tier: Tier::B, c: 1.2, seed, ..FlowConfig::default() }).unwrap();
        let h = s.chart.point(&DVector::from_vec(vec![a, b]));
        let p = project_to_manifold(&s, &h).unwrap();
        prop_assert!((&p.point - &h).norm() <= 1e-12);
        let again = project_to_manifold(&s, &p.point).unwrap();
        prop_assert!((again.point - p.point).norm() <= 1e-12);
    }

    #[test]
    fn quadratic_bounds_hold(seed in any::<u64>()) {
        let s = SurrogateSystem::build(&FlowConfig { seed, ..FlowConfig::default() }).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        prop_assert!(s.quadratic.verify(2000, &mut rng).is_ok());
    }

    #[test]
    fn picard_contracts(seed in any::<u64>(), frac in 0.0f64..1.0) {
        let s = SurrogateSystem::build(&FlowConfig { seed, ..FlowConfig::default() }).unwrap();
        let k = choose_constants(4, 1.0, 1.0, 1.0).unwrap();
        let g = s.chart.complement.column(1) * (frac * k.epsilon);
        let sol = picard_fixed_point(&s, &s.semigroup, &g.into_owned(), k.t, k.mu, 64).unwrap();
        prop_assert!(sol.max_ratio() <= sol.contraction_factor + 0.05);
        prop_assert!(sol.sup_norm <= k.mu);
    }
}
