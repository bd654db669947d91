use pinchlab::error::Error;
use pinchlab::estimates::{
    aux_integral_check, check_admissible, default_levels, extract_constants, fit_c_hat, gronwall_check,
    levelset_monitor, lp_monitor, mu_evolution_residual, pinch_fields, pinch_value, support_mask, theorem_witness,
    Constant, EstimateParams, Provenance,
};
use pinchlab::flow::{run, trace_from_frames, FlowConfig, FlowTrace};
use pinchlab::geometry::build_geometry;
use pinchlab::inradius::{mu_fast, Side};
use pinchlab::scenarios::{generate, ScenarioSpec};
use proptest::prelude::*;
use std::sync::OnceLock;

fn flow(spec: &ScenarioSpec, stop_time: f64, dt: f64) -> FlowTrace {
    let cfg = FlowConfig {
        stop_time,
        sample_interval: dt,
        ..FlowConfig::default()
    };
    run(generate(spec).unwrap(), &cfg).unwrap()
}

fn wobbly() -> &'static FlowTrace {
    static TRACE: OnceLock<FlowTrace> = OnceLock::new();
    TRACE.get_or_init(|| {
        flow(
            &ScenarioSpec::PerturbedCircle {
                radius: 1.0,
                amplitude: 0.15,
                n: 256,
                seed: 1,
            },
            0.1,
            0.005,
        )
    })
}

fn params() -> EstimateParams {
    EstimateParams::new(0.1, 0.02, 10.0)
}

#[test]
fn circle_constants_are_closed_form() {
    let trace = flow(&ScenarioSpec::Circle { radius: 1.0, n: 128 }, 0.1, 0.05);
    let c = extract_constants(&trace, &params()).unwrap();
    assert_eq!(c.k0.value, 0.0);
    assert_eq!(c.k1.value, 0.0);
    assert_eq!(c.k2.value, 0.0);
    assert!((c.lambda.value - 1.0).abs() < 1e-9);
    // ε = δ / (4 n^4 Λ^2) with n = Λ = 1
    assert!((c.epsilon.value - 0.025).abs() < 1e-9);
    assert_eq!(c.epsilon.provenance, Provenance::Extracted);
    // sup(μ - (1 + 2δ) H) is attained at t = 0 where H = 1
    assert!((c.b_hat.value + 0.2).abs() < 1e-6);
    assert_eq!(c.level.value, c.k0.value);
    let block = c.to_block();
    assert!(block.starts_with("n = 1"));
    assert!(block.contains("K0_rho") && block.contains("# extracted"));
}

#[test]
fn sphere_constants() {
    let trace = flow(&ScenarioSpec::Sphere { radius: 1.0, n: 65 }, 0.05, 0.025);
    let mut p = params();
    p.epsilon = Some(1e-3);
    let c = extract_constants(&trace, &p).unwrap();
    assert_eq!(c.dimension, 2);
    assert_eq!(c.k0.value, 0.0);
    assert!((c.lambda.value - 1.0).abs() < 1e-2);
    assert_eq!(c.epsilon.provenance, Provenance::Configured);
    let lp = lp_monitor(&trace, &c, Side::Mu).unwrap();
    assert!(lp.is_vacuous());
    assert_eq!(lp.pass_fraction(), 1.0);
}

#[test]
fn dumbbell_neck_raises_the_offset() {
    let cfg = FlowConfig {
        stop_time: 0.004,
        sample_interval: 0.002,
        ..FlowConfig::default()
    };
    let spec = ScenarioSpec::Dumbbell {
        bell: 1.0,
        neck: 0.2,
        n: 100,
    };
    let trace = run(generate(&spec).unwrap(), &cfg).unwrap();
    let c = extract_constants(&trace, &params()).unwrap();
    let mut expected: f64 = 0.0;
    for s in &trace.samples {
        let g = &s.geometry;
        for i in 0..g.len() {
            let h = g.mean_curvature[i];
            expected = expected.max((-g.lambda_min(i) - 0.05 * h) / h.min(1.0));
        }
    }
    assert!(expected > 0.5);
    assert!((c.k0.value - expected).abs() < 1e-12);
    // n - 1 = 1 for surfaces, so both offsets agree
    assert_eq!(c.k0.value, c.k0_rho.value);
    let f = pinch_fields(&trace.samples[0].geometry, trace.samples[0].mu.as_ref().unwrap(), &c, Side::Mu).unwrap();
    assert!(f.f_plus.iter().all(|v| *v == 0.0));
}

#[test]
fn admissibility_window() {
    assert!(check_admissible(0.02, 10.0, 0.5).is_ok());
    assert!(check_admissible(0.05, 2.0, 0.5).is_ok());
    let e = check_admissible(0.4, 100.0, 0.5).unwrap_err().to_string();
    assert!(e.contains("sigma <= c0 p^(-1/2)"), "{e}");
    let e = check_admissible(0.01, 1.5, 0.5).unwrap_err().to_string();
    assert!(e.contains("p >= 1/c0"), "{e}");
    let mut p = params();
    p.sigma = 0.6;
    assert!(p.validate().is_err());
}

#[test]
fn fitted_growth_constant_covers_every_sample() {
    let trace = wobbly();
    let c = extract_constants(trace, &params()).unwrap();
    let c_hat = fit_c_hat(trace, &c).unwrap();
    assert!(c_hat >= 0.0 && c_hat.is_finite());
    let frozen = c.with_c_hat(Constant::fitted(c_hat));
    let lp = lp_monitor(trace, &frozen, Side::Mu).unwrap();
    assert!(!lp.is_vacuous());
    assert_eq!(lp.c_hat, c_hat);
    assert!(lp.rows.iter().all(|r| r.pass), "{:?}", lp.rows);
}

#[test]
fn integrated_bound_needs_a_growth_constant() {
    let trace = wobbly();
    let c = extract_constants(trace, &params()).unwrap();
    assert!(matches!(gronwall_check(trace, &c, Side::Mu), Err(Error::PreconditionViolated(_))));
    let rows = gronwall_check(trace, &c, Side::Rho).unwrap();
    assert_eq!(rows.len(), trace.samples.len());
}

#[test]
fn level_table_rejects_levels_below_the_offset() {
    let trace = wobbly();
    let c = extract_constants(trace, &params()).unwrap();
    assert!(levelset_monitor(trace, &c, Side::Mu, &[]).is_err());
    assert!(levelset_monitor(trace, &c, Side::Mu, &[-1.0]).is_err());
    assert_eq!(default_levels(0.0), vec![0.0]);
    assert_eq!(default_levels(1.5), vec![1.5, 3.0, 6.0, 12.0]);
}

#[test]
fn residual_requires_contacts_and_a_window() {
    let cfg = FlowConfig {
        stop_time: 0.02,
        sample_interval: 0.01,
        contacts: false,
        ..FlowConfig::default()
    };
    let trace = run(generate(&ScenarioSpec::Circle { radius: 1.0, n: 64 }).unwrap(), &cfg).unwrap();
    assert!(matches!(mu_evolution_residual(&trace, 0..3), Err(Error::PreconditionViolated(_))));
    assert!(matches!(
        mu_evolution_residual(wobbly(), 0..2),
        Err(Error::WindowTooShort { got: 2, min: 3 })
    ));
}

#[test]
fn residual_rows_are_flagged_consistently() {
    let report = mu_evolution_residual(wobbly(), 0..wobbly().samples.len()).unwrap();
    assert!(report.eligible_count() > 0);
    for r in &report.rows {
        assert_eq!(r.eligible, r.residual.is_finite(), "{r:?}");
    }
    assert_eq!(report.mask().iter().filter(|m| **m).count(), report.eligible_count());
}

#[test]
fn auxiliary_check_guards_its_inputs() {
    let s = generate(&ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 128 }).unwrap();
    let g = build_geometry(&s).unwrap();
    let mu = mu_fast(&s, &g).unwrap();
    let trace = trace_from_frames(vec![(s.clone(), 0.0)], None).unwrap();
    let c = extract_constants(&trace, &params()).unwrap();
    let mask = support_mask(&mu, &g);
    let outside = mask.iter().position(|m| !m).expect("osculating vertices exist");
    let mut eta = vec![0.0; 128];
    eta[outside] = 1.0;
    assert!(matches!(
        aux_integral_check(&s, &g, &mu, &c, &eta),
        Err(Error::SupportViolation { vertex }) if vertex == outside
    ));
    assert!(matches!(
        aux_integral_check(&s, &g, &mu, &c, &[0.0; 5]),
        Err(Error::FieldLength { got: 5, expected: 128 })
    ));
    let zero = aux_integral_check(&s, &g, &mu, &c, &vec![0.0; 128]).unwrap();
    assert_eq!(zero.slack, 0.0);
}

#[test]
fn witness_rows_cover_both_theorems() {
    let w = theorem_witness(wobbly(), &[0.1, 0.3]).unwrap();
    assert_eq!(w.rows.len(), 4);
    assert!(w.mu_trend.is_monotone() && w.rho_trend.is_monotone());
    // convex flow: no outer ratio anywhere
    assert!(w.rho_trend.s.iter().all(|s| *s == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn offset_and_positive_part(v in 0.0f64..10.0, h in 0.01f64..10.0, d in 0.01f64..1.0, s in 0.001f64..0.5, k in 0.0f64..5.0) {
        for side in [Side::Mu, Side::Rho] {
            let f = pinch_value(side, v, h, d, s, k);
            prop_assert!((f - (pinch_value(side, v, h, d, s, 0.0) - k)).abs() <= 1e-12 * (1.0 + f.abs() + k));
            prop_assert_eq!(f.max(0.0) - (-f).max(0.0), f);
            // f_k <= f_k' for k >= k'
            prop_assert!(pinch_value(side, v, h, d, s, k + 1.0) <= f);
        }
    }

    #[test]
    fn unshifted_pinching_scales_with_curvature(v in 0.1f64..10.0, h in 0.1f64..10.0, d in 0.01f64..1.0, s in 0.001f64..0.5, lambda in 0.1f64..10.0) {
        // μ and H both scale like 1/length
        let a = pinch_value(Side::Mu, v, h, d, s, 0.0);
        let b = pinch_value(Side::Mu, lambda * v, lambda * h, d, s, 0.0);
        prop_assert!((b - lambda.powf(s) * a).abs() <= 1e-10 * (1.0 + a.abs()) * lambda.powf(s));
    }

    #[test]
    fn higher_levels_have_smaller_areas(levels in prop::collection::vec(0.0f64..2.0, 1..6)) {
        let trace = wobbly();
        let c = extract_constants(trace, &params()).unwrap();
        let mut levels = levels;
        levels.sort_by(f64::total_cmp);
        let report = levelset_monitor(trace, &c, Side::Mu, &levels).unwrap();
        prop_assert!(report.is_nested());
        for s in 0..report.samples() {
            for l in 1..levels.len() {
                prop_assert!(report.row(l, s).area <= report.row(l - 1, s).area);
                prop_assert!(report.row(l, s).integral <= report.row(l - 1, s).integral);
            }
        }
    }

    #[test]
    fn quadrature_respects_the_sup_bound(seed in 1u64..500, p in 1.0f64..12.0) {
        let s = generate(&ScenarioSpec::PerturbedCircle { radius: 1.0, amplitude: 0.15, n: 128, seed }).unwrap();
        let g = build_geometry(&s).unwrap();
        let mu = mu_fast(&s, &g).unwrap();
        let trace = trace_from_frames(vec![(s, 0.0)], None).unwrap();
        let c = extract_constants(&trace, &EstimateParams::new(0.01, 0.02, p)).unwrap();
        let f = pinch_fields(&g, &mu, &c, Side::Mu).unwrap();
        let pow = |e: f64| f.f_plus.iter().map(|v| v.powf(e)).collect::<Vec<_>>();
        let sup = f.f_plus.iter().copied().fold(0.0, f64::max).powf(p);
        let lhs = g.integrate(&pow(2.0 * p)).powf(0.5 / p);
        let rhs = (g.integrate(&pow(p)) * sup).powf(0.5 / p);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn trends_are_running_maxima(seed in 1u64..50) {
        let s = generate(&ScenarioSpec::PerturbedCircle { radius: 1.0, amplitude: 0.15, n: 96, seed }).unwrap();
        let trace = trace_from_frames(vec![(s, 0.0)], None).unwrap();
        let w = theorem_witness(&trace, &[0.2]).unwrap();
        prop_assert!(w.mu_trend.is_monotone());
        for k in 1..w.mu_trend.tau.len() {
            prop_assert!(w.mu_trend.tau[k] <= w.mu_trend.tau[k - 1]);
            prop_assert!(w.mu_trend.value_at(w.mu_trend.tau[k]) >= w.mu_trend.value_at(w.mu_trend.tau[k - 1]));
        }
    }
}
