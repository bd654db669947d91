use pinchlab::error::Error;
use pinchlab::flow::{exact_sphere_radius, run, step, trace_from_frames, FlowConfig, FlowState, StopReason};
use pinchlab::scenarios::{generate, ScenarioSpec};

fn config(stop_time: f64, sample_interval: f64) -> FlowConfig {
    FlowConfig {
        stop_time,
        sample_interval,
        contacts: false,
        ..FlowConfig::default()
    }
}

#[test]
fn shrinking_circle_follows_the_exact_radius() {
    let trace = run(generate(&ScenarioSpec::Circle { radius: 1.0, n: 256 }).unwrap(), &config(0.3, 0.05)).unwrap();
    assert_eq!(trace.stop, StopReason::StopTime);
    assert!((trace.last().t - 0.3).abs() < 1e-12);
    for s in &trace.samples {
        let r = (1.0 - 2.0 * s.t).sqrt();
        for p in s.surface.points() {
            assert!((p.norm() - r).abs() < 1e-3 * r);
        }
    }
}

#[test]
fn sphere_radius_and_extinction() {
    assert_eq!(exact_sphere_radius(1.0, 2, 0.125).unwrap(), 0.5f64.sqrt());
    assert!(matches!(exact_sphere_radius(1.0, 2, 0.3), Err(Error::ExtinctionPassed { .. })));
    let trace = run(generate(&ScenarioSpec::Sphere { radius: 1.0, n: 65 }).unwrap(), &config(0.1, 0.05)).unwrap();
    let r = exact_sphere_radius(1.0, 2, trace.last().t).unwrap();
    for p in trace.last().surface.points() {
        assert!((p.norm() - r).abs() < 5e-3 * r);
    }
}

#[test]
fn curvature_limit_stops_the_dumbbell() {
    let cfg = FlowConfig {
        stop_h_max: 12.0,
        sample_interval: 0.005,
        ..FlowConfig::default()
    };
    let trace = run(
        generate(&ScenarioSpec::Dumbbell {
            bell: 1.0,
            neck: 0.2,
            n: 100,
        })
        .unwrap(),
        &cfg,
    )
    .unwrap();
    assert!(matches!(trace.stop, StopReason::CurvatureLimit { h_max } if h_max >= 12.0));
    assert!(trace.samples.iter().all(|s| s.mu.is_some() && s.rho.is_some()));
    assert!(trace.extrema.h_max >= 12.0);
}

#[test]
fn oversized_steps_are_rejected() {
    let state = FlowState::new(generate(&ScenarioSpec::Circle { radius: 1.0, n: 64 }).unwrap()).unwrap();
    let dt = state.stable_dt(0.5);
    assert!(step(&state, 0.99 * dt, 0.5).is_ok());
    assert!(matches!(step(&state, 2.0 * dt, 0.5), Err(Error::CflViolation { .. })));
    let cfg = FlowConfig {
        dt_multiplier: 2.0,
        ..config(0.1, 0.05)
    };
    let err = run(generate(&ScenarioSpec::Circle { radius: 1.0, n: 64 }).unwrap(), &cfg).unwrap_err();
    assert!(matches!(err, Error::CflViolation { .. }));
}

#[test]
fn invalid_settings_are_preconditions() {
    let cfg = FlowConfig {
        cfl_factor: 0.9,
        ..FlowConfig::default()
    };
    let s = generate(&ScenarioSpec::Circle { radius: 1.0, n: 64 }).unwrap();
    assert!(matches!(run(s, &cfg), Err(Error::PreconditionViolated(_))));
}

#[test]
fn runs_are_deterministic() {
    let spec = ScenarioSpec::PerturbedCircle {
        radius: 1.0,
        amplitude: 0.1,
        n: 128,
        seed: 11,
    };
    let cfg = FlowConfig {
        stop_time: 0.05,
        ..FlowConfig::default()
    };
    let a = run(generate(&spec).unwrap(), &cfg).unwrap();
    let b = run(generate(&spec).unwrap(), &cfg).unwrap();
    assert_eq!(a.samples.len(), b.samples.len());
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert_eq!(x.surface, y.surface);
        let (p, q) = (x.mu.as_ref().unwrap(), y.mu.as_ref().unwrap());
        // raw_sup is NaN where the pruned search never evaluates the sup
        assert_eq!(bits(&p.raw_sup), bits(&q.raw_sup));
        assert_eq!(bits(&p.refined), bits(&q.refined));
        assert_eq!(p.contacts, q.contacts);
    }
}

#[test]
fn frames_rebuild_the_same_contacts() {
    let spec = ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 128 };
    let cfg = FlowConfig {
        stop_time: 0.05,
        ..FlowConfig::default()
    };
    let trace = run(generate(&spec).unwrap(), &cfg).unwrap();
    let frames = trace.samples.iter().map(|s| (s.surface.clone(), s.t)).collect();
    let again = trace_from_frames(frames, None).unwrap();
    assert_eq!(again.stop, StopReason::Reloaded);
    for (x, y) in trace.samples.iter().zip(&again.samples) {
        assert_eq!(x.mu.as_ref().unwrap().values, y.mu.as_ref().unwrap().values);
    }
    assert!(matches!(trace_from_frames(Vec::new(), None), Err(Error::NoSamples)));
}
