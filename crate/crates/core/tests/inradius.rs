use pinchlab::error::Error;
use pinchlab::geometry::{build_geometry, Point};
use pinchlab::inradius::{mu_brute, mu_brute_with, mu_fast, mu_fast_with, rho, Contact, SearchOptions};
use pinchlab::scenarios::{analytic_values, generate, ScenarioSpec};
use proptest::prelude::*;

fn oracle(spec: &ScenarioSpec, name: &str) -> f64 {
    analytic_values(spec).unwrap().into_iter().find(|v| v.name == name).unwrap().value
}

#[test]
fn ellipse_vertices_match_the_inscribed_circle() {
    let spec = ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 4096 };
    let s = generate(&spec).unwrap();
    let g = build_geometry(&s).unwrap();
    let r = mu_fast(&s, &g).unwrap();
    // minor vertex: unit circle touching (0, -1)
    assert!((r.values[1024] - oracle(&spec, "mu_minor_vertex")).abs() < 1e-2);
    assert_eq!(r.contacts[1024].index(), Some(3072));
    // major vertex: the osculating circle fits inside
    assert!((r.values[0] - oracle(&spec, "mu_major_vertex")).abs() < 1e-2);
    assert_eq!(r.contacts[0], Contact::Osculating);
}

#[test]
fn sphere_inscribed_radius_is_the_radius() {
    let s = generate(&ScenarioSpec::Sphere { radius: 1.0, n: 65 }).unwrap();
    let g = build_geometry(&s).unwrap();
    let r = mu_fast(&s, &g).unwrap();
    for i in 0..s.len() {
        assert!((r.values[i] - 1.0).abs() < 1e-2);
        assert!((r.values[i] / g.mean_curvature[i] - 0.5).abs() < 1e-2);
    }
}

#[test]
fn attained_pairs_have_zero_two_point_function() {
    let s = generate(&ScenarioSpec::Ellipse { a: 1.5, b: 1.0, n: 256 }).unwrap();
    let g = build_geometry(&s).unwrap();
    let r = mu_brute(&s, &g).unwrap();
    for (i, z) in r.z_residual.iter().enumerate() {
        assert!(z.abs() < 1e-12, "vertex {i}: Z = {z:e}");
        assert!(r.values[i] >= r.lambda_n[i]);
    }
}

#[test]
fn outer_ratio_vanishes_on_convex_shapes() {
    for spec in [
        ScenarioSpec::Ellipse { a: 3.0, b: 1.0, n: 300 },
        ScenarioSpec::PerturbedSphere {
            radius: 1.0,
            amplitude: 0.05,
            n: 49,
            seed: 2,
        },
    ] {
        let s = generate(&spec).unwrap();
        let r = rho(&s, &build_geometry(&s).unwrap()).unwrap();
        assert!(r.values.iter().all(|v| *v == 0.0));
        assert!(r.contacts.iter().all(|c| *c == Contact::Clamped));
    }
}

#[test]
fn dumbbell_neck_has_positive_outer_ratio() {
    let s = generate(&ScenarioSpec::Dumbbell {
        bell: 1.0,
        neck: 0.2,
        n: 200,
    })
    .unwrap();
    let g = build_geometry(&s).unwrap();
    let r = rho(&s, &g).unwrap();
    let neck: Vec<usize> = (0..s.len()).filter(|&i| g.lambda_min(i) < 0.0).collect();
    assert!(!neck.is_empty());
    for i in neck {
        assert!(r.values[i] > 0.0);
        assert!(r.values[i] >= -g.lambda_min(i) - 1e-2 * g.mean_curvature[i]);
    }
}

#[test]
fn coarse_azimuths_are_rejected() {
    let s = generate(&ScenarioSpec::Sphere { radius: 1.0, n: 33 }).unwrap();
    let g = build_geometry(&s).unwrap();
    let opts = SearchOptions {
        azimuths: Some(8),
        previous: None,
    };
    assert!(matches!(mu_brute_with(&s, &g, opts), Err(Error::ResolutionTooLow { got: 8, min: 16 })));
}

#[test]
fn previous_contacts_only_seed_the_search() {
    let s = generate(&ScenarioSpec::PerturbedCircle {
        radius: 1.0,
        amplitude: 0.15,
        n: 512,
        seed: 5,
    })
    .unwrap();
    let g = build_geometry(&s).unwrap();
    let plain = mu_fast(&s, &g).unwrap();
    let other = generate(&ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 512 }).unwrap();
    let stale = mu_fast(&other, &build_geometry(&other).unwrap()).unwrap();
    let seeded = mu_fast_with(
        &s,
        &g,
        SearchOptions {
            azimuths: None,
            previous: Some(&stale),
        },
    )
    .unwrap();
    assert_eq!(plain.values, seeded.values);
    assert_eq!(plain.contacts, seeded.contacts);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fast_matches_brute(seed in 1u64..10_000, n in 32usize..400, amplitude in 0.0f64..0.2) {
        let s = generate(&ScenarioSpec::PerturbedCircle { radius: 1.0, amplitude, n, seed }).unwrap();
        let g = build_geometry(&s).unwrap();
        let (f, b) = (mu_fast(&s, &g).unwrap(), mu_brute(&s, &g).unwrap());
        prop_assert_eq!(&f.contacts, &b.contacts);
        for i in 0..n {
            prop_assert!((f.values[i] - b.values[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn inscribed_ratio_scales_inversely(scale in 0.25f64..4.0, seed in 1u64..100) {
        let s = generate(&ScenarioSpec::PerturbedCircle { radius: 1.0, amplitude: 0.1, n: 128, seed }).unwrap();
        let t = s.transformed(scale, 0.7, Point::new(2.0, 1.0)).unwrap();
        let a = mu_fast(&s, &build_geometry(&s).unwrap()).unwrap();
        let b = mu_fast(&t, &build_geometry(&t).unwrap()).unwrap();
        for i in 0..s.len() {
            prop_assert!((b.values[i] * scale - a.values[i]).abs() <= 1e-8 * a.values[i]);
        }
    }
}
