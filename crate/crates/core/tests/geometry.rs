use approx::assert_relative_eq;
use pinchlab::error::Error;
use pinchlab::geometry::io::{format_surface, parse_frame, parse_surface};
use pinchlab::geometry::{build_geometry, resample, resample_to_count, AxiSymSurface, PlaneCurve, Point, Surface};
use pinchlab::scenarios::{generate, ScenarioSpec};
use proptest::prelude::*;
use std::f64::consts::PI;

fn circle(r: f64, n: usize) -> Surface {
    generate(&ScenarioSpec::Circle { radius: r, n }).unwrap()
}

#[test]
fn circle_has_unit_curvature_to_second_order() {
    let err = |n| {
        let g = build_geometry(&circle(1.0, n)).unwrap();
        g.mean_curvature.iter().map(|h| (h - 1.0).abs()).fold(0.0, f64::max)
    };
    // circumscribed circles of a regular polygon are the circle itself
    assert!(err(64) < 1e-12);
}

#[test]
fn sphere_mean_curvature_is_two() {
    let s = generate(&ScenarioSpec::Sphere { radius: 1.0, n: 129 }).unwrap();
    let g = build_geometry(&s).unwrap();
    for i in 0..s.len() {
        assert!((g.mean_curvature[i] - 2.0).abs() < 1e-2, "vertex {i}: {}", g.mean_curvature[i]);
        assert_eq!(g.principal(i).len(), 2);
    }
    assert_relative_eq!(g.total_measure(), 4.0 * PI, max_relative = 1e-3);
}

#[test]
fn ellipse_curvature_extremes() {
    let s = generate(&ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 1024 }).unwrap();
    let g = build_geometry(&s).unwrap();
    // a/b^2 at the ends of the major axis, b/a^2 at the minor axis
    assert_relative_eq!(g.mean_curvature[0], 2.0, max_relative = 1e-3);
    assert_relative_eq!(g.mean_curvature[256], 0.25, max_relative = 1e-3);
}

#[test]
fn clockwise_and_short_curves_are_rejected() {
    let mut pts: Vec<Point> = circle(1.0, 16).points().to_vec();
    pts.reverse();
    assert!(matches!(PlaneCurve::new(pts), Err(Error::InvalidSurface(_))));
    let few: Vec<Point> = circle(1.0, 16).points()[..5].to_vec();
    assert!(PlaneCurve::new(few).is_err());
}

#[test]
fn profile_endpoints_must_lie_on_axis() {
    let mut p: Vec<Point> = (0..9)
        .map(|k| {
            let th = PI * k as f64 / 8.0;
            Point::new(th.sin(), -th.cos())
        })
        .collect();
    p[0].x = 0.1;
    assert!(AxiSymSurface::new(p).is_err());
}

#[test]
fn duplicate_vertices_are_degenerate() {
    let mut pts: Vec<Point> = circle(1.0, 32).points().to_vec();
    pts[5] = pts[4];
    assert!(matches!(PlaneCurve::new(pts.clone()), Err(Error::InvalidSurface(_))));
    pts[5] = pts[4] + Point::new(0.0, 1e-15);
    let s = Surface::Curve(PlaneCurve::new(pts).unwrap());
    assert!(matches!(build_geometry(&s), Err(Error::MeshDegenerate { edge: 4, .. })));
}

#[test]
fn resampling_keeps_a_circle_round() {
    let s = resample_to_count(&circle(2.0, 100), 256).unwrap();
    assert_eq!(s.len(), 256);
    for p in s.points() {
        assert!((p.norm() - 2.0).abs() < 1e-6);
    }
    let fine = resample(&circle(1.0, 64), 0.05).unwrap();
    assert!(fine.len() >= 120);
    assert!(matches!(resample(&circle(1.0, 64), 1.0), Err(Error::ResampleTooCoarse { .. })));
}

#[test]
fn exchange_format_round_trips_exactly() {
    for spec in [
        ScenarioSpec::PerturbedCircle {
            radius: 1.0,
            amplitude: 0.1,
            n: 64,
            seed: 9,
        },
        ScenarioSpec::Dumbbell {
            bell: 1.0,
            neck: 0.2,
            n: 100,
        },
    ] {
        let s = generate(&spec).unwrap();
        let text = format_surface(&s, Some(0.125));
        let (back, t) = parse_frame(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(t, Some(0.125));
        assert_eq!(parse_surface(&text).unwrap(), s);
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse_surface("curve\n1 0\n0 1\nnot a number\n").unwrap_err();
    match err {
        Error::Parse { line, .. } => assert_eq!(line, 4),
        other => panic!("unexpected {other}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curvature_scales_inversely(scale in 0.2f64..5.0, angle in 0.0f64..6.0, seed in 1u64..50) {
        let s = generate(&ScenarioSpec::PerturbedCircle { radius: 1.0, amplitude: 0.1, n: 128, seed }).unwrap();
        let t = s.transformed(scale, angle, Point::new(0.3, -1.0)).unwrap();
        let (g, gt) = (build_geometry(&s).unwrap(), build_geometry(&t).unwrap());
        for i in 0..s.len() {
            prop_assert!((gt.mean_curvature[i] * scale - g.mean_curvature[i]).abs() <= 1e-8 * g.mean_curvature[i].abs().max(1.0));
        }
        prop_assert!((gt.total_measure() - scale * g.total_measure()).abs() < 1e-9 * scale);
    }

    #[test]
    fn weights_sum_to_perimeter(seed in 1u64..200, n in 16usize..300) {
        let s = generate(&ScenarioSpec::PerturbedCircle { radius: 1.0, amplitude: 0.1, n, seed }).unwrap();
        let g = build_geometry(&s).unwrap();
        let Surface::Curve(c) = &s else { unreachable!() };
        prop_assert!((g.weights.iter().sum::<f64>() - c.perimeter()).abs() < 1e-12);
    }
}
