//! A round sphere as a surface of revolution shrinks like sqrt(1 - 4t).

use pinchlab::flow::{exact_sphere_radius, run, FlowConfig};
use pinchlab::scenarios::{generate, ScenarioSpec};

fn main() -> pinchlab::error::Result<()> {
    let config = FlowConfig {
        stop_time: 0.2,
        sample_interval: 0.04,
        ..FlowConfig::default()
    };
    let trace = run(generate(&ScenarioSpec::Sphere { radius: 1.0, n: 65 })?, &config)?;
    for s in &trace.samples {
        let r = exact_sphere_radius(1.0, 2, s.t)?;
        let worst = s.surface.points().iter().map(|p| (p.norm() - r).abs() / r).fold(0.0, f64::max);
        let mu = s.mu.as_ref().map_or(f64::NAN, |m| m.max_value());
        // μ/H should stay at 1/2 on a sphere
        println!("t = {:.3}  R = {r:.5}  radius err {worst:.1e}  mu/H = {:.4}", s.t, mu / s.geometry.max_mean_curvature());
    }
    Ok(())
}
