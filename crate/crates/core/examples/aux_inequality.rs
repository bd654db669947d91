//! The integrated auxiliary inequality for bump test functions on an ellipse.

use pinchlab::estimates::{aux_integral_check, extract_constants, support_mask, EstimateParams};
use pinchlab::flow::trace_from_frames;
use pinchlab::geometry::build_geometry;
use pinchlab::inradius::mu_fast;
use pinchlab::scenarios::{generate, ScenarioSpec};

fn main() -> pinchlab::error::Result<()> {
    let n = 512;
    let surface = generate(&ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n })?;
    let geometry = build_geometry(&surface)?;
    let mu = mu_fast(&surface, &geometry)?;
    let trace = trace_from_frames(vec![(surface.clone(), 0.0)], None)?;
    let constants = extract_constants(&trace, &EstimateParams::new(0.1, 0.02, 10.0))?;
    let mask = support_mask(&mu, &geometry);
    println!("{} of {n} vertices have an interior contact", mask.iter().filter(|m| **m).count());

    let centre = geometry.arclength[n / 4];
    for radius in [0.25, 0.5, 1.0] {
        let eta: Vec<f64> = geometry
            .arclength
            .iter()
            .map(|s| {
                let x = (s - centre).abs() / radius;
                if x < 1.0 { (1.0 - x * x).powi(2) } else { 0.0 }
            })
            .collect();
        let a = aux_integral_check(&surface, &geometry, &mu, &constants, &eta)?;
        println!("bump radius {radius}: slack {:+.4e}, terms {:?}", a.slack, a.terms);
    }
    Ok(())
}
