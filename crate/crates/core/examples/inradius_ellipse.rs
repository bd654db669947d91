//! Inscribed radius of a 2:1 ellipse, with contacts and reflection defects.

use pinchlab::geometry::build_geometry;
use pinchlab::inradius::{mu_fast, rho};
use pinchlab::scenarios::{analytic_values, generate, ScenarioSpec};

fn main() -> pinchlab::error::Result<()> {
    let spec = ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 1024 };
    let surface = generate(&spec)?;
    let geometry = build_geometry(&surface)?;
    let mu = mu_fast(&surface, &geometry)?;
    for v in analytic_values(&spec)? {
        println!("oracle {:<16} = {:.6}  ({})", v.name, v.value, v.note);
    }
    for i in [0, 128, 256, 384, 512] {
        println!(
            "vertex {i:4}: H = {:.4} mu = {:.6} contact {:?} defect {:?}",
            geometry.mean_curvature[i], mu.values[i], mu.contacts[i], mu.reflection_defect[i]
        );
    }
    let outer = rho(&surface, &geometry)?;
    println!("max rho on a convex curve: {}", outer.max_value());
    Ok(())
}
