//! A dumbbell pinches at its neck; the outer ratio picks up the saddle.

use pinchlab::flow::{run, FlowConfig};
use pinchlab::scenarios::{generate, ScenarioSpec};

fn main() -> pinchlab::error::Result<()> {
    let config = FlowConfig {
        stop_h_max: 12.0,
        sample_interval: 0.002,
        ..FlowConfig::default()
    };
    let spec = ScenarioSpec::Dumbbell {
        bell: 1.0,
        neck: 0.2,
        n: 200,
    };
    let trace = run(generate(&spec)?, &config)?;
    println!("{:>7} {:>8} {:>8} {:>9} {:>9}", "t", "H_max", "neck r", "max mu/H", "max rho/H");
    for s in trace.samples.iter().step_by(2) {
        let neck = s.surface.points().iter().filter(|p| p.y.abs() < 0.3).map(|p| p.x).fold(f64::INFINITY, f64::min);
        let h = &s.geometry.mean_curvature;
        let ratio = |v: &[f64]| v.iter().zip(h).map(|(a, b)| a / b).fold(f64::NEG_INFINITY, f64::max);
        let (mu, rho) = (s.mu.as_ref().unwrap(), s.rho.as_ref().unwrap());
        println!("{:7.4} {:8.3} {neck:8.4} {:9.4} {:9.4}", s.t, s.h_max(), ratio(&mu.refined), ratio(&rho.refined));
    }
    println!("stopped on {}", trace.stop);
    Ok(())
}
