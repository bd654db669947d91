//! A circle under curve shortening flow against R(t) = sqrt(1 - 2t).

use pinchlab::flow::{run, FlowConfig};
use pinchlab::scenarios::{generate, ScenarioSpec};

fn main() -> pinchlab::error::Result<()> {
    let config = FlowConfig {
        stop_time: 0.4,
        sample_interval: 0.05,
        contacts: false,
        ..FlowConfig::default()
    };
    let trace = run(generate(&ScenarioSpec::Circle { radius: 1.0, n: 256 })?, &config)?;
    println!("{:>6} {:>12} {:>12} {:>10}", "t", "mean radius", "exact", "rel err");
    for s in &trace.samples {
        let pts = s.surface.points();
        let mean = pts.iter().map(|p| p.norm()).sum::<f64>() / pts.len() as f64;
        let exact = (1.0 - 2.0 * s.t).sqrt();
        println!("{:6.3} {mean:12.8} {exact:12.8} {:10.2e}", s.t, (mean - exact).abs() / exact);
    }
    println!("{} steps, stopped on {}", trace.steps, trace.stop);
    Ok(())
}
