//! Empirical thresholds for the pinching bounds along a neckpinch.

use pinchlab::estimates::theorem_witness;
use pinchlab::flow::{run, FlowConfig};
use pinchlab::scenarios::{generate, ScenarioSpec};

fn main() -> pinchlab::error::Result<()> {
    let config = FlowConfig {
        stop_h_max: 12.0,
        sample_interval: 0.001,
        ..FlowConfig::default()
    };
    let spec = ScenarioSpec::Dumbbell {
        bell: 1.0,
        neck: 0.2,
        n: 200,
    };
    let trace = run(generate(&spec)?, &config)?;
    let table = theorem_witness(&trace, &[0.1, 0.2, 0.3])?;
    for r in &table.rows {
        println!("{:<9} delta = {:.1}: C_hat = {:>9.4}  B_hat = {:+.4}", r.theorem.name(), r.delta, r.c_hat, r.b_hat);
    }
    for (name, trend) in [("mu/H", &table.mu_trend), ("rho/H", &table.rho_trend)] {
        println!(
            "sup {name} over H >= tau: at the top decile {:.4}, nonincreasing: {}",
            trend.top_decile(),
            trend.is_monotone()
        );
    }
    Ok(())
}
