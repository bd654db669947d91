//! Superlevel sets of the shifted pinching function shrink as the level rises.

use pinchlab::estimates::{extract_constants, levelset_monitor, EstimateParams};
use pinchlab::flow::{run, FlowConfig};
use pinchlab::inradius::Side;
use pinchlab::scenarios::{generate, ScenarioSpec};

fn main() -> pinchlab::error::Result<()> {
    let spec = ScenarioSpec::PerturbedCircle {
        radius: 1.0,
        amplitude: 0.2,
        n: 256,
        seed: 4,
    };
    let config = FlowConfig {
        stop_time: 0.05,
        sample_interval: 0.01,
        ..FlowConfig::default()
    };
    let trace = run(generate(&spec)?, &config)?;
    let constants = extract_constants(&trace, &EstimateParams::new(0.01, 0.02, 4.0))?;
    let levels = [0.0, 0.05, 0.1, 0.2];
    let table = levelset_monitor(&trace, &constants, Side::Mu, &levels)?;
    print!("{:>6}", "t");
    for k in levels {
        print!(" {:>10}", format!("A(k={k})"));
    }
    println!();
    for s in 0..table.samples() {
        print!("{:6.3}", table.row(0, s).t);
        for l in 0..levels.len() {
            print!(" {:10.4}", table.row(l, s).area);
        }
        println!();
    }
    println!("nested: {}, smallest vanishing level: {:?}", table.is_nested(), table.k_star);
    Ok(())
}
