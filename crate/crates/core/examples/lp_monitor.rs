//! Constants, the L^p growth bound and its integrated form on a wobbly curve.

use pinchlab::estimates::{extract_constants, fit_c_hat, gronwall_check, lp_monitor, Constant, EstimateParams};
use pinchlab::flow::{run, FlowConfig};
use pinchlab::inradius::Side;
use pinchlab::scenarios::{generate, ScenarioSpec};

fn main() -> pinchlab::error::Result<()> {
    let spec = ScenarioSpec::PerturbedCircle {
        radius: 1.0,
        amplitude: 0.15,
        n: 256,
        seed: 1,
    };
    let config = FlowConfig {
        stop_time: 0.1,
        sample_interval: 0.01,
        ..FlowConfig::default()
    };
    let trace = run(generate(&spec)?, &config)?;
    let constants = extract_constants(&trace, &EstimateParams::new(0.01, 0.02, 10.0))?;
    let c_hat = fit_c_hat(&trace, &constants)?;
    let constants = constants.with_c_hat(Constant::fitted(c_hat));
    print!("{}", constants.to_block());

    let lp = lp_monitor(&trace, &constants, Side::Mu)?;
    for r in &lp.rows {
        println!("t = {:.2}  int f+^p = {:.3e}  d/dt = {:+.3e}  bound = {:+.3e}  {}", r.t, r.integral, r.ddt, r.rhs, r.pass);
    }
    let integrated = gronwall_check(&trace, &constants, Side::Mu)?;
    let held = integrated.iter().filter(|r| r.pass).count();
    println!("integrated bound holds at {held} of {} samples", integrated.len());
    Ok(())
}
