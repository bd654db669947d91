//! A small sweep built in code: two scenarios across a (delta, sigma, p) grid.

use pinchlab::cli::config::{EstimateGrid, OutputConfig, SweepConfig};
use pinchlab::cli::sweep;
use pinchlab::flow::FlowConfig;
use pinchlab::scenarios::ScenarioSpec;
use std::path::Path;

fn main() -> pinchlab::error::Result<()> {
    let config = SweepConfig {
        scenarios: vec![
            ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 128 },
            ScenarioSpec::Sphere { radius: 1.0, n: 33 },
        ],
        flow: FlowConfig {
            stop_time: 0.03,
            sample_interval: 0.01,
            ..FlowConfig::default()
        },
        estimates: EstimateGrid {
            deltas: vec![0.1],
            sigmas: vec![0.02, 0.4],
            ps: vec![10.0],
            ..EstimateGrid::default()
        },
        output: OutputConfig {
            dir: std::env::temp_dir().join("pinchlab-sweep-example"),
            plots: false,
            ..OutputConfig::default()
        },
    };
    println!("{}", toml::to_string(&config).expect("serializes"));
    for cell in sweep(&config, Path::new("<in memory>"))? {
        println!("{:<36} {:?}", cell.name, cell.status);
    }
    println!("aggregate tables in {}", config.output.dir.display());
    Ok(())
}
