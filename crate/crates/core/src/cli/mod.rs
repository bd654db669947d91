//! Commands behind the `pinchlab` binary.

pub mod analysis;
pub mod config;
pub mod output;
pub mod svg;
pub mod verify;

use crate::error::{Error, Result};
use crate::flow::{run, trace_from_frames, FlowTrace};
use crate::scenarios::generate;
use analysis::{analyze_trace, Analysis};
use config::{EstimateGrid, OutputConfig, RunConfig, SweepConfig};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MONITOR: i32 = 2;

/// Environment variable capping sweep parallelism.
pub const THREADS_VAR: &str = "PINCHLAB_THREADS";

pub struct RunOutcome {
    pub dir: PathBuf,
    pub trace: FlowTrace,
    pub analysis: Analysis,
    pub failures: Vec<String>,
}

/// Flows the configured scenario, runs every monitor and writes the run
/// directory.
pub fn execute(config: &RunConfig) -> Result<RunOutcome> {
    let mut flow = config.flow.clone();
    flow.contacts = true;
    let trace = run(generate(&config.scenario)?, &flow)?;
    let dir = config.output.dir.clone();
    output::write_flow(&dir, config, &trace)?;
    let analysis = analyze_trace(&trace, &config.estimates)?;
    output::write_analysis(&dir, config, &trace, &analysis)?;
    let failures = analysis.hard_failures();
    Ok(RunOutcome {
        dir,
        trace,
        analysis,
        failures,
    })
}

fn report_failures(failures: &[String]) -> i32 {
    if failures.is_empty() {
        return EXIT_OK;
    }
    for f in failures {
        eprintln!("monitor failure: {f}");
    }
    EXIT_MONITOR
}

pub fn cmd_run(path: &Path) -> Result<i32> {
    let config = RunConfig::load(path)?;
    config.check_admissible(path)?;
    let out = execute(&config)?;
    println!(
        "{} samples, stop: {}; outputs in {}",
        out.trace.samples.len(),
        out.trace.stop,
        out.dir.display()
    );
    Ok(report_failures(&out.failures))
}

/// Recomputes every monitor from the frames of an existing run directory.
pub fn cmd_analyze(dir: &Path) -> Result<i32> {
    let meta = dir.join(output::META_FILE);
    let mut config = RunConfig::load(&meta)?;
    config.output.dir = dir.to_path_buf();
    let trace = trace_from_frames(output::read_frames(dir)?, config.flow.azimuths)?;
    let analysis = analyze_trace(&trace, &config.estimates)?;
    output::write_analysis(dir, &config, &trace, &analysis)?;
    println!("reanalysed {} frames in {}", trace.samples.len(), dir.display());
    Ok(report_failures(&analysis.hard_failures()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Completed,
    MonitorFailure(String),
    Skipped(String),
    Failed(String),
}

impl CellStatus {
    fn parts(&self) -> (&'static str, String) {
        match self {
            CellStatus::Completed => ("completed", String::new()),
            CellStatus::MonitorFailure(m) => ("monitor_failure", m.clone()),
            CellStatus::Skipped(m) => ("skipped", m.clone()),
            CellStatus::Failed(m) => ("failed", m.clone()),
        }
    }
}

pub struct SweepCell {
    pub name: String,
    pub config: RunConfig,
    pub status: CellStatus,
    pub witness: Option<String>,
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Expands a sweep into its run configurations, scenario-major.
pub fn sweep_cells(sweep: &SweepConfig) -> Vec<(String, RunConfig)> {
    let mut out = Vec::new();
    for (k, scenario) in sweep.scenarios.iter().enumerate() {
        for cell in sweep.estimates.cells() {
            let name = format!(
                "{k:02}_{}_d{}_s{}_p{}",
                scenario.kind_name(),
                cell.delta,
                cell.sigma,
                cell.p
            );
            let estimates = EstimateGrid {
                deltas: vec![cell.delta],
                sigmas: vec![cell.sigma],
                ps: vec![cell.p],
                witness_deltas: vec![cell.delta],
                ..sweep.estimates.clone()
            };
            let config = RunConfig {
                scenario: scenario.clone(),
                flow: sweep.flow.clone(),
                estimates,
                output: OutputConfig {
                    dir: sweep.output.dir.join(&name),
                    ..sweep.output.clone()
                },
            };
            out.push((name, config));
        }
    }
    out
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// Runs every cell of a sweep concurrently and writes the aggregate tables.
pub fn sweep(sweep: &SweepConfig, path: &Path) -> Result<Vec<SweepCell>> {
    let cells = sweep_cells(sweep);
    if cells.is_empty() {
        return Err(Error::Config {
            path: path.to_path_buf(),
            message: "empty sweep".into(),
        });
    }
    let work = |(name, config): (String, RunConfig)| -> SweepCell {
        if let Err(e) = config.check_admissible(path) {
            let reason = match e {
                Error::Config { message, .. } => message,
                other => other.to_string(),
            };
            return SweepCell {
                name,
                config,
                status: CellStatus::Skipped(reason),
                witness: None,
            };
        }
        match execute(&config) {
            Ok(out) => SweepCell {
                name,
                status: if out.failures.is_empty() {
                    CellStatus::Completed
                } else {
                    CellStatus::MonitorFailure(out.failures.join("; "))
                },
                witness: Some(output::witness_csv(&out.analysis)),
                config,
            },
            Err(e) => SweepCell {
                name,
                config,
                status: CellStatus::Failed(e.to_string()),
                witness: None,
            },
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::PreconditionViolated(format!("thread pool: {e}")))?;
    let results: Vec<SweepCell> = pool.install(|| cells.into_par_iter().map(work).collect());

    let dir = &sweep.output.dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut witness = String::from("cell,scenario,delta,sigma,p,theorem,C_hat,B_hat\n");
    let mut status = String::from("cell,scenario,delta,sigma,p,status,reason\n");
    for c in &results {
        let e = &c.config.estimates;
        let prefix = format!(
            "{},{},{},{},{}",
            c.name,
            c.config.scenario.kind_name(),
            e.deltas[0],
            e.sigmas[0],
            e.ps[0]
        );
        let (s, reason) = c.status.parts();
        let _ = writeln!(status, "{prefix},{s},{}", quote(&reason));
        if let Some(w) = &c.witness {
            for line in w.lines().skip(1) {
                // drop the delta column, already in the prefix
                let rest = line.split_once(',').map_or(line, |x| x.1);
                let _ = writeln!(witness, "{prefix},{rest}");
            }
        }
    }
    let wp = dir.join("witness.csv");
    std::fs::write(&wp, witness).map_err(|e| Error::io(&wp, e))?;
    let sp = dir.join("status.csv");
    std::fs::write(&sp, status).map_err(|e| Error::io(&sp, e))?;
    Ok(results)
}

pub fn cmd_sweep(path: &Path) -> Result<i32> {
    let config = SweepConfig::load(path)?;
    let cells = sweep(&config, path)?;
    let mut code = EXIT_OK;
    for c in &cells {
        let (s, reason) = c.status.parts();
        if reason.is_empty() {
            println!("{:<40} {s}", c.name);
        } else {
            println!("{:<40} {s}: {reason}", c.name);
        }
        if matches!(c.status, CellStatus::MonitorFailure(_) | CellStatus::Failed(_)) {
            code = EXIT_MONITOR;
        }
    }
    Ok(code)
}

pub fn cmd_verify(only: &[String], fault: verify::Fault) -> i32 {
    let outcomes = if only.is_empty() {
        verify::run_all(fault)
    } else {
        verify::run_selected(only, fault)
    };
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_MONITOR
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::{extract_constants, lp_monitor, Constant};
    use crate::flow::{run, FlowConfig};
    use crate::inradius::Side;
    use crate::scenarios::ScenarioSpec;

    #[test]
    fn failing_monitors_map_to_exit_two() {
        let spec = ScenarioSpec::PerturbedCircle {
            radius: 1.0,
            amplitude: 0.15,
            n: 96,
            seed: 3,
        };
        let cfg = FlowConfig {
            stop_time: 0.02,
            sample_interval: 0.005,
            ..FlowConfig::default()
        };
        let trace = run(generate(&spec).unwrap(), &cfg).unwrap();
        let grid = EstimateGrid {
            deltas: vec![0.1],
            sigmas: vec![0.02],
            ps: vec![10.0],
            ..EstimateGrid::default()
        };
        let mut analysis = analyze_trace(&trace, &grid).unwrap();
        assert!(analysis.hard_failures().is_empty());
        assert_eq!(report_failures(&analysis.hard_failures()), EXIT_OK);

        // a growth constant far below zero cannot bound a decaying integral
        let c = extract_constants(&trace, &grid.cells()[0]).unwrap().with_c_hat(Constant::configured(-1e6));
        analysis.cells[0].mu.lp = lp_monitor(&trace, &c, Side::Mu).unwrap();
        let failures = analysis.hard_failures();
        assert_eq!(failures.len(), 1, "{failures:?}");
        assert!(failures[0].contains("L^p bound"));
        assert_eq!(report_failures(&failures), EXIT_MONITOR);
    }

    #[test]
    fn sweep_cells_are_scenario_major() {
        let sweep = SweepConfig {
            scenarios: vec![
                ScenarioSpec::Circle { radius: 1.0, n: 32 },
                ScenarioSpec::Sphere { radius: 1.0, n: 17 },
            ],
            flow: FlowConfig::default(),
            estimates: EstimateGrid::default(),
            output: OutputConfig::default(),
        };
        let cells = sweep_cells(&sweep);
        assert_eq!(cells.len(), 2 * 12);
        assert!(cells[..12].iter().all(|(n, _)| n.starts_with("00_circle_")));
        assert_eq!(cells[0].0, "00_circle_d0.1_s0.01_p2");
        assert_eq!(cells[13].1.output.dir, Path::new("run").join(&cells[13].0));
    }

    #[test]
    fn csv_fields_are_quoted_when_needed() {
        assert_eq!(quote("plain"), "plain");
        assert_eq!(quote("a, b"), "\"a, b\"");
        assert_eq!(quote("say \"x\""), "\"say \"\"x\"\"\"");
    }
}
