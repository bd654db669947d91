//! Files of a run directory.

use super::analysis::Analysis;
use super::config::RunConfig;
use super::svg::{LineChart, Series};
use crate::error::{Error, Result};
use crate::flow::FlowTrace;
use crate::geometry::io::{format_surface, load};
use crate::geometry::Surface;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

pub const TRACE_FILE: &str = "trace.csv";
pub const META_FILE: &str = "meta";
pub const FRAMES_DIR: &str = "frames";
pub const ESTIMATES_FILE: &str = "estimates.csv";
pub const ESTIMATES_RHO_FILE: &str = "estimates_rho.csv";
pub const GRONWALL_FILE: &str = "gronwall.csv";
pub const LEVELSETS_FILE: &str = "levelsets.csv";
pub const RESIDUALS_FILE: &str = "residuals.csv";
pub const WITNESS_FILE: &str = "witness.csv";
pub const CONSTANTS_FILE: &str = "constants.txt";
pub const PINCHING_PLOT: &str = "pinching.svg";
pub const MARGINS_PLOT: &str = "lp_margins.svg";

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn trace_csv(trace: &FlowTrace) -> String {
    let mut out = String::from("t,H_max,H_min,mu_max,rho_max,area\n");
    for s in &trace.samples {
        let mu = s.mu.as_ref().map_or(f64::NAN, |r| r.max_value());
        let rho = s.rho.as_ref().map_or(f64::NAN, |r| r.max_value());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(s.t),
            num(s.geometry.max_mean_curvature()),
            num(s.geometry.min_mean_curvature()),
            num(mu),
            num(rho),
            num(s.measure())
        );
    }
    out
}

pub fn meta_text(config: &RunConfig, trace: &FlowTrace) -> String {
    let last = trace.last();
    let mut out = String::new();
    let _ = writeln!(out, "# stop: {}", trace.stop);
    let _ = writeln!(out, "# steps: {}", trace.steps);
    let _ = writeln!(out, "# samples: {}", trace.samples.len());
    let _ = writeln!(out, "# t_final: {}", num(last.t));
    out.push_str(&config.to_toml());
    out
}

fn lp_csv(analysis: &Analysis, rho: bool) -> String {
    let mut out = String::from("t,delta,sigma,p,int_f_plus_p,ddt_lhs,bound_rhs,margin,pass\n");
    for c in &analysis.cells {
        let lp = if rho { &c.rho.lp } else { &c.mu.lp };
        for r in &lp.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                num(r.t),
                num(lp.delta),
                num(lp.sigma),
                num(lp.p),
                num(r.integral),
                num(r.ddt),
                num(r.rhs),
                num(r.margin),
                r.pass
            );
        }
    }
    out
}

fn gronwall_csv(analysis: &Analysis) -> String {
    let mut out = String::from("side,delta,sigma,p,t,integral_lhs,integral_rhs,norm_lhs,norm_rhs,pass\n");
    for c in &analysis.cells {
        for (name, rows) in [("mu", &c.mu.gronwall), ("rho", &c.rho.gronwall)] {
            for r in rows {
                let _ = writeln!(
                    out,
                    "{name},{},{},{},{},{},{},{},{},{}",
                    num(c.params.delta),
                    num(c.params.sigma),
                    num(c.params.p),
                    num(r.t),
                    num(r.integral_lhs),
                    num(r.integral_rhs),
                    num(r.norm_lhs),
                    num(r.norm_rhs),
                    r.pass
                );
            }
        }
    }
    out
}

fn levelsets_csv(analysis: &Analysis) -> String {
    let mut out = String::from("side,delta,sigma,p,k,t,area,int_f_k_plus_p,ddt_lhs,bound_rhs,pass\n");
    for c in &analysis.cells {
        for (name, rep) in [("mu", &c.mu.levels), ("rho", &c.rho.levels)] {
            for r in &rep.rows {
                let _ = writeln!(
                    out,
                    "{name},{},{},{},{},{},{},{},{},{},{}",
                    num(c.params.delta),
                    num(c.params.sigma),
                    num(c.params.p),
                    num(r.level),
                    num(r.t),
                    num(r.area),
                    num(r.integral),
                    num(r.ddt),
                    num(r.rhs),
                    r.pass
                );
            }
        }
    }
    out
}

fn residuals_csv(analysis: &Analysis) -> String {
    let mut out = String::from("side,t,vertex,H,spacing,dt,residual,first_order,omega\n");
    for rep in [&analysis.mu_residual, &analysis.rho_residual].into_iter().flatten() {
        for r in rep.eligible() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                rep.side.name(),
                num(r.t),
                r.vertex,
                num(r.mean_curvature),
                num(r.spacing),
                num(r.dt),
                num(r.residual),
                r.first_order.map_or(String::new(), num),
                r.omega.map_or(String::new(), num)
            );
        }
    }
    out
}

pub fn witness_csv(analysis: &Analysis) -> String {
    let mut out = String::from("delta,theorem,C_hat,B_hat\n");
    for r in &analysis.witness.rows {
        let _ = writeln!(out, "{},{},{},{}", num(r.delta), r.theorem.name(), num(r.c_hat), num(r.b_hat));
    }
    out
}

pub fn constants_text(analysis: &Analysis) -> String {
    let mut out = String::new();
    for c in &analysis.cells {
        let _ = writeln!(out, "[delta = {}, sigma = {}, p = {}]", c.params.delta, c.params.sigma, c.params.p);
        out.push_str(&c.constants.to_block());
        let _ = writeln!(out, "k_star_mu = {}", c.mu.levels.k_star.map_or("none".into(), num));
        let _ = writeln!(out, "k_star_rho = {}", c.rho.levels.k_star.map_or("none".into(), num));
        out.push('\n');
    }
    out
}

fn pinching_chart(trace: &FlowTrace, analysis: &Analysis) -> LineChart {
    let mut mu = Vec::new();
    let mut rho = Vec::new();
    for s in &trace.samples {
        let h = &s.geometry.mean_curvature;
        let ratio = |vals: &[f64]| vals.iter().zip(h).map(|(v, h)| v / h).fold(f64::NEG_INFINITY, f64::max);
        if let Some(r) = &s.mu {
            mu.push((s.t, ratio(&r.refined)));
        }
        if let Some(r) = &s.rho {
            rho.push((s.t, ratio(&r.refined)));
        }
    }
    let (t0, t1) = (trace.samples[0].t, trace.last().t);
    let mut series = vec![Series::line("max mu/H", mu), Series::line("max rho/H", rho)];
    let mut deltas: Vec<f64> = analysis.witness.rows.iter().map(|r| r.delta).collect();
    deltas.dedup();
    for d in deltas {
        series.push(Series::dashed(format!("1+{d}"), vec![(t0, 1.0 + d), (t1, 1.0 + d)]));
        series.push(Series::dashed(format!("{d}"), vec![(t0, d), (t1, d)]));
    }
    LineChart {
        title: "Pinching ratios".into(),
        x_label: "t".into(),
        y_label: "ratio".into(),
        series,
    }
}

fn margins_chart(analysis: &Analysis) -> LineChart {
    let series = analysis
        .cells
        .iter()
        .map(|c| {
            Series::line(
                format!("d={} s={} p={}", c.params.delta, c.params.sigma, c.params.p),
                c.mu.lp.rows.iter().map(|r| (r.t, r.margin)).collect(),
            )
        })
        .collect();
    LineChart {
        title: "L^p bound margins".into(),
        x_label: "t".into(),
        y_label: "bound - d/dt integral".into(),
        series,
    }
}

fn frame_path(dir: &Path, k: usize) -> PathBuf {
    dir.join(FRAMES_DIR).join(format!("{k:04}.txt"))
}

/// Writes the flow outputs: trace, meta and frames.
pub fn write_flow(dir: &Path, config: &RunConfig, trace: &FlowTrace) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(&dir.join(TRACE_FILE), &trace_csv(trace))?;
    write(&dir.join(META_FILE), &meta_text(config, trace))?;
    if config.output.frames {
        let frames = dir.join(FRAMES_DIR);
        if frames.exists() {
            fs::remove_dir_all(&frames).map_err(|e| Error::io(&frames, e))?;
        }
        fs::create_dir_all(&frames).map_err(|e| Error::io(&frames, e))?;
        for (k, s) in trace.samples.iter().enumerate() {
            write(&frame_path(dir, k), &format_surface(&s.surface, Some(s.t)))?;
        }
    }
    Ok(())
}

/// Writes every monitor output and, if enabled, the plots.
pub fn write_analysis(dir: &Path, config: &RunConfig, trace: &FlowTrace, analysis: &Analysis) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(&dir.join(ESTIMATES_FILE), &lp_csv(analysis, false))?;
    write(&dir.join(ESTIMATES_RHO_FILE), &lp_csv(analysis, true))?;
    write(&dir.join(GRONWALL_FILE), &gronwall_csv(analysis))?;
    write(&dir.join(LEVELSETS_FILE), &levelsets_csv(analysis))?;
    write(&dir.join(RESIDUALS_FILE), &residuals_csv(analysis))?;
    write(&dir.join(WITNESS_FILE), &witness_csv(analysis))?;
    write(&dir.join(CONSTANTS_FILE), &constants_text(analysis))?;
    if config.output.plots {
        write(&dir.join(PINCHING_PLOT), &pinching_chart(trace, analysis).render())?;
        write(&dir.join(MARGINS_PLOT), &margins_chart(analysis).render())?;
    }
    Ok(())
}

/// Reads every frame of a run directory in order.
pub fn read_frames(dir: &Path) -> Result<Vec<(Surface, f64)>> {
    let frames = dir.join(FRAMES_DIR);
    let mut paths: Vec<PathBuf> = fs::read_dir(&frames)
        .map_err(|e| Error::io(&frames, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let (surface, t) = load(&p)?;
            let t = t.ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("{} has no `# t = ...` line", p.display()),
            })?;
            Ok((surface, t))
        })
        .collect()
}
