//! Every monitor evaluated over one trace for a grid of parameters.

use super::config::EstimateGrid;
use crate::error::Result;
use crate::estimates::{
    default_levels, extract_constants, gronwall_check, levelset_monitor, lp_monitor, mu_evolution_residual,
    rho_pde_residual, theorem_witness, Constant, EstimateConstants, EstimateParams, GronwallRow, LevelSetReport,
    LpReport, ResidualReport, WitnessTable,
};
use crate::flow::FlowTrace;
use crate::inradius::Side;

/// Fraction of samples a monitor must pass.
pub const PASS_FRACTION: f64 = 0.95;

#[derive(Debug, Clone)]
pub struct SideResult {
    pub lp: LpReport,
    pub gronwall: Vec<GronwallRow>,
    pub levels: LevelSetReport,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub params: EstimateParams,
    pub constants: EstimateConstants,
    pub mu: SideResult,
    pub rho: SideResult,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub cells: Vec<CellResult>,
    pub witness: WitnessTable,
    pub mu_residual: Option<ResidualReport>,
    pub rho_residual: Option<ResidualReport>,
}

fn fraction(pass: impl Iterator<Item = bool>) -> f64 {
    let (mut ok, mut total) = (0usize, 0usize);
    for p in pass {
        total += 1;
        ok += p as usize;
    }
    if total == 0 {
        1.0
    } else {
        ok as f64 / total as f64
    }
}

impl SideResult {
    fn failures(&self, label: &str) -> Vec<String> {
        let mut out = Vec::new();
        let lp = self.lp.pass_fraction();
        if lp < PASS_FRACTION {
            out.push(format!("{label}: L^p bound holds at {:.1}% of samples", 100.0 * lp));
        }
        let gr = fraction(self.gronwall.iter().map(|r| r.pass));
        if gr < PASS_FRACTION {
            out.push(format!("{label}: integrated bound holds at {:.1}% of samples", 100.0 * gr));
        }
        if !self.levels.is_nested() {
            out.push(format!("{label}: level-set table is not nested"));
        }
        out
    }
}

impl Analysis {
    /// Monitor checks that failed, one message each.
    pub fn hard_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.cells {
            let label = format!("delta={} sigma={} p={}", c.params.delta, c.params.sigma, c.params.p);
            out.extend(c.mu.failures(&format!("{label} mu")));
            out.extend(c.rho.failures(&format!("{label} rho")));
        }
        if !self.witness.mu_trend.is_monotone() || !self.witness.rho_trend.is_monotone() {
            out.push("witness trend is not monotone".into());
        }
        out
    }
}

fn side(trace: &FlowTrace, constants: &EstimateConstants, s: Side, levels: &Option<Vec<f64>>) -> Result<SideResult> {
    let lp = lp_monitor(trace, constants, s)?;
    let fitted = match s {
        Side::Mu if constants.c_hat.is_none() => constants.clone().with_c_hat(Constant::fitted(lp.c_hat)),
        _ => constants.clone(),
    };
    let gronwall = gronwall_check(trace, &fitted, s)?;
    let levels = match levels {
        Some(l) => l.clone(),
        None => default_levels(constants.k0_for(s)),
    };
    let levels = levelset_monitor(trace, constants, s, &levels)?;
    Ok(SideResult { lp, gronwall, levels })
}

pub fn analyze_trace(trace: &FlowTrace, grid: &EstimateGrid) -> Result<Analysis> {
    let mut cells = Vec::new();
    for params in grid.cells() {
        let mut constants = extract_constants(trace, &params)?;
        if let Some(c) = grid.c_hat {
            constants = constants.with_c_hat(Constant::configured(c));
        }
        let mu = side(trace, &constants, Side::Mu, &grid.levels)?;
        if constants.c_hat.is_none() {
            constants = constants.with_c_hat(Constant::fitted(mu.lp.c_hat));
        }
        let rho = side(trace, &constants, Side::Rho, &grid.levels)?;
        cells.push(CellResult {
            params,
            constants,
            mu,
            rho,
        });
    }
    let window = 0..trace.samples.len();
    let enough = trace.samples.len() >= 3;
    Ok(Analysis {
        cells,
        witness: theorem_witness(trace, &grid.witness_deltas)?,
        mu_residual: if enough { Some(mu_evolution_residual(trace, window.clone())?) } else { None },
        rho_residual: if enough { Some(rho_pde_residual(trace, window)?) } else { None },
    })
}
