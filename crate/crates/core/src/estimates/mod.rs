//! Pinching quantities built from μ, ρ and H, and numerical monitors for the
//! inequalities they satisfy along the flow.
//!
//! Every monitor is a pure function of a [`FlowTrace`]; none of them mutate
//! the trace or depend on evaluation order.

mod aux;
mod constants;
mod fields;
mod levelset;
mod lp;
mod residual;
mod tracking;
mod witness;

pub use aux::{aux_integral_check, aux_tolerance, mask_to_support, support_mask, AuxSlack};
pub use constants::{extract_constants, Constant, EstimateConstants, EstimateParams, Provenance, DEFAULT_C0};
pub use fields::{pinch_fields, pinch_value, PinchFields};
pub use levelset::{default_levels, levelset_monitor, LevelRow, LevelSetReport};
pub use lp::{check_admissible, fit_c_hat, gronwall_check, lp_monitor, GronwallRow, LpReport, LpRow, RELATIVE_TOL};
pub use residual::{
    mu_evolution_residual, mu_evolution_residual_with, rho_pde_residual, ResidualOptions, ResidualReport, ResidualRow,
    ToleranceModel,
};
pub use tracking::{interpolate, project, Projection};
pub use witness::{theorem_witness, Theorem, Trend, WitnessRow, WitnessTable};

use crate::error::{Error, Result};
use crate::flow::{FlowTrace, Sample};
use crate::inradius::{ContactReport, Side};

pub(crate) fn report(sample: &Sample, side: Side) -> Result<&ContactReport> {
    let r = match side {
        Side::Mu => sample.mu.as_ref(),
        Side::Rho => sample.rho.as_ref(),
    };
    r.ok_or_else(|| Error::PreconditionViolated(format!("sample at t = {} carries no {} data", sample.t, side.name())))
}

pub(crate) fn nonempty(trace: &FlowTrace) -> Result<()> {
    if trace.samples.is_empty() {
        return Err(Error::NoSamples);
    }
    Ok(())
}

/// Derivative of a sampled time series: three-point differences on a
/// nonuniform grid, one-sided at the ends. A single sample gives 0.
pub fn time_derivative(times: &[f64], values: &[f64]) -> Vec<f64> {
    let m = times.len();
    if m < 2 {
        return vec![0.0; m];
    }
    (0..m)
        .map(|s| {
            if s == 0 {
                (values[1] - values[0]) / (times[1] - times[0])
            } else if s + 1 == m {
                (values[s] - values[s - 1]) / (times[s] - times[s - 1])
            } else {
                centred(times[s] - times[s - 1], times[s + 1] - times[s], values[s - 1], values[s], values[s + 1])
            }
        })
        .collect()
}

/// Three-point derivative at the middle node, backward gap `a`, forward gap `b`.
pub(crate) fn centred(a: f64, b: f64, fm: f64, f0: f64, fp: f64) -> f64 {
    -b / (a * (a + b)) * fm + (b - a) / (a * b) * f0 + a / (b * (a + b)) * fp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_is_exact_for_quadratics() {
        let t = [0.0, 0.1, 0.25, 0.3, 0.7];
        let f: Vec<f64> = t.iter().map(|x| 3.0 * x * x - x + 2.0).collect();
        let d = time_derivative(&t, &f);
        for s in 1..4 {
            assert!((d[s] - (6.0 * t[s] - 1.0)).abs() < 1e-12);
        }
    }
}
