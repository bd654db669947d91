//! `L^p` norms of the pinching functions and their growth bounds.

use super::{fields::pinch_fields, nonempty, report, time_derivative, Constant, EstimateConstants};
use crate::error::{Error, Result};
use crate::flow::FlowTrace;
use crate::inradius::Side;

/// Relative slack allowed when comparing two sides of a bound.
pub const RELATIVE_TOL: f64 = 1e-6;

fn holds(lhs: f64, rhs: f64) -> bool {
    rhs - lhs >= -RELATIVE_TOL * lhs.abs().max(rhs.abs())
}

/// Checks `p >= 1/c0` and `σ <= c0 p^{-1/2}`.
pub fn check_admissible(sigma: f64, p: f64, c0: f64) -> Result<()> {
    if !(p >= 1.0 / c0) {
        return Err(Error::PreconditionViolated(format!(
            "L^p growth bound needs p >= 1/c0: p = {p}, c0 = {c0}"
        )));
    }
    let limit = c0 / p.sqrt();
    if !(sigma > 0.0 && sigma <= limit) {
        return Err(Error::PreconditionViolated(format!(
            "L^p growth bound needs sigma <= c0 p^(-1/2) = {limit:.6e}: sigma = {sigma}, p = {p}, c0 = {c0}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpRow {
    pub t: f64,
    /// `∫ f_{σ,+}^p`.
    pub integral: f64,
    pub ddt: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpReport {
    pub side: Side,
    pub delta: f64,
    pub sigma: f64,
    pub p: f64,
    /// Growth constant used (0 on the outer side).
    pub c_hat: f64,
    pub rows: Vec<LpRow>,
}

impl LpReport {
    pub fn pass_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        self.rows.iter().filter(|r| r.pass).count() as f64 / self.rows.len() as f64
    }

    pub fn is_vacuous(&self) -> bool {
        self.rows.iter().all(|r| r.integral == 0.0)
    }
}

struct Series {
    times: Vec<f64>,
    integral: Vec<f64>,
    forcing: Vec<f64>,
}

/// `∫ f_+^p` and `σ p K0^p ∫ |A|^2` per sample.
fn series(trace: &FlowTrace, constants: &EstimateConstants, side: Side) -> Result<Series> {
    nonempty(trace)?;
    let p = constants.p.value;
    let sigma = constants.sigma.value;
    let k0 = constants.k0_for(side);
    let mut out = Series {
        times: Vec::new(),
        integral: Vec::new(),
        forcing: Vec::new(),
    };
    for s in &trace.samples {
        let f = pinch_fields(&s.geometry, report(s, side)?, constants, side)?;
        let fp: Vec<f64> = f.f_plus.iter().map(|v| v.powf(p)).collect();
        out.times.push(s.t);
        out.integral.push(s.geometry.integrate(&fp));
        out.forcing.push(sigma * p * k0.powf(p) * s.geometry.integrate(&s.geometry.norm_a_sq));
    }
    Ok(out)
}

fn admissible(constants: &EstimateConstants) -> Result<()> {
    check_admissible(constants.sigma.value, constants.p.value, constants.c0.value)
}

/// Smallest `C >= 0` for which the inner-side growth bound holds at every
/// sample of `trace` with a positive integral.
pub fn fit_c_hat(trace: &FlowTrace, constants: &EstimateConstants) -> Result<f64> {
    admissible(constants)?;
    let s = series(trace, constants, Side::Mu)?;
    let sp = constants.sigma.value * constants.p.value;
    let ddt = time_derivative(&s.times, &s.integral);
    Ok((0..s.times.len())
        .filter(|&i| s.integral[i] > 0.0)
        .map(|i| (ddt[i] - s.forcing[i]) / (sp * s.integral[i]))
        .fold(0.0, f64::max))
}

/// `d/dt ∫ f_+^p <= C σ p ∫ f_+^p + σ p K0^p ∫ |A|^2` on the inner side, or
/// the same without the `C` term on the outer side. On the inner side the
/// frozen `constants.c_hat` is used if present, otherwise `C` is fitted on
/// this trace.
pub fn lp_monitor(trace: &FlowTrace, constants: &EstimateConstants, side: Side) -> Result<LpReport> {
    admissible(constants)?;
    let c_hat = match side {
        Side::Mu => match constants.c_hat {
            Some(c) => c.value,
            None => fit_c_hat(trace, constants)?,
        },
        Side::Rho => 0.0,
    };
    let s = series(trace, constants, side)?;
    let sp = constants.sigma.value * constants.p.value;
    let ddt = time_derivative(&s.times, &s.integral);
    let rows = (0..s.times.len())
        .map(|i| {
            let rhs = c_hat * sp * s.integral[i] + s.forcing[i];
            LpRow {
                t: s.times[i],
                integral: s.integral[i],
                ddt: ddt[i],
                rhs,
                margin: rhs - ddt[i],
                pass: holds(ddt[i], rhs),
            }
        })
        .collect();
    Ok(LpReport {
        side,
        delta: constants.delta.value,
        sigma: constants.sigma.value,
        p: constants.p.value,
        c_hat,
        rows,
    })
}

/// Integrated forms of the growth bound at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallRow {
    pub t: f64,
    /// `∫_{M_t} (f_+^p + σ p K0^p Λ)` against `e^{Cσpt} ∫_{M_0} (same)`.
    pub integral_lhs: f64,
    pub integral_rhs: f64,
    /// `(∫ f_+^p)^{1/p}` against `e^{Cσt} |M_0|^{1/p} (sup_{M_0} f_+^p + σ p K0^p Λ)^{1/p}`.
    pub norm_lhs: f64,
    pub norm_rhs: f64,
    pub pass: bool,
}

impl GronwallRow {
    pub fn integral_margin(&self) -> f64 {
        self.integral_rhs - self.integral_lhs
    }

    pub fn norm_margin(&self) -> f64 {
        self.norm_rhs - self.norm_lhs
    }
}

/// Both integrated displays, with `C = Ĉ` on the inner side and `C = 0` on
/// the outer side.
pub fn gronwall_check(trace: &FlowTrace, constants: &EstimateConstants, side: Side) -> Result<Vec<GronwallRow>> {
    admissible(constants)?;
    let c = match side {
        Side::Mu => constants
            .c_hat
            .map(|c: Constant| c.value)
            .ok_or_else(|| Error::PreconditionViolated("growth constant not fitted; run lp_monitor first".into()))?,
        Side::Rho => 0.0,
    };
    let s = series(trace, constants, side)?;
    let p = constants.p.value;
    let sigma = constants.sigma.value;
    let shift = sigma * p * constants.k0_for(side).powf(p) * constants.lambda.value;
    let first = &trace.samples[0];
    let m0 = first.geometry.total_measure();
    let f0 = pinch_fields(&first.geometry, report(first, side)?, constants, side)?;
    let sup0 = f0.f_plus.iter().map(|v| v.powf(p)).fold(0.0, f64::max);
    let base_integral = s.integral[0] + shift * m0;
    let base_norm = m0.powf(1.0 / p) * (sup0 + shift).powf(1.0 / p);
    Ok(trace
        .samples
        .iter()
        .enumerate()
        .map(|(i, smp)| {
            let t = s.times[i] - s.times[0];
            let integral_lhs = s.integral[i] + shift * smp.geometry.total_measure();
            let integral_rhs = (c * sigma * p * t).exp() * base_integral;
            let norm_lhs = s.integral[i].powf(1.0 / p);
            let norm_rhs = (c * sigma * t).exp() * base_norm;
            GronwallRow {
                t: s.times[i],
                integral_lhs,
                integral_rhs,
                norm_lhs,
                norm_rhs,
                pass: holds(integral_lhs, integral_rhs) && holds(norm_lhs, norm_rhs),
            }
        })
        .collect())
}
