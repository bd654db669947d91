//! Level-set truncations `f_{σ,k}` and their `L^p` integrals.

use super::fields::pinch_value;
use super::{nonempty, report, time_derivative, EstimateConstants, RELATIVE_TOL};
use crate::error::{Error, Result};
use crate::flow::FlowTrace;
use crate::geometry::dirichlet_form;
use crate::inradius::Side;

/// `K0 * {1, 2, 4, 8}`, or `{0}` when `K0 = 0`.
pub fn default_levels(k0: f64) -> Vec<f64> {
    if k0 > 0.0 {
        vec![k0, 2.0 * k0, 4.0 * k0, 8.0 * k0]
    } else {
        vec![0.0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRow {
    pub level: f64,
    pub sample: usize,
    pub t: f64,
    /// Measure of `{f_{σ,k} > 0}`.
    pub area: f64,
    /// `∫ f_{σ,k,+}^p`.
    pub integral: f64,
    pub ddt: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetReport {
    pub side: Side,
    pub levels: Vec<f64>,
    /// Level-major: all samples of `levels[0]`, then `levels[1]`, ...
    pub rows: Vec<LevelRow>,
    /// Smallest listed level with `f_{σ,k} <= 0` at every sample.
    pub k_star: Option<f64>,
    /// `sup H^{σ-1}(μ - (1+δ)H)` over the trace: the exact threshold.
    pub k_min: f64,
    pub b_hat: f64,
}

impl LevelSetReport {
    pub fn samples(&self) -> usize {
        self.rows.len() / self.levels.len().max(1)
    }

    pub fn row(&self, level: usize, sample: usize) -> &LevelRow {
        &self.rows[level * self.samples() + sample]
    }

    /// Whether `A(k,t)` and `∫ f_{σ,k,+}^p` are nonincreasing in `k` at
    /// every sample (levels taken in ascending order).
    pub fn is_nested(&self) -> bool {
        let mut order: Vec<usize> = (0..self.levels.len()).collect();
        order.sort_by(|&a, &b| self.levels[a].total_cmp(&self.levels[b]));
        (0..self.samples()).all(|s| {
            order.windows(2).all(|w| {
                let (lo, hi) = (self.row(w[0], s), self.row(w[1], s));
                hi.area <= lo.area && hi.integral <= lo.integral
            })
        })
    }

    pub fn pass_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        self.rows.iter().filter(|r| r.pass).count() as f64 / self.rows.len() as f64
    }
}

/// Tabulates every level against every sample and checks
/// `d/dt ∫ f_{k,+}^p <= -½p(p-1) ∫ f_{k,+}^{p-2} |∇f_k|^2 + σp ∫ |A|^2 f_{k,+}^{p-1} (f_k + k)`.
pub fn levelset_monitor(trace: &FlowTrace, constants: &EstimateConstants, side: Side, levels: &[f64]) -> Result<LevelSetReport> {
    nonempty(trace)?;
    if levels.is_empty() {
        return Err(Error::PreconditionViolated("no levels given".into()));
    }
    let k0 = constants.k0_for(side);
    if let Some(k) = levels.iter().find(|&&k| !(k >= k0 * (1.0 - 1e-12))) {
        return Err(Error::PreconditionViolated(format!("level {k} is below K0 = {k0}")));
    }
    let delta = constants.delta.value;
    let sigma = constants.sigma.value;
    let p = constants.p.value;

    // base[s][i] = H^{σ-1}(μ - (1+δ)H), the level-free part
    let mut base = Vec::with_capacity(trace.samples.len());
    let mut k_min = f64::NEG_INFINITY;
    let mut b_hat = f64::NEG_INFINITY;
    for smp in &trace.samples {
        let g = &smp.geometry;
        let r = report(smp, side)?;
        let mut row = Vec::with_capacity(g.len());
        for i in 0..g.len() {
            let h = g.mean_curvature[i];
            if !(h > 0.0) {
                return Err(Error::NotMeanConvex { vertex: i, value: h });
            }
            let v = pinch_value(side, r.refined[i], h, delta, sigma, 0.0);
            k_min = k_min.max(v);
            let double = match side {
                Side::Mu => r.refined[i] - (1.0 + 2.0 * delta) * h,
                Side::Rho => r.refined[i] - 2.0 * delta * h,
            };
            b_hat = b_hat.max(double);
            row.push(v);
        }
        base.push(row);
    }

    let times = trace.times();
    let mut rows = Vec::with_capacity(levels.len() * times.len());
    for &k in levels {
        let mut level_rows = Vec::with_capacity(times.len());
        for (s, smp) in trace.samples.iter().enumerate() {
            let g = &smp.geometry;
            let fk: Vec<f64> = base[s].iter().map(|v| (v - k).max(0.0)).collect();
            let area = g.integrate(&fk.iter().map(|&v| if v > 0.0 { 1.0 } else { 0.0 }).collect::<Vec<_>>());
            let integral = g.integrate(&fk.iter().map(|v| v.powf(p)).collect::<Vec<_>>());
            // |∇ f^{p/2}|^2 = (p/2)^2 f^{p-2} |∇f|^2
            let u: Vec<f64> = fk.iter().map(|v| v.powf(0.5 * p)).collect();
            let dissipation = 2.0 * (p - 1.0) / p * dirichlet_form(&smp.surface, g, &u, &u)?;
            let forcing: f64 = (0..g.len())
                .filter(|&i| fk[i] > 0.0)
                .map(|i| g.weights[i] * g.norm_a_sq[i] * fk[i].powf(p - 1.0) * base[s][i])
                .sum();
            level_rows.push(LevelRow {
                level: k,
                sample: s,
                t: smp.t,
                area,
                integral,
                ddt: 0.0,
                rhs: -dissipation + sigma * p * forcing,
                pass: true,
            });
        }
        let ints: Vec<f64> = level_rows.iter().map(|r| r.integral).collect();
        for (r, d) in level_rows.iter_mut().zip(time_derivative(&times, &ints)) {
            r.ddt = d;
            r.pass = r.rhs - d >= -RELATIVE_TOL * d.abs().max(r.rhs.abs());
        }
        rows.extend(level_rows);
    }
    let k_star = levels
        .iter()
        .copied()
        .filter(|&k| base.iter().flatten().all(|&v| v - k <= 0.0))
        .fold(None, |acc: Option<f64>, k| Some(acc.map_or(k, |a| a.min(k))));
    Ok(LevelSetReport {
        side,
        levels: levels.to_vec(),
        rows,
        k_star,
        k_min,
        b_hat,
    })
}
