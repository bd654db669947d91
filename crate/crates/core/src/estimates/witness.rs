//! Empirical curvature thresholds beyond which the sharp bounds hold.

use super::{nonempty, report};
use crate::error::Result;
use crate::flow::FlowTrace;
use crate::inradius::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// `μ <= (1+δ) H` for large `H`.
    Inscribed,
    /// `ρ <= δ H` for large `H`.
    Outer,
}

impl Theorem {
    pub fn side(self) -> Side {
        match self {
            Theorem::Inscribed => Side::Mu,
            Theorem::Outer => Side::Rho,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Inscribed => "inscribed",
            Theorem::Outer => "outer",
        }
    }

    fn allowed(self, delta: f64) -> f64 {
        match self {
            Theorem::Inscribed => 1.0 + delta,
            Theorem::Outer => delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessRow {
    pub delta: f64,
    pub theorem: Theorem,
    /// Largest `H` at which the bound fails: the bound holds for every
    /// sampled point with larger `H`. 0 without failures, `+inf` when the
    /// point of largest `H` fails.
    pub c_hat: f64,
    /// `sup(μ - (1+2δ)H)`, resp. `sup(ρ - 2δH)`.
    pub b_hat: f64,
}

/// `s(τ) = sup { ratio : H >= τ }` as a step function.
#[derive(Debug, Clone, PartialEq)]
pub struct Trend {
    /// Sampled curvatures in descending order.
    pub tau: Vec<f64>,
    /// Running maximum of the ratio over `H >= tau[i]`.
    pub s: Vec<f64>,
}

impl Trend {
    fn new(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
        let mut run = f64::NEG_INFINITY;
        let mut tau = Vec::with_capacity(pairs.len());
        let mut s = Vec::with_capacity(pairs.len());
        for (h, r) in pairs {
            run = run.max(r);
            tau.push(h);
            s.push(run);
        }
        Trend { tau, s }
    }

    /// `s(τ)`; `-inf` above the largest sampled curvature.
    pub fn value_at(&self, tau: f64) -> f64 {
        let count = self.tau.partition_point(|&h| h >= tau);
        if count == 0 {
            f64::NEG_INFINITY
        } else {
            self.s[count - 1]
        }
    }

    /// Curvature at quantile `q` of all sampled values.
    pub fn quantile(&self, q: f64) -> f64 {
        if self.tau.is_empty() {
            return f64::NAN;
        }
        let m = self.tau.len();
        let rank = ((1.0 - q) * (m - 1) as f64).round() as usize;
        self.tau[rank.min(m - 1)]
    }

    /// `s` at the 90th percentile of `H`.
    pub fn top_decile(&self) -> f64 {
        self.value_at(self.quantile(0.9))
    }

    /// `s(τ)` nonincreasing in `τ`.
    pub fn is_monotone(&self) -> bool {
        self.s.windows(2).all(|w| w[1] >= w[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessTable {
    pub rows: Vec<WitnessRow>,
    pub mu_trend: Trend,
    pub rho_trend: Trend,
}

/// Thresholds for both theorems at each `δ`, plus the trend series.
pub fn theorem_witness(trace: &FlowTrace, deltas: &[f64]) -> Result<WitnessTable> {
    nonempty(trace)?;
    let mut points: Vec<(f64, f64, f64)> = Vec::new();
    for s in &trace.samples {
        let mu = report(s, Side::Mu)?;
        let rho = report(s, Side::Rho)?;
        for (i, &h) in s.geometry.mean_curvature.iter().enumerate() {
            points.push((h, mu.refined[i], rho.refined[i]));
        }
    }
    let h_top = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mut rows = Vec::new();
    for &delta in deltas {
        for theorem in [Theorem::Inscribed, Theorem::Outer] {
            let value = |p: &(f64, f64, f64)| match theorem {
                Theorem::Inscribed => p.1,
                Theorem::Outer => p.2,
            };
            let factor = theorem.allowed(delta);
            let worst = points
                .iter()
                .filter(|p| value(p) > factor * p.0)
                .map(|p| p.0)
                .fold(None, |acc: Option<f64>, h| Some(acc.map_or(h, |a| a.max(h))));
            let c_hat = match worst {
                None => 0.0,
                Some(h) if h >= h_top => f64::INFINITY,
                Some(h) => h,
            };
            let b_hat = points
                .iter()
                .map(|p| value(p) - (factor + delta) * p.0)
                .fold(f64::NEG_INFINITY, f64::max);
            rows.push(WitnessRow {
                delta,
                theorem,
                c_hat,
                b_hat,
            });
        }
    }
    Ok(WitnessTable {
        rows,
        mu_trend: Trend::new(points.iter().map(|p| (p.0, p.1 / p.0)).collect()),
        rho_trend: Trend::new(points.iter().map(|p| (p.0, p.2 / p.0)).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_is_a_running_max() {
        let t = Trend::new(vec![(1.0, 0.5), (3.0, 0.2), (2.0, 0.9), (4.0, 0.1)]);
        assert_eq!(t.tau, vec![4.0, 3.0, 2.0, 1.0]);
        assert_eq!(t.s, vec![0.1, 0.2, 0.9, 0.9]);
        assert_eq!(t.value_at(2.5), 0.2);
        assert_eq!(t.value_at(5.0), f64::NEG_INFINITY);
        assert!(t.is_monotone());
    }
}
