//! Empirical values of the constants that the estimates only assert exist.

use super::{nonempty, report};
use crate::error::{Error, Result};
use crate::flow::FlowTrace;
use crate::inradius::Side;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Default `c0` in the admissibility window `p >= 1/c0`, `σ <= c0 p^{-1/2}`.
pub const DEFAULT_C0: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Configured,
    Extracted,
    Fitted,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Configured => "configured",
            Provenance::Extracted => "extracted",
            Provenance::Fitted => "fitted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant {
    pub value: f64,
    pub provenance: Provenance,
}

impl Constant {
    pub fn configured(value: f64) -> Self {
        Constant {
            value,
            provenance: Provenance::Configured,
        }
    }

    pub fn extracted(value: f64) -> Self {
        Constant {
            value,
            provenance: Provenance::Extracted,
        }
    }

    pub fn fitted(value: f64) -> Self {
        Constant {
            value,
            provenance: Provenance::Fitted,
        }
    }
}

/// User-facing parameters of the pinching functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateParams {
    pub delta: f64,
    pub sigma: f64,
    pub p: f64,
    pub c0: f64,
    /// Defaults to `δ / (4 n^4 Λ^2)`.
    pub epsilon: Option<f64>,
    /// Level `k`; defaults to the extracted `K0`.
    pub level: Option<f64>,
}

impl EstimateParams {
    pub fn new(delta: f64, sigma: f64, p: f64) -> Self {
        EstimateParams {
            delta,
            sigma,
            p,
            c0: DEFAULT_C0,
            epsilon: None,
            level: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::PreconditionViolated(m));
        if !(self.delta > 0.0) {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if !(self.sigma > 0.0 && self.sigma < 0.5) {
            return bad(format!("sigma must lie in (0, 1/2), got {}", self.sigma));
        }
        if !(self.p >= 1.0) {
            return bad(format!("p must be at least 1, got {}", self.p));
        }
        if !(self.c0 > 0.0) {
            return bad(format!("c0 must be positive, got {}", self.c0));
        }
        if let Some(e) = self.epsilon {
            if !(e >= 0.0) {
                return bad(format!("epsilon must be nonnegative, got {e}"));
            }
        }
        if let Some(k) = self.level {
            if !(k >= 0.0) {
                return bad(format!("level must be nonnegative, got {k}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateConstants {
    pub dimension: usize,
    pub delta: Constant,
    pub epsilon: Constant,
    pub sigma: Constant,
    pub p: Constant,
    pub c0: Constant,
    pub level: Constant,
    /// From `(n-1) λ1 >= -(δ/2) H - K0 min(H, 1)`.
    pub k0: Constant,
    /// From `λ1 >= -(δ/2) H - K0 min(H, 1)`, used on the outer side.
    pub k0_rho: Constant,
    /// From `λ1 >= -ε H - K1`.
    pub k1: Constant,
    /// From `|A|^2 <= (1 + ε) H^2 + K2`.
    pub k2: Constant,
    /// `Λ >= 1` with `μ <= Λ H` and `|A|^2 <= Λ H^2`.
    pub lambda: Constant,
    /// `sup(μ - (1 + 2δ) H)`.
    pub b_hat: Constant,
    /// `sup(ρ - 2δ H)`.
    pub b_hat_rho: Constant,
    /// Growth constant of the `L^p` inequality, once fitted.
    pub c_hat: Option<Constant>,
}

impl EstimateConstants {
    pub fn k0_for(&self, side: Side) -> f64 {
        match side {
            Side::Mu => self.k0.value,
            Side::Rho => self.k0_rho.value,
        }
    }

    pub fn b_hat_for(&self, side: Side) -> f64 {
        match side {
            Side::Mu => self.b_hat.value,
            Side::Rho => self.b_hat_rho.value,
        }
    }

    pub fn with_c_hat(mut self, c_hat: Constant) -> Self {
        self.c_hat = Some(c_hat);
        self
    }

    fn entries(&self) -> Vec<(&'static str, Constant)> {
        let mut v = vec![
            ("delta", self.delta),
            ("epsilon", self.epsilon),
            ("sigma", self.sigma),
            ("p", self.p),
            ("c0", self.c0),
            ("level", self.level),
            ("K0", self.k0),
            ("K0_rho", self.k0_rho),
            ("K1", self.k1),
            ("K2", self.k2),
            ("Lambda", self.lambda),
            ("B_hat", self.b_hat),
            ("B_hat_rho", self.b_hat_rho),
        ];
        if let Some(c) = self.c_hat {
            v.push(("C_hat", c));
        }
        v
    }

    /// `key = value  # provenance` lines, 17 significant digits.
    pub fn to_block(&self) -> String {
        let mut out = format!("n = {}  # configured\n", self.dimension);
        for (k, c) in self.entries() {
            let _ = writeln!(out, "{k} = {:.16e}  # {}", c.value, c.provenance.name());
        }
        out
    }
}

/// Running suprema of the constants over every (vertex, sample) pair.
pub fn extract_constants(trace: &FlowTrace, params: &EstimateParams) -> Result<EstimateConstants> {
    nonempty(trace)?;
    params.validate()?;
    let n = trace.dimension();
    let nf = n as f64;
    let delta = params.delta;

    let mut k0: f64 = 0.0;
    let mut k0_rho: f64 = 0.0;
    let mut lambda: f64 = 1.0;
    let mut b_hat = f64::NEG_INFINITY;
    let mut b_hat_rho = f64::NEG_INFINITY;
    for s in &trace.samples {
        let g = &s.geometry;
        let mu = report(s, Side::Mu)?;
        let rho = report(s, Side::Rho)?;
        for i in 0..g.len() {
            let h = g.mean_curvature[i];
            if !(h > 0.0) {
                return Err(Error::NotMeanConvex { vertex: i, value: h });
            }
            let l1 = g.lambda_min(i);
            let scale = h.min(1.0);
            k0 = k0.max((-(nf - 1.0) * l1 - 0.5 * delta * h) / scale);
            k0_rho = k0_rho.max((-l1 - 0.5 * delta * h) / scale);
            lambda = lambda.max(mu.refined[i] / h).max(g.norm_a_sq[i] / (h * h));
            b_hat = b_hat.max(mu.refined[i] - (1.0 + 2.0 * delta) * h);
            b_hat_rho = b_hat_rho.max(rho.refined[i] - 2.0 * delta * h);
        }
    }

    let (epsilon, eps_prov) = match params.epsilon {
        Some(e) => (e, Provenance::Configured),
        None => (delta / (4.0 * nf.powi(4) * lambda * lambda), Provenance::Extracted),
    };
    let mut k1: f64 = 0.0;
    let mut k2: f64 = 0.0;
    for s in &trace.samples {
        let g = &s.geometry;
        for i in 0..g.len() {
            let h = g.mean_curvature[i];
            k1 = k1.max(-g.lambda_min(i) - epsilon * h);
            k2 = k2.max(g.norm_a_sq[i] - (1.0 + epsilon) * h * h);
        }
    }

    let level = match params.level {
        Some(k) => Constant::configured(k),
        None => Constant::extracted(k0),
    };
    Ok(EstimateConstants {
        dimension: n,
        delta: Constant::configured(delta),
        epsilon: Constant {
            value: epsilon,
            provenance: eps_prov,
        },
        sigma: Constant::configured(params.sigma),
        p: Constant::configured(params.p),
        c0: Constant::configured(params.c0),
        level,
        k0: Constant::extracted(k0),
        k0_rho: Constant::extracted(k0_rho),
        k1: Constant::extracted(k1),
        k2: Constant::extracted(k2),
        lambda: Constant::extracted(lambda),
        b_hat: Constant::extracted(b_hat),
        b_hat_rho: Constant::extracted(b_hat_rho),
        c_hat: None,
    })
}
