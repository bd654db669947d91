//! Pointwise pinching functions.

use super::EstimateConstants;
use crate::error::{Error, Result};
use crate::geometry::GeometryData;
use crate::inradius::{ContactReport, Side};

/// `H^{σ-1} (μ - (1+δ) H) - k` on the inner side, `H^{σ-1} (ρ - δ H) - k`
/// on the outer side.
pub fn pinch_value(side: Side, value: f64, h: f64, delta: f64, sigma: f64, k: f64) -> f64 {
    let excess = match side {
        Side::Mu => value - (1.0 + delta) * h,
        Side::Rho => value - delta * h,
    };
    h.powf(sigma - 1.0) * excess - k
}

/// `f_σ`, `f_{σ,k}` and their positive parts (`g` on the outer side).
#[derive(Debug, Clone, PartialEq)]
pub struct PinchFields {
    pub side: Side,
    pub sigma: f64,
    pub k: f64,
    pub f: Vec<f64>,
    pub f_plus: Vec<f64>,
    pub f_k: Vec<f64>,
    pub f_k_plus: Vec<f64>,
}

pub fn pinch_fields(geometry: &GeometryData, contact: &ContactReport, constants: &EstimateConstants, side: Side) -> Result<PinchFields> {
    if contact.side != side {
        return Err(Error::PreconditionViolated(format!(
            "expected a {} report, got {}",
            side.name(),
            contact.side.name()
        )));
    }
    if contact.len() != geometry.len() {
        return Err(Error::FieldLength {
            got: contact.len(),
            expected: geometry.len(),
        });
    }
    let delta = constants.delta.value;
    let sigma = constants.sigma.value;
    let k0 = constants.k0_for(side);
    let k = constants.level.value;
    let n = geometry.len();
    let mut f = Vec::with_capacity(n);
    let mut f_k = Vec::with_capacity(n);
    for i in 0..n {
        let h = geometry.mean_curvature[i];
        if !(h > 0.0) {
            return Err(Error::NotMeanConvex { vertex: i, value: h });
        }
        let base = pinch_value(side, contact.refined[i], h, delta, sigma, 0.0);
        f.push(base - k0);
        f_k.push(base - k);
    }
    let plus = |v: &[f64]| v.iter().map(|x| x.max(0.0)).collect::<Vec<_>>();
    Ok(PinchFields {
        side,
        sigma,
        k,
        f_plus: plus(&f),
        f_k_plus: plus(&f_k),
        f,
        f_k,
    })
}
