//! Integrated form of the auxiliary inequality for μ, tested against a
//! nonnegative weight η supported where the contact is interior.

use super::EstimateConstants;
use crate::error::{Error, Result};
use crate::geometry::{dirichlet_form, scalar_gradient, GeometryData, Surface};
use crate::inradius::{is_interior_contact, ContactReport, Side};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxSlack {
    /// Value of the right-hand side; the inequality claims it is `>= 0`.
    pub slack: f64,
    /// `-∫<∇η,∇μ>`, the zeroth-order term, the `DμDH` term and the
    /// squared-gradient term, in that order.
    pub terms: [f64; 4],
    pub eta_max: f64,
    /// `∫_{η>0} H^3`, the natural size of each term per unit η.
    pub scale: f64,
}

/// Vertices where η may be positive.
pub fn support_mask(mu: &ContactReport, geometry: &GeometryData) -> Vec<bool> {
    (0..mu.len()).map(|i| is_interior_contact(mu, geometry, i)).collect()
}

/// `eta` with every value outside `mask` set to 0.
pub fn mask_to_support(eta: &[f64], mask: &[bool]) -> Vec<f64> {
    eta.iter().zip(mask).map(|(&e, &m)| if m { e } else { 0.0 }).collect()
}

/// Tolerance at refinement `level` (0 for the coarsest), halving per level.
pub fn aux_tolerance(slack: &AuxSlack, level: u32) -> f64 {
    5e-2 * slack.eta_max * slack.scale.max(f64::MIN_POSITIVE) * 0.5f64.powi(level as i32)
}

pub fn aux_integral_check(
    surface: &Surface,
    geometry: &GeometryData,
    mu: &ContactReport,
    constants: &EstimateConstants,
    eta: &[f64],
) -> Result<AuxSlack> {
    let n = geometry.len();
    if mu.side != Side::Mu {
        return Err(Error::PreconditionViolated("the auxiliary inequality needs the mu report".into()));
    }
    for len in [mu.len(), eta.len()] {
        if len != n {
            return Err(Error::FieldLength { got: len, expected: n });
        }
    }
    if let Some(i) = eta.iter().position(|e| !(*e >= 0.0)) {
        return Err(Error::PreconditionViolated(format!("test function negative at vertex {i}")));
    }
    let mask = support_mask(mu, geometry);
    if let Some(i) = (0..n).find(|&i| eta[i] > 0.0 && !mask[i]) {
        return Err(Error::SupportViolation { vertex: i });
    }

    let field = &mu.refined;
    let nf = constants.dimension as f64;
    let eps = constants.epsilon.value;
    let k1 = constants.k1.value;
    let grad = scalar_gradient(surface, geometry, field)?;
    let grad_h = scalar_gradient(surface, geometry, &geometry.mean_curvature)?;

    let t1 = -dirichlet_form(surface, geometry, eta, field)?;
    let (mut t2, mut t3, mut t4, mut scale) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        if eta[i] == 0.0 {
            continue;
        }
        let w = geometry.weights[i] * eta[i];
        let m = field[i];
        let h = geometry.mean_curvature[i];
        let a2 = geometry.norm_a_sq[i];
        let big = nf.powi(3) * (nf * eps * m + k1);
        scale += geometry.weights[i] * h.powi(3);
        t2 += 0.5 * w * (a2 * m - h * m * m + big * m * m);
        // only the meridian direction carries a derivative
        let den = m - geometry.kappa_along[i];
        t3 += w * grad[i] * grad_h[i] / den;
        t4 += 0.5 * w * (h + big) * grad[i] * grad[i] / (den * den);
    }
    Ok(AuxSlack {
        slack: t1 + t2 + t3 + t4,
        terms: [t1, t2, t3, t4],
        eta_max: eta.iter().copied().fold(0.0, f64::max),
        scale,
    })
}
