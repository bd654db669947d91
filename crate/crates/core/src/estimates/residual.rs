//! Pointwise residuals of the parabolic inequalities for μ and ρ.
//!
//! The time derivative follows each vertex to the neighbouring samples by
//! closest-point projection; spatial terms use the stencils of the geometry
//! module on the refined field.

use super::report;
use super::tracking::{interpolate, project};
use crate::error::{Error, Result};
use crate::flow::{FlowTrace, Sample};
use crate::geometry::{scalar_gradient, scalar_laplacian};
use crate::inradius::{is_interior_contact, Side, INTERIOR_GAP};
use nalgebra::Vector3;
use rayon::prelude::*;
use std::ops::Range;

/// Minimum number of samples in a residual window.
pub const MIN_WINDOW: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    /// Evaluate every vertex regardless of contact type. Gradient terms
    /// whose denominator falls below `INTERIOR_GAP * H` are dropped.
    pub forced: bool,
    /// Largest contact displacement between neighbouring samples, in units
    /// of the mean vertex spacing.
    pub stability: f64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        ResidualOptions {
            forced: false,
            stability: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualRow {
    pub sample: usize,
    pub vertex: usize,
    pub t: f64,
    /// Mean vertex spacing at the sample.
    pub spacing: f64,
    /// Mean of the two sample gaps used by the time difference.
    pub dt: f64,
    pub mean_curvature: f64,
    pub eligible: bool,
    /// Parabolic residual; NaN where not eligible.
    pub residual: f64,
    /// First-order outer-side residual (ρ only).
    pub first_order: Option<f64>,
    /// `ω` (ρ only).
    pub omega: Option<f64>,
}

impl ResidualRow {
    /// Residual divided by `H^3`, which makes it scale invariant.
    pub fn normalized(&self) -> f64 {
        self.residual / self.mean_curvature.powi(3)
    }

    pub fn normalized_first_order(&self) -> Option<f64> {
        self.first_order.map(|v| v / self.mean_curvature.powi(3))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub side: Side,
    pub rows: Vec<ResidualRow>,
}

impl ResidualReport {
    pub fn eligible(&self) -> impl Iterator<Item = &ResidualRow> {
        self.rows.iter().filter(|r| r.eligible)
    }

    pub fn eligible_count(&self) -> usize {
        self.eligible().count()
    }

    /// Eligibility per row, in row order.
    pub fn mask(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.eligible).collect()
    }

    /// Fraction of eligible rows whose normalized residual (and first-order
    /// residual, when present) is within `tol`. `None` with no eligible rows.
    pub fn pass_fraction(&self, tol: &ToleranceModel) -> Option<f64> {
        let total = self.eligible_count();
        if total == 0 {
            return None;
        }
        let ok = self
            .eligible()
            .filter(|r| {
                let bound = tol.bound(r);
                r.normalized() <= bound && r.normalized_first_order().is_none_or(|v| v <= bound)
            })
            .count();
        Some(ok as f64 / total as f64)
    }

    pub fn max_abs_normalized(&self) -> f64 {
        self.eligible().map(|r| r.normalized().abs()).fold(0.0, f64::max)
    }
}

/// Allowed normalized residual `c (h H + Δt H^2) + floor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceModel {
    pub coefficient: f64,
    pub floor: f64,
}

impl Default for ToleranceModel {
    fn default() -> Self {
        ToleranceModel {
            coefficient: 1.0,
            floor: 1e-10,
        }
    }
}

impl ToleranceModel {
    pub fn scale(row: &ResidualRow) -> f64 {
        let h = row.mean_curvature;
        row.spacing * h + row.dt * h * h
    }

    pub fn bound(&self, row: &ResidualRow) -> f64 {
        self.coefficient * Self::scale(row) + self.floor
    }

    /// Smallest coefficient that covers the positive part of every eligible
    /// row: the tolerance an inequality check needs on this data.
    pub fn fit_upper<'a>(rows: impl IntoIterator<Item = &'a ResidualRow>) -> Self {
        let coefficient = rows
            .into_iter()
            .filter(|r| r.eligible)
            .map(|r| {
                let worst = r.normalized().max(r.normalized_first_order().unwrap_or(f64::NEG_INFINITY));
                worst.max(0.0) / Self::scale(r)
            })
            .fold(0.0, f64::max);
        ToleranceModel {
            coefficient,
            floor: 1e-10,
        }
    }

    /// Smallest coefficient that covers every eligible row, for a case whose
    /// exact residual is zero.
    pub fn fit<'a>(rows: impl IntoIterator<Item = &'a ResidualRow>) -> Self {
        let coefficient = rows
            .into_iter()
            .filter(|r| r.eligible)
            .map(|r| r.normalized().abs() / Self::scale(r))
            .fold(0.0, f64::max);
        ToleranceModel {
            coefficient,
            floor: 1e-10,
        }
    }
}

pub fn mu_evolution_residual(trace: &FlowTrace, window: Range<usize>) -> Result<ResidualReport> {
    mu_evolution_residual_with(trace, window, ResidualOptions::default())
}

pub fn mu_evolution_residual_with(trace: &FlowTrace, window: Range<usize>, opts: ResidualOptions) -> Result<ResidualReport> {
    residuals(trace, window, Side::Mu, opts)
}

pub fn rho_pde_residual(trace: &FlowTrace, window: Range<usize>) -> Result<ResidualReport> {
    residuals(trace, window, Side::Rho, ResidualOptions::default())
}

/// Derivative along, and principal curvature of, each principal direction.
/// Rotational symmetry makes every field constant along parallels.
fn directions(sample: &Sample, grad: &[f64], i: usize) -> Vec<(f64, f64)> {
    let g = &sample.geometry;
    let mut v = vec![(grad[i], g.kappa_along[i])];
    if let Some(across) = &g.kappa_across {
        v.push((0.0, across[i]));
    }
    v
}

fn stencil(sample: &Sample, i: usize) -> Vec<usize> {
    let n = sample.surface.len();
    if sample.surface.is_closed() {
        vec![(i + n - 1) % n, (i + 1) % n]
    } else {
        [i.checked_sub(1), (i + 1 < n).then_some(i + 1)].into_iter().flatten().collect()
    }
}

/// Whether vertex `j` and its stencil neighbours have interior contacts
/// within `reach` of `contact`.
fn same_branch(sample: &Sample, side: Side, j: usize, contact: Vector3<f64>, reach: f64) -> Result<bool> {
    let rep = report(sample, side)?;
    Ok(std::iter::once(j).chain(stencil(sample, j)).all(|k| {
        is_interior_contact(rep, &sample.geometry, k)
            && rep
                .contact_position(&sample.surface, k)
                .is_some_and(|c| (c - contact).norm() <= reach)
    }))
}

/// Tracked value of the side's field at a neighbouring sample, with the
/// nearest vertex there.
fn tracked(from: &Sample, i: usize, to: &Sample, side: Side) -> Result<Option<(f64, usize)>> {
    let x = from.surface.points()[i];
    let nu = from.geometry.normals[i];
    let Some(proj) = project(&to.surface, &to.geometry, x, nu) else {
        return Ok(None);
    };
    let field = &report(to, side)?.refined;
    Ok(Some((interpolate(&to.surface, &to.geometry, field, &proj), proj.nearest)))
}

fn residuals(trace: &FlowTrace, window: Range<usize>, side: Side, opts: ResidualOptions) -> Result<ResidualReport> {
    let end = window.end.min(trace.samples.len());
    let got = end.saturating_sub(window.start);
    if got < MIN_WINDOW {
        return Err(Error::WindowTooShort { got, min: MIN_WINDOW });
    }
    let mut rows = Vec::new();
    for s in window.start + 1..end - 1 {
        let (prev, cur, next) = (&trace.samples[s - 1], &trace.samples[s], &trace.samples[s + 1]);
        let g = &cur.geometry;
        let rep = report(cur, side)?;
        let field = &rep.refined;
        let lap = scalar_laplacian(&cur.surface, g, field)?;
        let grad = scalar_gradient(&cur.surface, g, field)?;
        let grad_h = scalar_gradient(&cur.surface, g, &g.mean_curvature)?;
        let (a, b) = (cur.t - prev.t, next.t - cur.t);
        let reach = opts.stability * g.spacing;

        let sample_rows: Vec<ResidualRow> = (0..g.len())
            .into_par_iter()
            .map(|i| -> Result<ResidualRow> {
                let h = g.mean_curvature[i];
                let mut row = ResidualRow {
                    sample: s,
                    vertex: i,
                    t: cur.t,
                    spacing: g.spacing,
                    dt: 0.5 * (a + b),
                    mean_curvature: h,
                    eligible: false,
                    residual: f64::NAN,
                    first_order: None,
                    omega: None,
                };
                if !opts.forced && !is_interior_contact(rep, g, i) {
                    return Ok(row);
                }
                let (Some((fm, jm)), Some((fp, jp))) = (tracked(cur, i, prev, side)?, tracked(cur, i, next, side)?) else {
                    return Ok(row);
                };
                if !opts.forced {
                    // every stencil involved, in space and time, must see the
                    // same contact branch
                    let Some(here) = rep.contact_position(&cur.surface, i) else {
                        return Ok(row);
                    };
                    let stable = same_branch(cur, side, i, here, reach)?
                        && same_branch(prev, side, jm, here, reach)?
                        && same_branch(next, side, jp, here, reach)?;
                    if !stable {
                        return Ok(row);
                    }
                }
                let v = field[i];
                let dt_v = super::centred(a, b, fm, v, fp);
                let a2 = g.norm_a_sq[i];
                let dirs = directions(cur, &grad, i);
                let cut = if opts.forced { INTERIOR_GAP * h } else { 0.0 };
                match side {
                    Side::Mu => {
                        let grad_term: f64 = dirs
                            .iter()
                            .filter(|(_, l)| v - l >= cut && v - l > 0.0)
                            .map(|(d, l)| 2.0 * d * d / (v - l))
                            .sum();
                        row.residual = dt_v - lap[i] - a2 * v + grad_term;
                    }
                    Side::Rho => {
                        let dh = [grad_h[i], 0.0];
                        let (mut quad, mut cross, mut weighted) = (0.0, 0.0, 0.0);
                        for (m, (d, l)) in dirs.iter().enumerate() {
                            let den = v + l;
                            if den < cut || den <= 0.0 {
                                continue;
                            }
                            quad += 2.0 * d * d / den;
                            cross += d * dh[m] / den;
                            weighted += 0.5 * h * d * d / (den * den);
                        }
                        row.residual = dt_v - lap[i] - a2 * v + quad;
                        row.first_order = Some(dt_v + 0.5 * h * v * v - cross - weighted);
                        row.omega = Some(lap[i] - quad - cross - weighted);
                    }
                }
                row.eligible = true;
                Ok(row)
            })
            .collect::<Result<_>>()?;
        rows.extend(sample_rows);
    }
    Ok(ResidualReport { side, rows })
}
