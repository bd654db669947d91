//! Reciprocal inscribed radius μ and reciprocal outer radius ρ.
//!
//! For a vertex x with outward normal ν,
//!
//! ```text
//! μ(x) = max(λ_n(x), sup_y 2<x - y, ν> / |x - y|^2)
//! ρ(x) = max(0,      sup_y -2<x - y, ν> / |x - y|^2)
//! ```
//!
//! where y runs over every other vertex of a curve, or over a ring-by-azimuth
//! grid for a surface of revolution (the query sits at azimuth 0). λ_n enters
//! μ explicitly because a discrete sample never sees the limit y -> x.

mod fast;
mod kernel;
mod refine;

pub use refine::ContactPoint;

use crate::error::{Error, Result};
use crate::geometry::{GeometryData, Surface};
use fast::CurveGrid;
use nalgebra::Vector3;
use kernel::{brute_query, Best, Samples};
use rayon::prelude::*;
use std::io::Write;

/// Minimum azimuthal resolution for surfaces of revolution.
pub const MIN_AZIMUTHS: usize = 16;
/// Contacts closer than this fraction of H to the curvature branch are
/// treated as non-interior.
pub const INTERIOR_GAP: f64 = 0.05;
/// A sampled ratio must exceed λ_n by this relative margin to displace the
/// osculating branch. Chords to the two neighbours of a symmetric stencil
/// reproduce λ_n exactly in exact arithmetic; this keeps rounding from
/// deciding such ties.
pub const BRANCH_TIE: f64 = 1e-9;

fn branch_floor(lambda_n: f64) -> f64 {
    lambda_n + BRANCH_TIE * lambda_n.abs()
}

const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Inscribed side, μ.
    Mu,
    /// Outer side, ρ.
    Rho,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Mu => 1.0,
            Side::Rho => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Mu => "mu",
            Side::Rho => "rho",
        }
    }
}

/// Where the sup is attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contact {
    /// μ = λ_n: no sampled point beats the osculating sphere.
    Osculating,
    /// ρ = 0: the clamp wins.
    Clamped,
    /// Attained at ring `index`, azimuth sample `azimuth` (0 for curves).
    Vertex { index: usize, azimuth: usize },
}

impl Contact {
    pub fn index(&self) -> Option<usize> {
        match self {
            Contact::Vertex { index, .. } => Some(*index),
            _ => None,
        }
    }
}

/// Per-vertex μ or ρ with its contact data.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactReport {
    pub side: Side,
    /// Sampled value (the sup over the discrete sample set, with the λ_n
    /// branch or the clamp applied).
    pub values: Vec<f64>,
    /// `values` with the contact refined between samples. Equal to `values`
    /// wherever no refinement applies.
    pub refined: Vec<f64>,
    /// Unclamped sampled sup of the signed ratio, without the λ_n branch.
    pub raw_sup: Vec<f64>,
    /// Largest principal curvature λ_n at each vertex.
    pub lambda_n: Vec<f64>,
    pub contacts: Vec<Contact>,
    /// Refined contact point and normal, when a vertex contact was refined.
    pub contact_points: Vec<Option<ContactPoint>>,
    /// Z (μ side) or W (ρ side) at the attaining sampled pair; 0 for
    /// branch contacts.
    pub z_residual: Vec<f64>,
    /// Reflection defect at eligible vertices, see [`reflection_check`].
    pub reflection_defect: Vec<Option<f64>>,
    /// Azimuthal samples per ring (1 for curves).
    pub azimuths: usize,
}

impl ContactReport {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::MIN, f64::max)
    }

    /// Position in R^3 of the contact of vertex `i`: the refined point when
    /// available, else the attaining sample. `None` for branch contacts.
    pub fn contact_position(&self, surface: &Surface, i: usize) -> Option<Vector3<f64>> {
        if let Some(cp) = self.contact_points[i] {
            return Some(cp.position);
        }
        let Contact::Vertex { index, azimuth } = self.contacts[i] else {
            return None;
        };
        let p = surface.points()[index];
        Some(if surface.is_closed() {
            Vector3::new(p.x, p.y, 0.0)
        } else {
            let phi = 2.0 * std::f64::consts::PI * azimuth as f64 / self.azimuths as f64;
            Vector3::new(p.x * phi.cos(), p.x * phi.sin(), p.y)
        })
    }

    /// Writes the report as CSV with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_err = |e: csv::Error| Error::Parse {
            line: 0,
            message: format!("csv: {e}"),
        };
        w.write_record([
            "vertex",
            "mu_or_rho",
            "lambda_n",
            "contact_index",
            "z_residual",
            "reflection_defect",
        ])
        .map_err(to_err)?;
        for i in 0..self.len() {
            let contact = match self.contacts[i] {
                Contact::Osculating => "self".to_string(),
                Contact::Clamped => "clamped".to_string(),
                Contact::Vertex { index, .. } => index.to_string(),
            };
            let defect = self.reflection_defect[i]
                .map(|d| format!("{d:.16e}"))
                .unwrap_or_default();
            w.write_record([
                i.to_string(),
                format!("{:.16e}", self.values[i]),
                format!("{:.16e}", self.lambda_n[i]),
                contact,
                format!("{:.16e}", self.z_residual[i]),
                defect,
            ])
            .map_err(to_err)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Default azimuthal resolution `max(64, N/4)`, rounded up to even.
pub fn default_azimuths(n: usize) -> usize {
    let m = (n / 4).max(64);
    m + m % 2
}

fn azimuths_for(surface: &Surface, requested: Option<usize>) -> Result<usize> {
    match surface {
        Surface::Curve(_) => Ok(1),
        Surface::AxiSym(_) => {
            let m = requested.unwrap_or_else(|| default_azimuths(surface.len()));
            if m < MIN_AZIMUTHS {
                return Err(Error::ResolutionTooLow {
                    got: m,
                    min: MIN_AZIMUTHS,
                });
            }
            Ok(m)
        }
    }
}

fn check(surface: &Surface, geometry: &GeometryData) -> Result<()> {
    if geometry.len() != surface.len() {
        return Err(Error::FieldLength {
            got: geometry.len(),
            expected: surface.len(),
        });
    }
    Ok(())
}

/// Search configuration for the sup kernels.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions<'a> {
    /// Azimuthal samples per ring; defaults to [`default_azimuths`].
    pub azimuths: Option<usize>,
    /// Report from an earlier frame whose contacts seed the pruned search.
    pub previous: Option<&'a ContactReport>,
}

/// μ by exhaustive search over all samples.
pub fn mu_brute(surface: &Surface, geometry: &GeometryData) -> Result<ContactReport> {
    mu_brute_with(surface, geometry, SearchOptions::default())
}

pub fn mu_brute_with(surface: &Surface, geometry: &GeometryData, opts: SearchOptions) -> Result<ContactReport> {
    check(surface, geometry)?;
    let m = azimuths_for(surface, opts.azimuths)?;
    let s = Samples::new(surface, geometry, m, 1.0);
    let n = surface.len();
    let raw: Vec<Best> = (0..n)
        .into_par_iter()
        .map(|i| brute_query(&s, i, Best::branch(f64::NEG_INFINITY)))
        .collect();
    Ok(assemble(&s, geometry, Side::Mu, raw))
}

/// μ by the pruned search; identical output to [`mu_brute`].
pub fn mu_fast(surface: &Surface, geometry: &GeometryData) -> Result<ContactReport> {
    mu_fast_with(surface, geometry, SearchOptions::default())
}

pub fn mu_fast_with(surface: &Surface, geometry: &GeometryData, opts: SearchOptions) -> Result<ContactReport> {
    check(surface, geometry)?;
    let m = azimuths_for(surface, opts.azimuths)?;
    let s = Samples::new(surface, geometry, m, 1.0);
    let n = surface.len();
    let hint = |i: usize| -> Option<(usize, usize)> {
        let prev = opts.previous?;
        match prev.contacts.get(i)? {
            Contact::Vertex { index, azimuth } if *index < n && *azimuth < m => Some((*index, *azimuth)),
            _ => None,
        }
    };
    let starts: Vec<usize> = (0..n).step_by(CHUNK).collect();
    let grid = match surface {
        Surface::Curve(_) => Some(CurveGrid::new(surface.points())),
        Surface::AxiSym(_) => None,
    };
    let pad = 1e-12 * surface.diameter();
    let chunks: Vec<Vec<Best>> = starts
        .par_iter()
        .map(|&lo| {
            let hi = (lo + CHUNK).min(n);
            let mut out = Vec::with_capacity(hi - lo);
            let mut scratch = Vec::new();
            let mut last: Option<(usize, usize)> = None;
            for i in lo..hi {
                // The λ_n branch only enters in `assemble`; the search itself
                // starts from it so pruning is effective from the outset.
                let start = Best::branch(branch_floor(geometry.lambda_max(i)));
                let mut seeds: Vec<(usize, usize)> = Vec::with_capacity(6);
                for (j, k) in hint(i).into_iter().chain(last) {
                    seeds.push((j, k));
                    if j > 0 {
                        seeds.push((j - 1, k));
                    }
                    seeds.push((j + 1, k));
                }
                let best = match &grid {
                    Some(g) => {
                        let flat: Vec<usize> = seeds.iter().map(|&(j, _)| j % n).collect();
                        g.query(&s, i, start, &flat, &mut scratch)
                    }
                    None => fast::axisym_query(&s, i, start, &seeds, pad),
                };
                if best.at.is_some() {
                    last = best.at;
                }
                out.push(best);
            }
            out
        })
        .collect();
    let raw: Vec<Best> = chunks.into_iter().flatten().collect();
    Ok(assemble_fast(&s, geometry, raw))
}

/// ρ by exhaustive search (no pruning bound applies to the outer side).
pub fn rho(surface: &Surface, geometry: &GeometryData) -> Result<ContactReport> {
    rho_with(surface, geometry, SearchOptions::default())
}

pub fn rho_with(surface: &Surface, geometry: &GeometryData, opts: SearchOptions) -> Result<ContactReport> {
    check(surface, geometry)?;
    let m = azimuths_for(surface, opts.azimuths)?;
    let s = Samples::new(surface, geometry, m, -1.0);
    let n = surface.len();
    let raw: Vec<Best> = (0..n)
        .into_par_iter()
        .map(|i| brute_query(&s, i, Best::branch(f64::NEG_INFINITY)))
        .collect();
    Ok(assemble(&s, geometry, Side::Rho, raw))
}

/// Applies the λ_n branch (μ) or the clamp (ρ) to raw sample sups.
fn assemble(s: &Samples, geometry: &GeometryData, side: Side, raw: Vec<Best>) -> ContactReport {
    let n = raw.len();
    let mut values = Vec::with_capacity(n);
    let mut contacts = Vec::with_capacity(n);
    let mut raw_sup = Vec::with_capacity(n);
    for (i, b) in raw.iter().enumerate() {
        raw_sup.push(b.value);
        let (floor, branch) = match side {
            Side::Mu => (geometry.lambda_max(i), Contact::Osculating),
            Side::Rho => (0.0, Contact::Clamped),
        };
        let threshold = match side {
            Side::Mu => branch_floor(floor),
            Side::Rho => floor,
        };
        match b.at {
            Some((index, azimuth)) if b.value > threshold => {
                values.push(b.value);
                contacts.push(Contact::Vertex { index, azimuth });
            }
            _ => {
                values.push(floor);
                contacts.push(branch);
            }
        }
    }
    finish(s, geometry, side, values, contacts, raw_sup)
}

/// The pruned search starts from λ_n and never evaluates the sup below it,
/// so `raw_sup` is NaN wherever the osculating branch wins.
fn assemble_fast(s: &Samples, geometry: &GeometryData, raw: Vec<Best>) -> ContactReport {
    let n = raw.len();
    let mut values = Vec::with_capacity(n);
    let mut contacts = Vec::with_capacity(n);
    let mut raw_sup = Vec::with_capacity(n);
    for (i, b) in raw.iter().enumerate() {
        match b.at {
            Some((index, azimuth)) => {
                values.push(b.value);
                contacts.push(Contact::Vertex { index, azimuth });
                raw_sup.push(b.value);
            }
            None => {
                values.push(geometry.lambda_max(i));
                contacts.push(Contact::Osculating);
                raw_sup.push(f64::NAN);
            }
        }
    }
    finish(s, geometry, Side::Mu, values, contacts, raw_sup)
}

fn finish(
    s: &Samples,
    geometry: &GeometryData,
    side: Side,
    values: Vec<f64>,
    contacts: Vec<Contact>,
    raw_sup: Vec<f64>,
) -> ContactReport {
    let n = values.len();
    let sign = side.sign();
    let mut refined = values.clone();
    let mut contact_points = vec![None; n];
    let mut z_residual = vec![0.0; n];
    for i in 0..n {
        if let Contact::Vertex { index, azimuth } = contacts[i] {
            let (xp, xn) = s.embed(i, 0);
            let (yp, _) = s.embed(index, azimuth);
            let d = xp - yp;
            z_residual[i] = 0.5 * values[i] * d.norm_squared() - sign * d.dot(&xn);
            if let Some((v, point)) = refine::refine(s, i, index, azimuth, values[i]) {
                refined[i] = v;
                contact_points[i] = Some(point);
            }
        }
    }
    let lambda_n = (0..n).map(|i| geometry.lambda_max(i)).collect();
    let mut report = ContactReport {
        side,
        values,
        refined,
        raw_sup,
        lambda_n,
        contacts,
        contact_points,
        z_residual,
        reflection_defect: vec![None; n],
        azimuths: s.m,
    };
    report.reflection_defect = defects(s, geometry, &report);
    report
}

/// Whether vertex `i` has a strictly interior contact, the regime where the
/// field is locally smooth.
pub fn is_interior_contact(report: &ContactReport, geometry: &GeometryData, i: usize) -> bool {
    let h = geometry.mean_curvature[i];
    match report.side {
        Side::Mu => {
            matches!(report.contacts[i], Contact::Vertex { .. })
                && report.values[i] - report.lambda_n[i] >= INTERIOR_GAP * h
        }
        Side::Rho => {
            matches!(report.contacts[i], Contact::Vertex { .. })
                && report.values[i] >= INTERIOR_GAP * h
                && report.values[i] + geometry.lambda_min(i) >= INTERIOR_GAP * h
        }
    }
}

fn defects(s: &Samples, geometry: &GeometryData, report: &ContactReport) -> Vec<Option<f64>> {
    let sign = report.side.sign();
    (0..report.len())
        .map(|i| {
            if !is_interior_contact(report, geometry, i) {
                return None;
            }
            let Contact::Vertex { index, azimuth } = report.contacts[i] else {
                return None;
            };
            let (xp, xn) = s.embed(i, 0);
            let (yp, yn, value) = match report.contact_points[i] {
                Some(cp) => (cp.position, cp.normal, report.refined[i]),
                None => {
                    let (p, nn) = s.embed(index, azimuth);
                    (p, nn, report.values[i])
                }
            };
            let predicted = xn - (xp - yp) * (sign * value);
            Some((yn - predicted).norm())
        })
        .collect()
}

/// Reflection defect `|ν(ȳ) - (ν(x) - μ (x - ȳ))|` (with `+ρ` on the outer
/// side) at vertices with an interior contact; `None` elsewhere.
pub fn reflection_check(surface: &Surface, geometry: &GeometryData, report: &ContactReport) -> Result<Vec<Option<f64>>> {
    check(surface, geometry)?;
    if report.len() != surface.len() {
        return Err(Error::FieldLength {
            got: report.len(),
            expected: surface.len(),
        });
    }
    let s = Samples::new(surface, geometry, report.azimuths, report.side.sign());
    Ok(defects(&s, geometry, report))
}
