use super::{Point, Surface, SurfaceKind};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Relative edge length below which a mesh is considered degenerate.
pub const DEGENERATE_EDGE: f64 = 1e-14;

/// Per-vertex differential geometry of a discrete hypersurface.
///
/// For profiles, "along" is the meridional direction and "across" the
/// azimuthal one; both are principal directions of a surface of revolution.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryData {
    pub kind: SurfaceKind,
    /// Unit outward normal, `(x, y)` for curves and `(r, z)` for profiles.
    pub normals: Vec<Point>,
    /// Curvature of the polygon itself (meridional curvature for profiles).
    pub kappa_along: Vec<f64>,
    /// Azimuthal curvature `nu_r / r`, present for profiles only.
    pub kappa_across: Option<Vec<f64>>,
    pub mean_curvature: Vec<f64>,
    pub norm_a_sq: Vec<f64>,
    /// Dual-cell measure: length for curves, area for surfaces.
    pub weights: Vec<f64>,
    /// Cumulative polygon arclength at each vertex, starting at 0.
    pub arclength: Vec<f64>,
    /// Length of the polygon (closed perimeter or profile length).
    pub total_length: f64,
    /// `edge_lengths[e]` is the length of edge `(e, e + 1)`.
    pub edge_lengths: Vec<f64>,
    /// Mean edge length h.
    pub spacing: f64,
    pub min_spacing: f64,
}

impl GeometryData {
    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.kind.dimension()
    }

    pub fn lambda_min(&self, i: usize) -> f64 {
        match &self.kappa_across {
            Some(k) => self.kappa_along[i].min(k[i]),
            None => self.kappa_along[i],
        }
    }

    pub fn lambda_max(&self, i: usize) -> f64 {
        match &self.kappa_across {
            Some(k) => self.kappa_along[i].max(k[i]),
            None => self.kappa_along[i],
        }
    }

    /// Principal curvatures at `i` in ascending order.
    pub fn principal(&self, i: usize) -> Vec<f64> {
        match &self.kappa_across {
            Some(k) => {
                let (a, b) = (self.kappa_along[i], k[i]);
                if a <= b {
                    vec![a, b]
                } else {
                    vec![b, a]
                }
            }
            None => vec![self.kappa_along[i]],
        }
    }

    /// Sum of weights: perimeter or surface area.
    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Weighted sum of a per-vertex field.
    pub fn integrate(&self, field: &[f64]) -> f64 {
        self.weights.iter().zip(field).map(|(w, f)| w * f).sum()
    }

    pub fn max_mean_curvature(&self) -> f64 {
        self.mean_curvature.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn min_mean_curvature(&self) -> f64 {
        self.mean_curvature.iter().copied().fold(f64::MAX, f64::min)
    }
}

/// Curvature and unit tangent of the circle through three points.
fn circumcircle(p: Point, c: Point, q: Point) -> (f64, Point) {
    let a = c - p;
    let b = q - c;
    let (la, lb) = (a.norm(), b.norm());
    let cross = a.x * b.y - a.y * b.x;
    let kappa = 2.0 * cross / (la * lb * (a + b).norm());
    let t = (a * (lb / la) + b * (la / lb)).normalize();
    (kappa, t)
}

/// Builds normals, curvatures and quadrature weights for `surface`.
pub fn build_geometry(surface: &Surface) -> Result<GeometryData> {
    let pts = surface.points();
    let n = pts.len();
    let m = surface.edge_count();
    let diameter = surface.diameter();
    let threshold = DEGENERATE_EDGE * diameter;

    let mut edge_lengths = Vec::with_capacity(m);
    for e in 0..m {
        let (a, b) = surface.edge(e);
        let length = (pts[b] - pts[a]).norm();
        if !(length >= threshold) || length == 0.0 {
            return Err(Error::MeshDegenerate {
                edge: e,
                length,
                threshold,
            });
        }
        edge_lengths.push(length);
    }
    let total_length: f64 = edge_lengths.iter().sum();
    let mut arclength = Vec::with_capacity(n);
    let mut s = 0.0;
    for i in 0..n {
        arclength.push(s);
        if i < m {
            s += edge_lengths[i];
        }
    }

    let mut normals = Vec::with_capacity(n);
    let mut kappa_along = Vec::with_capacity(n);
    for i in 0..n {
        let (p, c, q) = surface.stencil(i);
        let (kappa, t) = circumcircle(p, c, q);
        normals.push(Point::new(t.y, -t.x));
        kappa_along.push(kappa);
    }

    let (kappa_across, weights) = match surface {
        Surface::Curve(_) => {
            let w = (0..n)
                .map(|i| 0.5 * (edge_lengths[(i + n - 1) % n] + edge_lengths[i]))
                .collect();
            (None, w)
        }
        Surface::AxiSym(_) => {
            let k: Vec<f64> = (0..n)
                .map(|i| {
                    if i == 0 || i == n - 1 {
                        kappa_along[i]
                    } else {
                        normals[i].x / pts[i].x
                    }
                })
                .collect();
            // area between the edge midpoints on either side of each vertex
            let mut w = vec![0.0; n];
            for e in 0..m {
                let (ra, rb) = (pts[e].x, pts[e + 1].x);
                let l = edge_lengths[e];
                w[e] += PI * (3.0 * ra + rb) * l / 4.0;
                w[e + 1] += PI * (ra + 3.0 * rb) * l / 4.0;
            }
            (Some(k), w)
        }
    };

    let mut mean_curvature = Vec::with_capacity(n);
    let mut norm_a_sq = Vec::with_capacity(n);
    for i in 0..n {
        let (h, a2) = match &kappa_across {
            Some(k) => (
                kappa_along[i] + k[i],
                kappa_along[i] * kappa_along[i] + k[i] * k[i],
            ),
            None => (kappa_along[i], kappa_along[i] * kappa_along[i]),
        };
        if !(h > 0.0) {
            return Err(Error::NotMeanConvex {
                vertex: i,
                value: h,
            });
        }
        mean_curvature.push(h);
        norm_a_sq.push(a2);
    }

    let min_spacing = edge_lengths.iter().copied().fold(f64::MAX, f64::min);
    Ok(GeometryData {
        kind: surface.kind(),
        normals,
        kappa_along,
        kappa_across,
        mean_curvature,
        norm_a_sq,
        weights,
        arclength,
        total_length,
        spacing: total_length / m as f64,
        min_spacing,
        edge_lengths,
    })
}

fn check_len(field: &[f64], geometry: &GeometryData) -> Result<()> {
    if field.len() != geometry.len() {
        return Err(Error::FieldLength {
            got: field.len(),
            expected: geometry.len(),
        });
    }
    Ok(())
}

/// Edge lengths before and after vertex `i`, or `None` at a profile pole.
fn side_lengths(geometry: &GeometryData, i: usize) -> Option<(f64, f64)> {
    let n = geometry.len();
    let el = &geometry.edge_lengths;
    match geometry.kind {
        SurfaceKind::Curve => Some((el[(i + n - 1) % n], el[i])),
        SurfaceKind::AxiSym => {
            if i == 0 || i == n - 1 {
                None
            } else {
                Some((el[i - 1], el[i]))
            }
        }
    }
}

/// Derivative of `field` along the polygon, by the nonuniform centered
/// three-point formula.
///
/// For profiles this is the meridional derivative; the azimuthal derivative
/// of an axisymmetric field vanishes and is not stored. Poles get 0.
pub fn scalar_gradient(surface: &Surface, geometry: &GeometryData, field: &[f64]) -> Result<Vec<f64>> {
    check_len(field, geometry)?;
    let n = field.len();
    Ok((0..n)
        .map(|i| {
            let Some((la, lb)) = side_lengths(geometry, i) else {
                return 0.0;
            };
            let (prev, next) = surface.neighbors(i);
            let (um, u, up) = (field[prev.unwrap()], field[i], field[next.unwrap()]);
            (la / (lb * (la + lb))) * (up - u) + (lb / (la * (la + lb))) * (u - um)
        })
        .collect())
}

/// Discrete Laplace-Beltrami operator of an (axisymmetric) scalar field.
///
/// The operator is the lumped finite-element Laplacian, so
/// `sum_i w_i (Lap u)_i v_i = -dirichlet_form(u, v)` holds to rounding.
pub fn scalar_laplacian(surface: &Surface, geometry: &GeometryData, field: &[f64]) -> Result<Vec<f64>> {
    check_len(field, geometry)?;
    let n = field.len();
    let pts = surface.points();
    let el = &geometry.edge_lengths;
    let mut out = vec![0.0; n];
    for e in 0..surface.edge_count() {
        let (a, b) = surface.edge(e);
        let flux = edge_weight(surface, pts, e) * (field[b] - field[a]) / el[e];
        out[a] += flux;
        out[b] -= flux;
    }
    for (o, w) in out.iter_mut().zip(&geometry.weights) {
        *o /= w;
    }
    Ok(out)
}

fn edge_weight(surface: &Surface, pts: &[Point], e: usize) -> f64 {
    match surface {
        Surface::Curve(_) => 1.0,
        Surface::AxiSym(_) => PI * (pts[e].x + pts[e + 1].x),
    }
}

/// `int <grad u, grad v>` with piecewise-linear fields on the polygon edges.
pub fn dirichlet_form(surface: &Surface, geometry: &GeometryData, u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(u, geometry)?;
    check_len(v, geometry)?;
    let pts = surface.points();
    let mut sum = 0.0;
    for e in 0..surface.edge_count() {
        let (a, b) = surface.edge(e);
        sum += edge_weight(surface, pts, e) * (u[b] - u[a]) * (v[b] - v[a]) / geometry.edge_lengths[e];
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AxiSymSurface, PlaneCurve};

    fn circle(n: usize, r: f64) -> Surface {
        let pts = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        PlaneCurve::new(pts).unwrap().into()
    }

    fn sphere(n: usize, r: f64) -> Surface {
        let pts = (0..n)
            .map(|k| {
                let a = -PI / 2.0 + PI * k as f64 / (n - 1) as f64;
                let x = if k == 0 || k == n - 1 { 0.0 } else { r * a.cos() };
                Point::new(x, r * a.sin())
            })
            .collect();
        AxiSymSurface::new(pts).unwrap().into()
    }

    #[test]
    fn circle_curvature_and_normals() {
        let s = circle(256, 1.0);
        let g = build_geometry(&s).unwrap();
        for (i, p) in s.points().iter().enumerate() {
            assert!((g.kappa_along[i] - 1.0).abs() < 1e-12);
            assert!((g.normals[i] - p).norm() < 1e-12);
            assert!((g.normals[i].norm() - 1.0).abs() < 1e-12);
        }
        let perimeter: f64 = g.edge_lengths.iter().sum();
        assert!((g.total_measure() - perimeter).abs() < 1e-12 * perimeter);
    }

    #[test]
    fn sphere_weights_sum_to_polyhedral_area() {
        let s = sphere(101, 2.0);
        let g = build_geometry(&s).unwrap();
        let area = match &s {
            Surface::AxiSym(a) => a.area(),
            _ => unreachable!(),
        };
        assert!((g.total_measure() - area).abs() < 1e-10 * area);
        for i in 0..s.len() {
            assert!((g.mean_curvature[i] - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn degenerate_edge_rejected() {
        let mut pts: Vec<Point> = circle(16, 1.0).points().to_vec();
        pts[1] = pts[0] + Point::new(1e-16, 0.0);
        let s = Surface::Curve(PlaneCurve { vertices: pts });
        assert!(matches!(build_geometry(&s), Err(Error::MeshDegenerate { edge: 0, .. })));
    }

    #[test]
    fn laplacian_duality_on_profile() {
        let s = sphere(41, 1.0);
        let g = build_geometry(&s).unwrap();
        let u: Vec<f64> = s.points().iter().map(|p| p.y * p.y + 0.3 * p.y).collect();
        let v: Vec<f64> = s.points().iter().map(|p| (2.0 * p.y).sin()).collect();
        let lap = scalar_laplacian(&s, &g, &u).unwrap();
        let lhs: f64 = (0..u.len()).map(|i| g.weights[i] * lap[i] * v[i]).sum();
        let rhs = -dirichlet_form(&s, &g, &u, &v).unwrap();
        assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0));
    }
}
