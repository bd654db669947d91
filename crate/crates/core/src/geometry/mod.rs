//! Discrete hypersurfaces and their differential geometry.
//!
//! Two representations are supported:
//!
//! * [`PlaneCurve`]: a closed, counterclockwise, simple polygon in the plane
//!   (hypersurface dimension n = 1).
//! * [`AxiSymSurface`]: the profile `(r, z)` of a closed surface of revolution
//!   about the z-axis (n = 2). The profile runs from the south pole to the
//!   north pole, both endpoints lying exactly on the axis.
//!
//! Normals always point out of the enclosed region. Mean curvature is the sum
//! of the principal curvatures, so a round sphere of radius R has H = n/R.

mod differential;
mod intersect;
pub mod io;
mod resample;

pub use differential::{
    build_geometry, dirichlet_form, scalar_gradient, scalar_laplacian, GeometryData,
};
pub use intersect::find_self_intersection;
pub use resample::{resample, resample_to_count};

use crate::error::{Error, Result};
use nalgebra::Vector2;

/// A point in the plane of a curve, or in the `(r, z)` meridian half-plane.
pub type Point = Vector2<f64>;

/// Minimum vertex count for a closed curve.
pub const MIN_CURVE_VERTICES: usize = 8;
/// Minimum vertex count for an axisymmetric profile (poles included).
pub const MIN_PROFILE_VERTICES: usize = 5;

/// Closed counterclockwise polygon sampling a plane curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurve {
    vertices: Vec<Point>,
}

/// Profile of a surface of revolution about the z-axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiSymSurface {
    profile: Vec<Point>,
}

/// Either kind of discrete hypersurface.
#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    Curve(PlaneCurve),
    AxiSym(AxiSymSurface),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Curve,
    AxiSym,
}

impl SurfaceKind {
    /// Hypersurface dimension n.
    pub fn dimension(self) -> usize {
        match self {
            SurfaceKind::Curve => 1,
            SurfaceKind::AxiSym => 2,
        }
    }
}

pub(crate) fn signed_area(points: &[Point]) -> f64 {
    let n = points.len();
    let mut twice = 0.0;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    0.5 * twice
}

pub(crate) fn diameter_estimate(points: &[Point]) -> f64 {
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (hi - lo).norm()
}

impl PlaneCurve {
    /// Builds a curve and checks vertex count, orientation and simplicity.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < MIN_CURVE_VERTICES {
            return Err(Error::InvalidSurface(format!(
                "closed curve needs at least {MIN_CURVE_VERTICES} vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidSurface("non-finite coordinate".into()));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidSurface(format!(
                    "vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        if signed_area(&vertices) <= 0.0 {
            return Err(Error::InvalidSurface(
                "curve must be counterclockwise (positive signed area)".into(),
            ));
        }
        if let Some((first, second)) = intersect::first_crossing(&vertices, true) {
            return Err(Error::SelfIntersection { first, second });
        }
        Ok(PlaneCurve { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm())
            .sum()
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }
}

impl AxiSymSurface {
    /// Builds a profile and checks the axis conditions and simplicity.
    ///
    /// Endpoints must lie exactly on the axis, interior radii must be positive
    /// and the profile must meet the axis orthogonally: the end segments may
    /// tilt by at most `|dz/ds| <= 0.05`.
    pub fn new(profile: Vec<Point>) -> Result<Self> {
        let n = profile.len();
        if n < MIN_PROFILE_VERTICES {
            return Err(Error::InvalidSurface(format!(
                "profile needs at least {MIN_PROFILE_VERTICES} vertices, got {n}"
            )));
        }
        if profile.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidSurface("non-finite coordinate".into()));
        }
        if profile[0].x != 0.0 || profile[n - 1].x != 0.0 {
            return Err(Error::InvalidSurface(
                "profile endpoints must lie on the axis (r = 0)".into(),
            ));
        }
        if let Some(i) = (1..n - 1).find(|&i| profile[i].x <= 0.0) {
            return Err(Error::InvalidSurface(format!(
                "interior profile vertex {i} has r <= 0"
            )));
        }
        if profile[0].y >= profile[n - 1].y {
            return Err(Error::InvalidSurface(
                "profile must run from the south pole to the north pole".into(),
            ));
        }
        for i in 0..n - 1 {
            if profile[i] == profile[i + 1] {
                return Err(Error::InvalidSurface(format!(
                    "vertices {i} and {} coincide",
                    i + 1
                )));
            }
        }
        // The end segment's slope relative to the axis normal; a C1 cap has
        // dz/ds = O(h), so the bound scales with the spacing.
        for (a, b) in [(profile[0], profile[1]), (profile[n - 1], profile[n - 2])] {
            let d = b - a;
            let slope = d.y.abs() / d.norm();
            if slope > 0.05 && slope > 2.0 * d.norm() / diameter_estimate(&profile) {
                return Err(Error::InvalidSurface(format!(
                    "profile meets the axis at |dz/ds| = {slope:.3}, expected orthogonal"
                )));
            }
        }
        if let Some((first, second)) = intersect::first_crossing(&profile, false) {
            return Err(Error::SelfIntersection { first, second });
        }
        Ok(AxiSymSurface { profile })
    }

    pub fn profile(&self) -> &[Point] {
        &self.profile
    }

    /// Area of the polyhedral surface of revolution (sum of frusta).
    pub fn area(&self) -> f64 {
        self.profile
            .windows(2)
            .map(|w| std::f64::consts::PI * (w[0].x + w[1].x) * (w[1] - w[0]).norm())
            .sum()
    }

    pub fn profile_length(&self) -> f64 {
        self.profile.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

impl Surface {
    pub fn kind(&self) -> SurfaceKind {
        match self {
            Surface::Curve(_) => SurfaceKind::Curve,
            Surface::AxiSym(_) => SurfaceKind::AxiSym,
        }
    }

    pub fn dimension(&self) -> usize {
        self.kind().dimension()
    }

    pub fn points(&self) -> &[Point] {
        match self {
            Surface::Curve(c) => &c.vertices,
            Surface::AxiSym(s) => &s.profile,
        }
    }

    pub fn len(&self) -> usize {
        self.points().len()
    }

    pub fn is_empty(&self) -> bool {
        self.points().is_empty()
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Surface::Curve(_))
    }

    /// Number of polygon edges (closed curves wrap around, profiles do not).
    pub fn edge_count(&self) -> usize {
        match self {
            Surface::Curve(c) => c.vertices.len(),
            Surface::AxiSym(s) => s.profile.len() - 1,
        }
    }

    /// Endpoint indices of edge `e`.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        (e, (e + 1) % self.len())
    }

    /// Perimeter (n = 1) or surface area (n = 2).
    pub fn measure(&self) -> f64 {
        match self {
            Surface::Curve(c) => c.perimeter(),
            Surface::AxiSym(s) => s.area(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Surface::Curve(c) => diameter_estimate(&c.vertices),
            Surface::AxiSym(s) => {
                // include the mirrored half so the estimate reflects the 3D body
                let rmax = s.profile.iter().map(|p| p.x).fold(0.0, f64::max);
                let zlen = s.profile[s.profile.len() - 1].y - s.profile[0].y;
                (4.0 * rmax * rmax + zlen * zlen).sqrt()
            }
        }
    }

    /// Rebuilds a surface of the same kind from new points, re-validating.
    pub fn with_points(&self, points: Vec<Point>) -> Result<Surface> {
        match self {
            Surface::Curve(_) => PlaneCurve::new(points).map(Surface::Curve),
            Surface::AxiSym(_) => AxiSymSurface::new(points).map(Surface::AxiSym),
        }
    }

    /// Applies a similarity `p -> scale * R(angle) p + shift` to a curve, or
    /// a scaling plus axial shift to a profile (rotations would leave the axis).
    pub fn transformed(&self, scale: f64, angle: f64, shift: Point) -> Result<Surface> {
        let (s, c) = angle.sin_cos();
        let pts = match self {
            Surface::Curve(curve) => curve
                .vertices
                .iter()
                .map(|p| Point::new(c * p.x - s * p.y, s * p.x + c * p.y) * scale + shift)
                .collect(),
            Surface::AxiSym(surf) => surf
                .profile
                .iter()
                .map(|p| Point::new(p.x * scale, p.y * scale + shift.y))
                .collect(),
        };
        self.with_points(pts)
    }

    /// Neighbouring vertices of `i`, with the axis mirror image standing in
    /// for the missing neighbour at the poles of a profile.
    pub(crate) fn stencil(&self, i: usize) -> (Point, Point, Point) {
        let pts = self.points();
        let n = pts.len();
        match self {
            Surface::Curve(_) => (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]),
            Surface::AxiSym(_) => {
                if i == 0 {
                    let q = pts[1];
                    (Point::new(-q.x, q.y), pts[0], q)
                } else if i == n - 1 {
                    let q = pts[n - 2];
                    (q, pts[n - 1], Point::new(-q.x, q.y))
                } else {
                    (pts[i - 1], pts[i], pts[i + 1])
                }
            }
        }
    }

    /// Indices of the previous and next vertex along the polygon, if any.
    pub(crate) fn neighbors(&self, i: usize) -> (Option<usize>, Option<usize>) {
        let n = self.len();
        match self {
            Surface::Curve(_) => (Some((i + n - 1) % n), Some((i + 1) % n)),
            Surface::AxiSym(_) => (
                if i > 0 { Some(i - 1) } else { None },
                if i + 1 < n { Some(i + 1) } else { None },
            ),
        }
    }
}

impl From<PlaneCurve> for Surface {
    fn from(c: PlaneCurve) -> Self {
        Surface::Curve(c)
    }
}

impl From<AxiSymSurface> for Surface {
    fn from(s: AxiSymSurface) -> Self {
        Surface::AxiSym(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(n: usize) -> Vec<Point> {
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point::new(t.cos(), t.sin())
            })
            .collect()
    }

    #[test]
    fn rejects_clockwise_curves() {
        let mut pts = circle(16);
        pts.reverse();
        assert!(matches!(PlaneCurve::new(pts), Err(Error::InvalidSurface(_))));
    }

    #[test]
    fn rejects_too_few_vertices() {
        assert!(PlaneCurve::new(circle(7)).is_err());
    }

    #[test]
    fn rejects_bow_tie() {
        let mut pts = circle(16);
        pts.swap(3, 11);
        assert!(PlaneCurve::new(pts).is_err());
    }

    #[test]
    fn profile_must_touch_axis() {
        let pts: Vec<Point> = (0..9)
            .map(|k| {
                let a = -PI / 2.0 + PI * k as f64 / 8.0;
                Point::new(a.cos().max(0.0) + 0.1, a.sin())
            })
            .collect();
        assert!(AxiSymSurface::new(pts).is_err());
    }
}
