//! Following a point of the surface from one sample to the next.
//!
//! The flow moves points along their normals, and remeshing only slides
//! vertices tangentially, so a point at one sample corresponds to its
//! closest point on a neighbouring sample. Candidates whose normal disagrees
//! are skipped, which keeps a thin neck from projecting onto its far side.

use crate::geometry::{GeometryData, Point, Surface};

const NORMAL_AGREEMENT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    /// Edge holding the foot point.
    pub segment: usize,
    /// Position along the edge in `[0, 1]`.
    pub t: f64,
    pub distance: f64,
    /// Vertex of the edge nearest the foot point.
    pub nearest: usize,
}

/// Closest point of `surface` to `x` among edges whose interpolated normal
/// agrees with `normal`.
pub fn project(surface: &Surface, geometry: &GeometryData, x: Point, normal: Point) -> Option<Projection> {
    let pts = surface.points();
    let mut best: Option<Projection> = None;
    for e in 0..surface.edge_count() {
        let (a, b) = surface.edge(e);
        let d = pts[b] - pts[a];
        let len2 = d.norm_squared();
        let t = if len2 > 0.0 {
            ((x - pts[a]).dot(&d) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let dist = (pts[a] + d * t - x).norm();
        if best.is_some_and(|p| dist >= p.distance) {
            continue;
        }
        let nq = geometry.normals[a] * (1.0 - t) + geometry.normals[b] * t;
        if nq.dot(&normal) < NORMAL_AGREEMENT * nq.norm() {
            continue;
        }
        best = Some(Projection {
            segment: e,
            t,
            distance: dist,
            nearest: if t < 0.5 { a } else { b },
        });
    }
    best
}

/// Value of a vertex field at a projected point, by quadratic interpolation
/// in arclength over the edge and the neighbour on the nearer side.
pub fn interpolate(surface: &Surface, geometry: &GeometryData, field: &[f64], proj: &Projection) -> f64 {
    let n = surface.len();
    let closed = surface.is_closed();
    let (a, b) = surface.edge(proj.segment);
    let la = geometry.edge_lengths[proj.segment];
    let s = proj.t * la;
    let before = if closed { Some((a + n - 1) % n) } else { a.checked_sub(1) };
    let after = if closed { Some((b + 1) % n) } else { (b + 1 < n).then_some(b + 1) };
    let third = if proj.t < 0.5 {
        before.map(|c| (c, -geometry.edge_lengths[c])).or(after.map(|c| (c, la + geometry.edge_lengths[b])))
    } else {
        after.map(|c| (c, la + geometry.edge_lengths[b])).or(before.map(|c| (c, -geometry.edge_lengths[c])))
    };
    let Some((c, sc)) = third else {
        return field[a] * (1.0 - proj.t) + field[b] * proj.t;
    };
    let nodes = [(0.0, field[a]), (la, field[b]), (sc, field[c])];
    let mut value = 0.0;
    for (j, &(sj, fj)) in nodes.iter().enumerate() {
        let mut w = 1.0;
        for (m, &(sm, _)) in nodes.iter().enumerate() {
            if m != j {
                w *= (s - sm) / (sj - sm);
            }
        }
        value += w * fj;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_geometry;
    use crate::scenarios::{generate, ScenarioSpec};

    #[test]
    fn projection_onto_a_smaller_circle_is_radial() {
        let big = generate(&ScenarioSpec::Circle { radius: 1.0, n: 64 }).unwrap();
        let small = generate(&ScenarioSpec::Circle { radius: 0.9, n: 64 }).unwrap();
        let (gb, gs) = (build_geometry(&big).unwrap(), build_geometry(&small).unwrap());
        let x = big.points()[5];
        let p = project(&small, &gs, x, gb.normals[5]).unwrap();
        assert!((p.distance - 0.1).abs() < 1e-12);
        assert_eq!(p.nearest, 5);
        let angle: Vec<f64> = small.points().iter().map(|q| q.y.atan2(q.x)).collect();
        let v = interpolate(&small, &gs, &angle, &p);
        assert!((v - x.y.atan2(x.x)).abs() < 1e-12);
    }
}
