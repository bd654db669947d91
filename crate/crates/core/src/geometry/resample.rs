use super::{Point, Surface, MIN_CURVE_VERTICES, MIN_PROFILE_VERTICES};
use crate::error::{Error, Result};

/// Redistributes vertices to (nearly) equal spacing close to `target_spacing`.
///
/// The polygon is interpolated by a C1 cubic Hermite spline in the chord
/// length parameter and sampled at equal parameter steps, so the output
/// stays within O(h^4) of the smooth curve through the input vertices.
pub fn resample(surface: &Surface, target_spacing: f64) -> Result<Surface> {
    let limit = surface.diameter() / 8.0;
    if !(target_spacing > 0.0) || target_spacing > limit {
        return Err(Error::ResampleTooCoarse {
            spacing: target_spacing,
            limit,
        });
    }
    let length = polygon_length(surface);
    let segments = (length / target_spacing).round().max(1.0) as usize;
    let count = if surface.is_closed() {
        segments.max(MIN_CURVE_VERTICES)
    } else {
        (segments + 1).max(MIN_PROFILE_VERTICES)
    };
    resample_to_count(surface, count)
}

/// Resamples to exactly `count` vertices (poles included for profiles).
pub fn resample_to_count(surface: &Surface, count: usize) -> Result<Surface> {
    let pts = surface.points();
    let n = pts.len();
    let m = surface.edge_count();
    let lengths: Vec<f64> = (0..m)
        .map(|e| {
            let (a, b) = surface.edge(e);
            (pts[b] - pts[a]).norm()
        })
        .collect();
    let total: f64 = lengths.iter().sum();
    let tangents: Vec<Point> = (0..n).map(|i| tangent(surface, i)).collect();

    let segments = if surface.is_closed() { count } else { count.saturating_sub(1) };
    if segments == 0 {
        return Err(Error::InvalidSurface("resample count too small".into()));
    }
    let step = total / segments as f64;
    let mut out = Vec::with_capacity(count);
    let mut e = 0;
    let mut start = 0.0;
    for k in 0..count {
        let s = k as f64 * step;
        while e + 1 < m && start + lengths[e] <= s {
            start += lengths[e];
            e += 1;
        }
        let (a, b) = surface.edge(e);
        let l = lengths[e];
        let t = ((s - start) / l).clamp(0.0, 1.0);
        out.push(hermite(pts[a], tangents[a], pts[b], tangents[b], l, t));
    }
    if !surface.is_closed() {
        out[0] = Point::new(0.0, pts[0].y);
        out[count - 1] = Point::new(0.0, pts[n - 1].y);
    }
    surface.with_points(out)
}

fn polygon_length(surface: &Surface) -> f64 {
    let pts = surface.points();
    (0..surface.edge_count())
        .map(|e| {
            let (a, b) = surface.edge(e);
            (pts[b] - pts[a]).norm()
        })
        .sum()
}

/// Unit-speed tangent estimate from the nonuniform three-point derivative.
fn tangent(surface: &Surface, i: usize) -> Point {
    let (p, c, q) = surface.stencil(i);
    let (la, lb) = ((c - p).norm(), (q - c).norm());
    let d = (q - c) * (la / (lb * (la + lb))) + (c - p) * (lb / (la * (la + lb)));
    d.normalize()
}

fn hermite(p0: Point, m0: Point, p1: Point, m1: Point, l: f64, t: f64) -> Point {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    p0 * h00 + m0 * (h10 * l) + p1 * h01 + m1 * (h11 * l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlaneCurve;
    use std::f64::consts::PI;

    #[test]
    fn uniform_circle_is_a_fixed_point() {
        let pts: Vec<Point> = (0..64)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 64.0;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let s: Surface = PlaneCurve::new(pts.clone()).unwrap().into();
        let r = resample_to_count(&s, 64).unwrap();
        for (a, b) in r.points().iter().zip(&pts) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn too_coarse_spacing_rejected() {
        let pts: Vec<Point> = (0..32)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 32.0;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let s: Surface = PlaneCurve::new(pts).unwrap().into();
        assert!(matches!(resample(&s, 0.5), Err(Error::ResampleTooCoarse { .. })));
    }
}
