//! Sub-sample refinement of a vertex contact.
//!
//! The sampled sup jumps by O(h) whenever the contact moves to the next
//! vertex, which is fatal for second differences of the field. Fitting a
//! parabola through the ratio at the contact and its two neighbours recovers
//! the continuum sup up to O(h^3) and a contact point between samples.

use super::kernel::Samples;
use nalgebra::Vector3;

/// Refined sup and the interpolated contact point and normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPoint {
    pub position: Vector3<f64>,
    pub normal: Vector3<f64>,
}

/// Peak of the parabola through `(ta, fa), (0, f0), (tb, fb)` with
/// `ta < 0 < tb`, if it is concave with its vertex inside `[ta, tb]`.
fn parabola_peak(ta: f64, fa: f64, f0: f64, tb: f64, fb: f64) -> Option<(f64, f64)> {
    let spread = (fa - f0).abs().max((fb - f0).abs());
    if !(spread > 1e-12 * f0.abs()) {
        return None;
    }
    let sa = (fa - f0) / ta;
    let sb = (fb - f0) / tb;
    let a = (sb - sa) / (tb - ta);
    let b = sb - a * tb;
    if !(a < 0.0) {
        return None;
    }
    let t = -b / (2.0 * a);
    if t < ta || t > tb {
        return None;
    }
    Some((t, f0 - b * b / (4.0 * a)))
}

/// Quadratic Lagrange weights at `t` for nodes `ta, 0, tb`.
fn lagrange(ta: f64, tb: f64, t: f64) -> [f64; 3] {
    [
        t * (t - tb) / (ta * (ta - tb)),
        (t - ta) * (t - tb) / (ta * tb),
        t * (t - ta) / (tb * (tb - ta)),
    ]
}

/// Refines the contact `(j, k)` of query `i` whose sampled value is `f0`.
///
/// Returns `None` when the contact sits at a pole, next to the query, or
/// the local ratio profile is flat or not concave in either direction.
pub(crate) fn refine(s: &Samples, i: usize, j: usize, k: usize, f0: f64) -> Option<(f64, ContactPoint)> {
    let n = s.pts.len();
    let (jm, jp) = if s.axisym() {
        if j == 0 || j + 1 == n {
            return None;
        }
        (j - 1, j + 1)
    } else {
        ((j + n - 1) % n, (j + 1) % n)
    };
    let m = s.m;
    let near_azimuth = !s.axisym() || k <= 1 || k + 1 >= m;
    let ring_gap = if s.axisym() {
        i.abs_diff(j)
    } else {
        let d = i.abs_diff(j);
        d.min(n - d)
    };
    if ring_gap <= 1 && near_azimuth {
        return None;
    }

    let ta = -(s.pts[j] - s.pts[jm]).norm();
    let tb = (s.pts[jp] - s.pts[j]).norm();
    let kk = |jj: usize| if s.ring_len(jj) == 1 { 0 } else { k };
    let fa = s.ratio(i, jm, kk(jm));
    let fb = s.ratio(i, jp, kk(jp));
    let along = parabola_peak(ta, fa, f0, tb, fb);

    let (mut value, mut pos2, mut nor2) = (f0, s.pts[j], s.normals[j]);
    if let Some((t, peak)) = along {
        let w = lagrange(ta, tb, t);
        value = peak;
        pos2 = s.pts[jm] * w[0] + s.pts[j] * w[1] + s.pts[jp] * w[2];
        nor2 = (s.normals[jm] * w[0] + s.normals[j] * w[1] + s.normals[jp] * w[2]).normalize();
    }

    let mut phi = 2.0 * std::f64::consts::PI * k as f64 / m.max(1) as f64;
    let mut across = None;
    if s.axisym() {
        let rj = s.pts[j].x;
        let step = 2.0 * std::f64::consts::PI / m as f64;
        let (km, kp) = ((k + m - 1) % m, (k + 1) % m);
        let (ga, gb) = (s.ratio(i, j, km), s.ratio(i, j, kp));
        if !(j == i && (km == 0 || kp == 0)) {
            across = parabola_peak(-rj * step, ga, f0, rj * step, gb);
            if let Some((t, peak)) = across {
                value += peak - f0;
                phi += t / rj;
            }
        }
    }
    if along.is_none() && across.is_none() {
        return None;
    }

    let point = if s.axisym() {
        let (sn, cs) = phi.sin_cos();
        ContactPoint {
            position: Vector3::new(pos2.x * cs, pos2.x * sn, pos2.y),
            normal: Vector3::new(nor2.x * cs, nor2.x * sn, nor2.y),
        }
    } else {
        ContactPoint {
            position: Vector3::new(pos2.x, pos2.y, 0.0),
            normal: Vector3::new(nor2.x, nor2.y, 0.0),
        }
    };
    Some((value, point))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_of_exact_parabola() {
        let f = |t: f64| 2.0 - 3.0 * (t - 0.1) * (t - 0.1);
        let (t, v) = parabola_peak(-0.5, f(-0.5), f(0.0), 0.7, f(0.7)).unwrap();
        assert!((t - 0.1).abs() < 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn convex_or_flat_profiles_are_not_refined() {
        assert!(parabola_peak(-1.0, 2.0, 1.0, 1.0, 2.0).is_none());
        assert!(parabola_peak(-1.0, 1.0, 1.0, 1.0, 1.0).is_none());
    }

    #[test]
    fn lagrange_weights_interpolate_nodes() {
        assert_eq!(lagrange(-1.0, 2.0, 0.0), [0.0, 1.0, 0.0]);
        let w = lagrange(-1.0, 2.0, 0.3);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
