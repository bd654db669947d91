use crate::geometry::{GeometryData, Point, Surface};
use nalgebra::Vector3;
use std::f64::consts::PI;

/// Chord ratio `2<x - y, nu> / |x - y|^2` for a plane curve.
#[inline]
pub(crate) fn ratio_curve(x: Point, nu: Point, y: Point) -> f64 {
    let dx = x.x - y.x;
    let dy = x.y - y.y;
    2.0 * (dx * nu.x + dy * nu.y) / (dx * dx + dy * dy)
}

/// Chord ratio with the query at azimuth 0 and `y` on ring `(rj, zj)` at
/// the azimuth with cosine `c` and sine `s`.
#[inline]
pub(crate) fn ratio_axi(x: Point, nu: Point, rj: f64, zj: f64, c: f64, s: f64) -> f64 {
    let dr = x.x - rj * c;
    let dt = rj * s;
    let dz = x.y - zj;
    2.0 * (nu.x * dr + nu.y * dz) / (dr * dr + dt * dt + dz * dz)
}

/// The sampled candidate set for the sup: every vertex of a curve, or every
/// (ring, azimuth) pair of a surface of revolution.
pub(crate) struct Samples<'a> {
    pub surface: &'a Surface,
    pub pts: &'a [Point],
    pub normals: &'a [Point],
    /// Azimuthal samples per ring; 1 for curves.
    pub m: usize,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
    /// +1 for the inscribed side, -1 for the outer side.
    pub sign: f64,
}

impl<'a> Samples<'a> {
    pub fn new(surface: &'a Surface, geometry: &'a GeometryData, m: usize, sign: f64) -> Self {
        let (cos, sin) = azimuth_table(m);
        Samples {
            surface,
            pts: surface.points(),
            normals: &geometry.normals,
            m,
            cos,
            sin,
            sign,
        }
    }

    pub fn axisym(&self) -> bool {
        !self.surface.is_closed()
    }

    /// Number of azimuthal samples on ring `j` (poles are single points).
    pub fn ring_len(&self, j: usize) -> usize {
        if self.axisym() && (j == 0 || j + 1 == self.pts.len()) {
            1
        } else {
            self.m
        }
    }

    #[inline]
    pub fn ratio(&self, i: usize, j: usize, k: usize) -> f64 {
        let x = self.pts[i];
        let nu = self.normals[i];
        let r = if self.axisym() {
            ratio_axi(x, nu, self.pts[j].x, self.pts[j].y, self.cos[k], self.sin[k])
        } else {
            ratio_curve(x, nu, self.pts[j])
        };
        self.sign * r
    }

    /// Embedded position and unit normal of sample `(j, k)`.
    pub fn embed(&self, j: usize, k: usize) -> (Vector3<f64>, Vector3<f64>) {
        let p = self.pts[j];
        let n = self.normals[j];
        if self.axisym() {
            let (c, s) = (self.cos[k], self.sin[k]);
            (
                Vector3::new(p.x * c, p.x * s, p.y),
                Vector3::new(n.x * c, n.x * s, n.y),
            )
        } else {
            (Vector3::new(p.x, p.y, 0.0), Vector3::new(n.x, n.y, 0.0))
        }
    }

    pub fn flat(&self, j: usize, k: usize) -> usize {
        j * self.m + k
    }
}

/// Cosines and sines of `2 pi k / m`, mirrored so that the table is exactly
/// symmetric under `k -> m - k`.
pub(crate) fn azimuth_table(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut cos = vec![0.0; m];
    let mut sin = vec![0.0; m];
    for k in 0..=m / 2 {
        let phi = 2.0 * PI * k as f64 / m as f64;
        let (s, c) = phi.sin_cos();
        cos[k] = c;
        sin[k] = s;
        if k > 0 && k < m - k {
            cos[m - k] = c;
            sin[m - k] = -s;
        }
    }
    if m % 2 == 0 && m > 0 {
        cos[m / 2] = -1.0;
        sin[m / 2] = 0.0;
    }
    if m > 0 {
        cos[0] = 1.0;
        sin[0] = 0.0;
    }
    (cos, sin)
}

/// Running sup with the deterministic tie-break: the branch value (no index)
/// wins ties, otherwise the smallest flat sample index.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Best {
    pub value: f64,
    pub at: Option<(usize, usize)>,
    pub flat: usize,
}

impl Best {
    pub fn branch(value: f64) -> Self {
        Best {
            value,
            at: None,
            flat: usize::MAX,
        }
    }

    #[inline]
    pub fn offer(&mut self, value: f64, j: usize, k: usize, flat: usize) -> bool {
        if value > self.value || (value == self.value && self.at.is_some() && flat < self.flat) {
            self.value = value;
            self.at = Some((j, k));
            self.flat = flat;
            true
        } else {
            false
        }
    }
}

/// Exhaustive sup over all samples for query vertex `i`.
pub(crate) fn brute_query(s: &Samples, i: usize, start: Best) -> Best {
    let mut best = start;
    for j in 0..s.pts.len() {
        for k in 0..s.ring_len(j) {
            if j == i && k == 0 {
                continue;
            }
            let v = s.ratio(i, j, k);
            best.offer(v, j, k, s.flat(j, k));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn azimuth_table_is_symmetric() {
        let (c, s) = azimuth_table(64);
        for k in 1..64 {
            assert_eq!(c[k], c[64 - k]);
            assert_eq!(s[k], -s[64 - k]);
        }
        assert_eq!(c[32], -1.0);
    }

    #[test]
    fn ties_prefer_branch_then_smallest_index() {
        let mut b = Best::branch(1.0);
        assert!(!b.offer(1.0, 3, 0, 3));
        let mut b2 = Best::branch(0.5);
        assert!(b2.offer(1.0, 7, 0, 7));
        assert!(b2.offer(1.0, 2, 0, 2));
        assert!(!b2.offer(1.0, 5, 0, 5));
        assert_eq!(b2.at, Some((2, 0)));
    }
}
