//! Pruned search for the inscribed-radius sup.
//!
//! A candidate `y` beats the current best value `b > 0` only if it lies in
//! the closed ball of radius `1/b` centred at `x - nu/b`. Buckets whose tight
//! bounding box misses that ball are skipped, and since the ball lies within
//! `2/b` of `x`, buckets visited in order of distance from `x` can stop there.

use super::kernel::{Best, Samples};
use crate::geometry::Point;

const SLACK: f64 = 1e-9;
const TARGET_PER_CELL: f64 = 32.0;

struct Cell {
    lo: Point,
    hi: Point,
    start: usize,
    end: usize,
}

/// Uniform bucket grid over curve vertices, stored in CSR form with a tight
/// bounding box per occupied cell.
pub(crate) struct CurveGrid {
    cells: Vec<Cell>,
    items: Vec<usize>,
    pad: f64,
}

fn box_distance(p: Point, lo: Point, hi: Point) -> f64 {
    let dx = (lo.x - p.x).max(0.0).max(p.x - hi.x);
    let dy = (lo.y - p.y).max(0.0).max(p.y - hi.y);
    (dx * dx + dy * dy).sqrt()
}

impl CurveGrid {
    pub fn new(pts: &[Point]) -> Self {
        let n = pts.len();
        let mut lo = pts[0];
        let mut hi = pts[0];
        for p in pts {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        let perimeter: f64 = (0..n).map(|i| (pts[(i + 1) % n] - pts[i]).norm()).sum();
        let cell = (TARGET_PER_CELL * perimeter / n as f64).max(1e-300);
        let key = |p: &Point| {
            (
                ((p.x - lo.x) / cell).floor() as i64,
                ((p.y - lo.y) / cell).floor() as i64,
            )
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (key(&pts[i]), i));
        let mut cells = Vec::new();
        let mut start = 0;
        while start < n {
            let k = key(&pts[order[start]]);
            let mut end = start;
            let (mut clo, mut chi) = (pts[order[start]], pts[order[start]]);
            while end < n && key(&pts[order[end]]) == k {
                clo = clo.inf(&pts[order[end]]);
                chi = chi.sup(&pts[order[end]]);
                end += 1;
            }
            cells.push(Cell {
                lo: clo,
                hi: chi,
                start,
                end,
            });
            start = end;
        }
        CurveGrid {
            cells,
            items: order,
            pad: 1e-12 * (hi - lo).norm(),
        }
    }

    pub fn query(&self, s: &Samples, i: usize, start: Best, seeds: &[usize], scratch: &mut Vec<(f64, usize)>) -> Best {
        let x = s.pts[i];
        let nu = s.normals[i];
        let mut best = start;
        for &j in seeds {
            if j != i && j < s.pts.len() {
                best.offer(s.ratio(i, j, 0), j, 0, j);
            }
        }
        // only buckets meeting the current ball can matter; visit those
        // near-to-far so the ball shrinks as early as possible
        let r0 = 1.0 / best.value;
        let reach0 = r0 * (1.0 + SLACK) + self.pad;
        let centre0 = x - nu * r0;
        scratch.clear();
        scratch.extend(self.cells.iter().enumerate().filter_map(|(c, cell)| {
            (box_distance(centre0, cell.lo, cell.hi) <= reach0).then(|| (box_distance(x, cell.lo, cell.hi), c))
        }));
        scratch.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(dist, c) in scratch.iter() {
            let r = 1.0 / best.value;
            let reach = r * (1.0 + SLACK) + self.pad;
            if dist > 2.0 * reach {
                break;
            }
            let cell = &self.cells[c];
            if box_distance(x - nu * r, cell.lo, cell.hi) > reach {
                continue;
            }
            for &j in &self.items[cell.start..cell.end] {
                if j != i {
                    best.offer(s.ratio(i, j, 0), j, 0, j);
                }
            }
        }
        best
    }
}

/// Ring-by-ring pruned search for a surface of revolution.
pub(crate) fn axisym_query(s: &Samples, i: usize, start: Best, seeds: &[(usize, usize)], pad: f64) -> Best {
    let x = s.pts[i];
    let nu = s.normals[i];
    let n = s.pts.len();
    let mut best = start;
    for &(j, k) in seeds {
        if j < n && k < s.ring_len(j) && !(j == i && k == 0) {
            best.offer(s.ratio(i, j, k), j, k, s.flat(j, k));
        }
    }
    for j in 0..n {
        let r = 1.0 / best.value;
        let reach = r * (1.0 + SLACK) + pad;
        let cr = x.x - r * nu.x;
        let cz = x.y - r * nu.y;
        let (rj, zj) = (s.pts[j].x, s.pts[j].y);
        let dz = zj - cz;
        let gap = rj - cr.abs();
        if gap * gap + dz * dz > reach * reach {
            continue;
        }
        let len = s.ring_len(j);
        if len == 1 {
            if j != i {
                best.offer(s.ratio(i, j, 0), j, 0, s.flat(j, 0));
            }
            continue;
        }
        // |y - c|^2 <= reach^2  <=>  cr cos(phi) >= threshold
        let threshold = (rj * rj + cr * cr + dz * dz - reach * reach) / (2.0 * rj);
        for k in 0..len {
            if (j == i && k == 0) || cr * s.cos[k] < threshold {
                continue;
            }
            best.offer(s.ratio(i, j, k), j, k, s.flat(j, k));
        }
    }
    best
}
