use super::{Point, Surface};

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Returns the first pair of non-adjacent edges that intersect, if any.
///
/// For profiles, an interior vertex on or across the axis is reported as an
/// intersection of its edge with itself. Uses a uniform bucket grid so the
/// expected cost is linear in the number of edges.
pub fn find_self_intersection(surface: &Surface) -> Option<(usize, usize)> {
    first_crossing(surface.points(), surface.is_closed())
}

pub(crate) fn first_crossing(pts: &[Point], closed: bool) -> Option<(usize, usize)> {
    let n = pts.len();
    let m = if closed { n } else { n - 1 };
    let edge = |e: usize| (e, (e + 1) % n);
    if !closed {
        if let Some(i) = (1..n - 1).find(|&i| pts[i].x <= 0.0) {
            return Some((i - 1, i - 1));
        }
    }
    let mean_edge = (0..m)
        .map(|e| {
            let (a, b) = edge(e);
            (pts[b] - pts[a]).norm()
        })
        .sum::<f64>()
        / m as f64;
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let mut cell = 2.0 * mean_edge;
    if !(cell > 0.0) {
        return None;
    }
    // keep the grid at most ~4 cells per edge
    let span = hi - lo;
    let area_cells = (span.x / cell + 1.0) * (span.y / cell + 1.0);
    if area_cells > 4.0 * m as f64 {
        cell *= (area_cells / (4.0 * m as f64)).sqrt();
    }
    let nx = (span.x / cell) as usize + 1;
    let ny = (span.y / cell) as usize + 1;
    let key = |p: Point| {
        (
            (((p.x - lo.x) / cell) as usize).min(nx - 1),
            (((p.y - lo.y) / cell) as usize).min(ny - 1),
        )
    };
    let range = |e: usize| {
        let (a, b) = edge(e);
        let (ka, kb) = (key(pts[a]), key(pts[b]));
        (ka.0.min(kb.0), ka.0.max(kb.0), ka.1.min(kb.1), ka.1.max(kb.1))
    };
    let mut counts = vec![0usize; nx * ny + 1];
    for e in 0..m {
        let (x0, x1, y0, y1) = range(e);
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                counts[iy * nx + ix + 1] += 1;
            }
        }
    }
    for c in 1..counts.len() {
        counts[c] += counts[c - 1];
    }
    let mut fill = counts.clone();
    let mut items = vec![0usize; counts[nx * ny]];
    for e in 0..m {
        let (x0, x1, y0, y1) = range(e);
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                let c = iy * nx + ix;
                items[fill[c]] = e;
                fill[c] += 1;
            }
        }
    }
    let adjacent = |e: usize, f: usize| {
        if e == f {
            return true;
        }
        let (ea, eb) = edge(e);
        let (fa, fb) = edge(f);
        ea == fb || eb == fa
    };
    let mut best: Option<(usize, usize)> = None;
    for c in 0..nx * ny {
        let edges = &items[counts[c]..counts[c + 1]];
        for (k, &e) in edges.iter().enumerate() {
            for &f in &edges[k + 1..] {
                if adjacent(e, f) {
                    continue;
                }
                let (ea, eb) = edge(e);
                let (fa, fb) = edge(f);
                if segments_intersect(pts[ea], pts[eb], pts[fa], pts[fb]) {
                    let pair = (e.min(f), e.max(f));
                    if best.map_or(true, |b| pair < b) {
                        best = Some(pair);
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_segments() {
        let p = |x, y| Point::new(x, y);
        assert!(segments_intersect(p(0., 0.), p(1., 1.), p(0., 1.), p(1., 0.)));
        assert!(!segments_intersect(p(0., 0.), p(1., 0.), p(0., 1.), p(1., 1.)));
        assert!(segments_intersect(p(0., 0.), p(2., 0.), p(1., 0.), p(1., 1.)));
    }
}
