//! Initial surfaces with known properties, and their analytic reference values.

use crate::error::{Error, Result};
use crate::geometry::{build_geometry, resample_to_count, AxiSymSurface, PlaneCurve, Point, Surface};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Fourier modes used by the perturbed scenarios.
pub const PERTURBATION_MODES: std::ops::RangeInclusive<usize> = 2..=6;

/// Dumbbell waist parameter: the neck is locally the hyperboloid
/// `r^2 = r0^2 + k z^2`, giving meridional curvature `-k / r0` at the waist.
pub const DUMBBELL_SLOPE: f64 = 0.2;
/// Half-width (in units of the bell radius) of the smooth blend between the
/// hyperboloidal neck and the spherical bells.
pub const DUMBBELL_BLEND: f64 = 0.3;

fn default_seed() -> u64 {
    1
}

fn default_amplitude() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioSpec {
    Circle {
        radius: f64,
        n: usize,
    },
    Ellipse {
        a: f64,
        b: f64,
        n: usize,
    },
    PerturbedCircle {
        radius: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        n: usize,
        #[serde(default = "default_seed")]
        seed: u64,
    },
    Sphere {
        radius: f64,
        n: usize,
    },
    PerturbedSphere {
        radius: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        n: usize,
        #[serde(default = "default_seed")]
        seed: u64,
    },
    Dumbbell {
        bell: f64,
        neck: f64,
        n: usize,
    },
}

impl ScenarioSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ScenarioSpec::Circle { .. } => "circle",
            ScenarioSpec::Ellipse { .. } => "ellipse",
            ScenarioSpec::PerturbedCircle { .. } => "perturbed_circle",
            ScenarioSpec::Sphere { .. } => "sphere",
            ScenarioSpec::PerturbedSphere { .. } => "perturbed_sphere",
            ScenarioSpec::Dumbbell { .. } => "dumbbell",
        }
    }

    pub fn resolution(&self) -> usize {
        match *self {
            ScenarioSpec::Circle { n, .. }
            | ScenarioSpec::Ellipse { n, .. }
            | ScenarioSpec::PerturbedCircle { n, .. }
            | ScenarioSpec::Sphere { n, .. }
            | ScenarioSpec::PerturbedSphere { n, .. }
            | ScenarioSpec::Dumbbell { n, .. } => n,
        }
    }

    /// Same scenario at a different resolution.
    pub fn with_resolution(&self, n_new: usize) -> Self {
        let mut out = self.clone();
        match &mut out {
            ScenarioSpec::Circle { n, .. }
            | ScenarioSpec::Ellipse { n, .. }
            | ScenarioSpec::PerturbedCircle { n, .. }
            | ScenarioSpec::Sphere { n, .. }
            | ScenarioSpec::PerturbedSphere { n, .. }
            | ScenarioSpec::Dumbbell { n, .. } => *n = n_new,
        }
        out
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self, ScenarioSpec::Dumbbell { .. })
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidSurface(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Builds the initial surface and checks that it is embedded and mean convex.
pub fn generate(spec: &ScenarioSpec) -> Result<Surface> {
    let surface = match *spec {
        ScenarioSpec::Circle { radius, n } => {
            positive("radius", radius)?;
            circle(radius, n)?
        }
        ScenarioSpec::Ellipse { a, b, n } => {
            positive("a", a)?;
            positive("b", b)?;
            ellipse(a, b, n)?
        }
        ScenarioSpec::PerturbedCircle {
            radius,
            amplitude,
            n,
            seed,
        } => {
            positive("radius", radius)?;
            perturbed_circle(radius, amplitude, n, seed)?
        }
        ScenarioSpec::Sphere { radius, n } => {
            positive("radius", radius)?;
            sphere(radius, n)?
        }
        ScenarioSpec::PerturbedSphere {
            radius,
            amplitude,
            n,
            seed,
        } => {
            positive("radius", radius)?;
            perturbed_sphere(radius, amplitude, n, seed)?
        }
        ScenarioSpec::Dumbbell { bell, neck, n } => {
            positive("bell", bell)?;
            let ratio = neck / bell;
            if !(0.1..=0.5).contains(&ratio) {
                return Err(Error::InvalidSurface(format!(
                    "dumbbell neck/bell ratio {ratio} outside [0.1, 0.5]"
                )));
            }
            dumbbell(bell, neck, n)?
        }
    };
    build_geometry(&surface)?;
    Ok(surface)
}

/// `x^2 + y^2 - r^2` without cancellation error.
fn radial_excess(x: f64, y: f64, r: f64) -> f64 {
    let square = |v: f64| {
        let p = v * v;
        (p, v.mul_add(v, -p))
    };
    let ((px, ex), (py, ey), (q, eq)) = (square(x), square(y), square(r));
    let s = px + py;
    let bp = s - px;
    let es = (px - (s - bp)) + (py - bp);
    (s - q) + (es + ex + ey - eq)
}

fn ulp_steps(v: f64, k: i32) -> f64 {
    let mut out = v;
    for _ in 0..k.abs() {
        out = if k > 0 { out.next_up() } else { out.next_down() };
    }
    out
}

/// `sqrt(r^2 - u^2)` to about twice working precision before rounding.
fn complement(u: f64, r: f64) -> f64 {
    let (pu, eu) = (u * u, u.mul_add(u, -u * u));
    let (q, eq) = (r * r, r.mul_add(r, -r * r));
    let hi = q - pu;
    let lo = (eq - eu) + ((q - hi) - pu);
    if hi + lo <= 0.0 {
        return 0.0;
    }
    let s = (hi + lo).sqrt();
    s + (s.mul_add(-s, hi) + lo) / (2.0 * s)
}

/// The representable point nearest the circle of radius `r` close to
/// `(x, y)`: a few ulps of the larger coordinate are tried and the other is
/// solved for.
fn snap_to_circle(x: f64, y: f64, r: f64) -> Point {
    let swap = y.abs() > x.abs();
    let (u, v) = if swap { (y, x) } else { (x, y) };
    let mut best = (radial_excess(u, v, r).abs(), u, v);
    for i in -8..=8 {
        let uc = ulp_steps(u, i);
        let w = complement(uc, r).copysign(v);
        for j in -1..=1 {
            let vc = ulp_steps(w, j);
            let e = radial_excess(uc, vc, r).abs();
            if e < best.0 {
                best = (e, uc, vc);
            }
        }
    }
    if swap {
        Point::new(best.2, best.1)
    } else {
        Point::new(best.1, best.2)
    }
}

fn circle(radius: f64, n: usize) -> Result<Surface> {
    let pts = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            snap_to_circle(radius * t.cos(), radius * t.sin(), radius)
        })
        .collect();
    Ok(PlaneCurve::new(pts)?.into())
}

/// Points at equal arclength, with the four vertices placed exactly at
/// indices 0, n/4, n/2 and 3n/4.
fn ellipse(a: f64, b: f64, n: usize) -> Result<Surface> {
    if n % 4 != 0 || n < 8 {
        return Err(Error::InvalidSurface(format!(
            "ellipse resolution must be a multiple of 4 and at least 8, got {n}"
        )));
    }
    let q = n / 4;
    let quarter = quarter_ellipse(a, b, q);
    let mut pts = Vec::with_capacity(n);
    pts.extend(quarter[..q].iter().copied());
    pts.extend((0..q).map(|k| Point::new(-quarter[q - k].x, quarter[q - k].y)));
    pts.extend((0..q).map(|k| -quarter[k]));
    pts.extend((0..q).map(|k| Point::new(quarter[q - k].x, -quarter[q - k].y)));
    Ok(PlaneCurve::new(pts)?.into())
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

fn gauss(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    GAUSS5.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Arclength of the ellipse `(a cos t, b sin t)` on `[0, t]`, from a table
/// of panel sums plus one Gauss rule on the last partial panel.
struct EllipseArc {
    a: f64,
    b: f64,
    panel: f64,
    cumulative: Vec<f64>,
}

impl EllipseArc {
    const PANELS: usize = 4096;

    fn new(a: f64, b: f64) -> Self {
        let panel = FRAC_PI_2 / Self::PANELS as f64;
        let mut cumulative = vec![0.0];
        let mut s = 0.0;
        for p in 0..Self::PANELS {
            let lo = p as f64 * panel;
            s += gauss(|t| Self::speed_of(a, b, t), lo, lo + panel);
            cumulative.push(s);
        }
        EllipseArc {
            a,
            b,
            panel,
            cumulative,
        }
    }

    fn speed_of(a: f64, b: f64, t: f64) -> f64 {
        (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt()
    }

    fn total(&self) -> f64 {
        self.cumulative[Self::PANELS]
    }

    fn length_to(&self, t: f64) -> f64 {
        let p = ((t / self.panel).floor() as usize).min(Self::PANELS - 1);
        let lo = p as f64 * self.panel;
        self.cumulative[p] + gauss(|u| Self::speed_of(self.a, self.b, u), lo, t)
    }

    /// Parameter at arclength `s`, by Newton's method.
    fn param_at(&self, s: f64) -> f64 {
        let mut t = s / self.total() * FRAC_PI_2;
        for _ in 0..50 {
            let step = (self.length_to(t) - s) / Self::speed_of(self.a, self.b, t);
            t = (t - step).clamp(0.0, FRAC_PI_2);
            if step.abs() < 1e-15 {
                break;
            }
        }
        t
    }
}

/// Quarter ellipse from `(a, 0)` to `(0, b)`, `q + 1` points.
fn quarter_ellipse(a: f64, b: f64, q: usize) -> Vec<Point> {
    let arc = EllipseArc::new(a, b);
    let total = arc.total();
    let mut pts: Vec<Point> = (0..=q)
        .map(|k| {
            let t = arc.param_at(total * k as f64 / q as f64);
            Point::new(a * t.cos(), b * t.sin())
        })
        .collect();
    pts[0] = Point::new(a, 0.0);
    pts[q] = Point::new(0.0, b);
    pts
}

/// Perimeter of the ellipse with semi-axes `a`, `b` by Gauss quadrature.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    4.0 * EllipseArc::new(a, b).total()
}

/// Curvature of the ellipse `(a cos t, b sin t)` at parameter `t`.
pub fn ellipse_curvature(a: f64, b: f64, t: f64) -> f64 {
    a * b / (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).powf(1.5)
}

fn fourier_coefficients(amplitude: f64, seed: u64) -> Vec<(usize, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PERTURBATION_MODES
        .map(|k| {
            let a = amplitude * rng.gen_range(-1.0..=1.0) / (k * k) as f64;
            let phase = rng.gen_range(0.0..2.0 * PI);
            (k, a, phase)
        })
        .collect()
}

fn perturbed_circle(radius: f64, amplitude: f64, n: usize, seed: u64) -> Result<Surface> {
    let coeffs = fourier_coefficients(amplitude, seed);
    let pts = (0..n)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / n as f64;
            let scale = 1.0 + coeffs.iter().map(|&(k, a, ph)| a * (k as f64 * t + ph).cos()).sum::<f64>();
            Point::new(radius * scale * t.cos(), radius * scale * t.sin())
        })
        .collect();
    Ok(PlaneCurve::new(pts)?.into())
}

fn sphere(radius: f64, n: usize) -> Result<Surface> {
    if n < 2 {
        return Err(Error::InvalidSurface("sphere needs at least 2 vertices".into()));
    }
    let pts = (0..n)
        .map(|k| {
            let a = -FRAC_PI_2 + PI * k as f64 / (n - 1) as f64;
            let r = if k == 0 || k == n - 1 { 0.0 } else { radius * a.cos() };
            let z = if k == 0 {
                -radius
            } else if k == n - 1 {
                radius
            } else {
                radius * a.sin()
            };
            Point::new(r, z)
        })
        .collect();
    Ok(AxiSymSurface::new(pts)?.into())
}

/// Polar radius `R (1 + sum a_k cos(k theta))`, theta measured from the
/// south pole; even in theta about both poles, so the caps stay smooth.
fn perturbed_sphere(radius: f64, amplitude: f64, n: usize, seed: u64) -> Result<Surface> {
    if n < 2 {
        return Err(Error::InvalidSurface("sphere needs at least 2 vertices".into()));
    }
    let coeffs = fourier_coefficients(amplitude, seed);
    let polar = |t: f64| radius * (1.0 + coeffs.iter().map(|&(k, a, _)| a * (k as f64 * t).cos()).sum::<f64>());
    let pts = (0..n)
        .map(|j| {
            let t = PI * j as f64 / (n - 1) as f64;
            let rr = polar(t);
            let r = if j == 0 || j == n - 1 { 0.0 } else { rr * t.sin() };
            Point::new(r, -rr * t.cos())
        })
        .collect();
    Ok(AxiSymSurface::new(pts)?.into())
}

/// Geometry of the dumbbell profile in units of the bell radius.
#[derive(Debug, Clone, Copy)]
pub struct DumbbellShape {
    pub neck: f64,
    pub slope: f64,
    pub blend: f64,
    /// Height where the neck hyperboloid meets the bell circle tangentially.
    pub joint: f64,
    /// Height of the bell centres.
    pub centre: f64,
}

impl DumbbellShape {
    pub fn new(neck: f64) -> Self {
        let slope = DUMBBELL_SLOPE;
        let joint = ((1.0 - neck * neck) / (slope * (1.0 + slope))).sqrt();
        DumbbellShape {
            neck,
            slope,
            blend: DUMBBELL_BLEND,
            joint,
            centre: (1.0 + slope) * joint,
        }
    }

    /// `r^2` as a function of height.
    pub fn r_squared(&self, z: f64) -> f64 {
        let az = z.abs();
        let (lo, hi) = (self.joint - self.blend, self.joint + self.blend);
        if az >= hi {
            return 1.0 - (az - self.centre).powi(2);
        }
        let hyper = self.neck * self.neck + self.slope * az * az;
        if az <= lo {
            return hyper;
        }
        let u = (az - lo) / (hi - lo);
        let smooth = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
        hyper - (1.0 + self.slope) * (az - self.joint).powi(2) * smooth
    }

    pub fn half_length(&self) -> f64 {
        self.centre + 1.0
    }
}

/// Two spherical bells joined by a hyperboloidal neck through a C2 blend.
fn dumbbell(bell: f64, neck: f64, n: usize) -> Result<Surface> {
    let shape = DumbbellShape::new(neck / bell);
    let top = shape.joint + shape.blend;
    let theta0 = (shape.centre - top).acos();
    let dense = 24 * n.max(64);
    let mut pts = Vec::with_capacity(3 * dense);
    // south cap by angle, neck by height, north cap by angle
    for j in 0..dense {
        let th = PI - (PI - theta0) * j as f64 / dense as f64;
        pts.push(Point::new(th.sin(), -(shape.centre - th.cos())));
    }
    for j in 0..=2 * dense {
        let z = -top + 2.0 * top * j as f64 / (2 * dense) as f64;
        pts.push(Point::new(shape.r_squared(z).sqrt(), z));
    }
    for j in 1..=dense {
        let th = theta0 + (PI - theta0) * j as f64 / dense as f64;
        pts.push(Point::new(th.sin(), shape.centre - th.cos()));
    }
    let last = pts.len() - 1;
    pts[0] = Point::new(0.0, -shape.half_length());
    pts[last] = Point::new(0.0, shape.half_length());
    let scaled: Vec<Point> = pts.iter().map(|p| p * bell).collect();
    let fine: Surface = AxiSymSurface::new(scaled)?.into();
    resample_to_count(&fine, n)
}

/// One analytic reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleValue {
    pub name: &'static str,
    pub value: f64,
    pub note: &'static str,
}

/// Closed-form reference values for circles, spheres and ellipses.
pub fn analytic_values(spec: &ScenarioSpec) -> Result<Vec<OracleValue>> {
    let v = |name, value, note| OracleValue { name, value, note };
    match *spec {
        ScenarioSpec::Circle { radius, .. } => Ok(vec![
            v("mu_over_h", 1.0, "every chord ratio equals 1/R"),
            v("rho", 0.0, "convex"),
            v("curvature", 1.0 / radius, "circle of radius R"),
        ]),
        ScenarioSpec::Sphere { radius, .. } => Ok(vec![
            v("mu_over_h", 0.5, "mu = 1/R, H = 2/R"),
            v("a2_over_h2", 0.5, "|A|^2 = 2/R^2"),
            v("rho", 0.0, "convex"),
            v("curvature", 1.0 / radius, "both principal curvatures"),
        ]),
        ScenarioSpec::Ellipse { a, b, .. } => {
            let (major, minor) = if a >= b { (a, b) } else { (b, a) };
            Ok(vec![
                v("curvature_major_vertex", major / (minor * minor), "ab/b^3"),
                v("curvature_minor_vertex", minor / (major * major), "ab/a^3"),
                v(
                    "mu_minor_vertex",
                    1.0 / minor,
                    "inscribed disc tangent at the minor vertex reaches the opposite vertex",
                ),
                v("mu_major_vertex", major / (minor * minor), "osculating disc"),
                v("rho", 0.0, "convex"),
            ])
        }
        _ => Err(Error::NoAnalyticOracle(spec.kind_name().to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_vertices_hug_the_circle() {
        for r in [1.0, 0.3, 7.0] {
            let s = generate(&ScenarioSpec::Circle { radius: r, n: 360 }).unwrap();
            for (k, p) in s.points().iter().enumerate() {
                let naive = radial_excess(r * (2.0 * PI * k as f64 / 360.0).cos(), r * (2.0 * PI * k as f64 / 360.0).sin(), r);
                assert!(radial_excess(p.x, p.y, r).abs() <= naive.abs());
                let t = 2.0 * PI * k as f64 / 360.0;
                assert!((p - Point::new(r * t.cos(), r * t.sin())).norm() < 1e-13 * r);
            }
        }
        assert!(radial_excess(0.6, 0.8, 1.0).abs() < 1e-16);
        assert_eq!(complement(0.6, 1.0), 0.8);
    }

    #[test]
    fn ellipse_vertices_exact() {
        let s = generate(&ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 64 }).unwrap();
        let p = s.points();
        assert_eq!(p[0], Point::new(2.0, 0.0));
        assert_eq!(p[16], Point::new(0.0, 1.0));
        assert_eq!(p[32], Point::new(-2.0, 0.0));
        assert_eq!(p[48], Point::new(0.0, -1.0));
    }

    #[test]
    fn ellipse_perimeter_matches_series() {
        // Ramanujan's second approximation is accurate to ~1e-10 here
        let (a, b) = (2.0f64, 1.0f64);
        let h = ((a - b) / (a + b)).powi(2);
        let approx = PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((ellipse_perimeter(a, b) - approx).abs() < 1e-6);
    }

    #[test]
    fn dumbbell_shape_is_continuous() {
        let d = DumbbellShape::new(0.2);
        assert!((d.joint - 2.0).abs() < 1e-12);
        for z in [d.joint - d.blend, d.joint + d.blend] {
            let (a, b) = (d.r_squared(z - 1e-9), d.r_squared(z + 1e-9));
            assert!((a - b).abs() < 1e-8);
        }
        assert!(d.r_squared(d.half_length()).abs() < 1e-12);
    }

    #[test]
    fn unknown_oracle_kind() {
        let spec = ScenarioSpec::Dumbbell {
            bell: 1.0,
            neck: 0.2,
            n: 100,
        };
        assert!(matches!(analytic_values(&spec), Err(Error::NoAnalyticOracle(_))));
    }
}
