//! The acceptance suite behind `pinchlab verify`.
//!
//! Each criterion builds its own scenarios, runs them and returns pass/fail
//! with a one-line summary. Dumbbell flows are shared between criteria.

use super::config::{EstimateGrid, OutputConfig, RunConfig};
use crate::error::{Error, Result};
use crate::estimates::{
    aux_integral_check, aux_tolerance, AuxSlack, extract_constants, fit_c_hat, gronwall_check, levelset_monitor, lp_monitor,
    mask_to_support, mu_evolution_residual, mu_evolution_residual_with, pinch_fields, rho_pde_residual,
    support_mask, theorem_witness, default_levels, Constant, EstimateParams, ResidualOptions, Theorem,
    ToleranceModel,
};
use crate::flow::{exact_sphere_radius, run, trace_from_frames, FlowConfig, FlowTrace};
use crate::geometry::{build_geometry, Surface};
use crate::inradius::{mu_brute, mu_fast, rho, Side};
use crate::scenarios::{analytic_values, generate, ScenarioSpec};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Deliberate defects used to check that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Use the inscribed ratio with the normal reversed.
    SignFlip,
    /// Take every time step at twice the stable size.
    DtDouble,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Fault::None),
            "sign-flip" => Ok(Fault::SignFlip),
            "dt-double" => Ok(Fault::DtDouble),
            _ => Err(format!("unknown fault `{s}` (expected sign-flip or dt-double)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: &'static str,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} {:<4} {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

/// Shared state: the fault and cached dumbbell flows.
pub struct Context {
    fault: Fault,
    dumbbells: BTreeMap<usize, FlowTrace>,
}

type Check = fn(&mut Context) -> Result<(bool, String)>;

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    check: Check,
}

/// Resolution ladder of the dumbbell flows, with sample intervals.
pub const DUMBBELL_LADDER: [(usize, f64); 3] = [(100, 0.002), (200, 0.001), (400, 0.0005)];
const DUMBBELL_STOP_H: f64 = 12.0;
/// Parameters of the dumbbell pinching checks.
const DELTA: f64 = 0.1;
const SIGMA: f64 = 0.02;
const P: f64 = 10.0;
/// Acceptance fraction for sampled inequality checks.
const FRACTION: f64 = 0.95;

impl Context {
    pub fn new(fault: Fault) -> Self {
        Context {
            fault,
            dumbbells: BTreeMap::new(),
        }
    }

    fn flow_config(&self, stop_time: f64, sample_interval: f64) -> FlowConfig {
        FlowConfig {
            stop_time,
            sample_interval,
            dt_multiplier: if self.fault == Fault::DtDouble { 2.0 } else { 1.0 },
            ..FlowConfig::default()
        }
    }

    fn dumbbell(&mut self, n: usize) -> Result<&FlowTrace> {
        if !self.dumbbells.contains_key(&n) {
            let dt = DUMBBELL_LADDER.iter().find(|l| l.0 == n).map_or(0.001, |l| l.1);
            let cfg = FlowConfig {
                stop_h_max: DUMBBELL_STOP_H,
                ..self.flow_config(1.0, dt)
            };
            let trace = run(generate(&dumbbell_spec(n))?, &cfg)?;
            self.dumbbells.insert(n, trace);
        }
        Ok(&self.dumbbells[&n])
    }

    /// μ with the fault applied.
    fn mu_values(&self, surface: &Surface) -> Result<Vec<f64>> {
        let g = build_geometry(surface)?;
        Ok(match self.fault {
            Fault::SignFlip => rho(surface, &g)?.raw_sup,
            _ => mu_fast(surface, &g)?.values,
        })
    }
}

pub fn dumbbell_spec(n: usize) -> ScenarioSpec {
    ScenarioSpec::Dumbbell {
        bell: 1.0,
        neck: 0.2,
        n,
    }
}

fn params() -> EstimateParams {
    EstimateParams::new(DELTA, SIGMA, P)
}

fn max_radius_error(trace: &FlowTrace, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in &trace.samples {
        let r = exact_sphere_radius(1.0, n, s.t)?;
        for p in s.surface.points() {
            worst = worst.max((p.norm() - r).abs() / r);
        }
    }
    Ok(worst)
}

fn c1(ctx: &mut Context) -> Result<(bool, String)> {
    let mut detail = Vec::new();
    let mut pass = true;
    for (spec, n, limit) in [
        (ScenarioSpec::Circle { radius: 1.0, n: 512 }, 1usize, 1e-3),
        (ScenarioSpec::Sphere { radius: 1.0, n: 129 }, 2, 5e-3),
    ] {
        let start = Instant::now();
        // R = 0.3 is reached at t = (1 - 0.09) / (2n)
        let stop = (1.0 - 0.09) / (2.0 * n as f64);
        let cfg = FlowConfig {
            contacts: false,
            ..ctx.flow_config(stop, stop / 10.0)
        };
        let trace = run(generate(&spec)?, &cfg)?;
        let err = max_radius_error(&trace, n)?;
        let secs = start.elapsed().as_secs_f64();
        let reached = (trace.last().t - stop).abs() < 1e-9;
        pass &= err <= limit && secs <= 60.0 && reached;
        detail.push(format!("{} err {err:.2e} (<= {limit:.0e}) in {secs:.1}s", spec.kind_name()));
    }
    Ok((pass, detail.join("; ")))
}

fn c2(ctx: &mut Context) -> Result<(bool, String)> {
    let circle = generate(&ScenarioSpec::Circle { radius: 1.0, n: 512 })?;
    let mu = ctx.mu_values(&circle)?;
    let circle_err = mu.iter().map(|m| (m * 1.0 - 1.0).abs()).fold(0.0, f64::max);

    let sphere_spec = ScenarioSpec::Sphere { radius: 1.0, n: 65 };
    let sphere = generate(&sphere_spec)?;
    let gs = build_geometry(&sphere)?;
    let target = analytic_values(&sphere_spec)?[0].value;
    let mu = ctx.mu_values(&sphere)?;
    let sphere_err = mu
        .iter()
        .zip(&gs.mean_curvature)
        .map(|(m, h)| (m / h - target).abs())
        .fold(0.0, f64::max);

    let n = 1024;
    let ellipse_spec = ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n };
    let ellipse = generate(&ellipse_spec)?;
    let ge = build_geometry(&ellipse)?;
    let report = mu_fast(&ellipse, &ge)?;
    let expected = analytic_values(&ellipse_spec)?
        .into_iter()
        .find(|v| v.name == "mu_minor_vertex")
        .map(|v| v.value)
        .unwrap_or(f64::NAN);
    let minor = n / 4;
    let value = match ctx.fault {
        Fault::SignFlip => rho(&ellipse, &ge)?.raw_sup[minor],
        _ => report.values[minor],
    };
    let contact_ok = report.contacts[minor].index() == Some(3 * n / 4);
    let defect = report.reflection_defect[minor].unwrap_or(f64::INFINITY);

    let pass = circle_err <= 1e-12
        && sphere_err <= 1e-2
        && (value - expected).abs() <= 1e-2
        && contact_ok
        && defect <= 2e-2;
    Ok((
        pass,
        format!(
            "circle |mu R - 1| {circle_err:.1e}; sphere |mu/H - 1/2| {sphere_err:.1e}; \
             ellipse minor mu {value:.6} contact {:?} defect {defect:.1e}",
            report.contacts[minor].index()
        ),
    ))
}

fn c3(ctx: &mut Context) -> Result<(bool, String)> {
    let sizes = [256usize, 512, 1024, 2048];
    let mut shapes: Vec<ScenarioSpec> = (1..=14u64)
        .map(|seed| ScenarioSpec::PerturbedCircle {
            radius: 1.0,
            amplitude: 0.1,
            n: sizes[seed as usize % sizes.len()],
            seed,
        })
        .collect();
    shapes.extend((15..=20u64).map(|seed| ScenarioSpec::PerturbedSphere {
        radius: 1.0,
        amplitude: 0.05,
        n: if seed % 2 == 0 { 65 } else { 97 },
        seed,
    }));
    let mut worst: f64 = 0.0;
    let mut mismatched = 0usize;
    for spec in &shapes {
        let s = generate(spec)?;
        let g = build_geometry(&s)?;
        let fast = mu_fast(&s, &g)?;
        let brute = mu_brute(&s, &g)?;
        for i in 0..s.len() {
            let fv = if ctx.fault == Fault::SignFlip { -fast.values[i] } else { fast.values[i] };
            worst = worst.max((fv - brute.values[i]).abs());
            mismatched += (fast.contacts[i] != brute.contacts[i]) as usize;
        }
    }

    let big = generate(&ScenarioSpec::PerturbedCircle {
        radius: 1.0,
        amplitude: 0.1,
        n: 8192,
        seed: 1,
    })?;
    let g = build_geometry(&big)?;
    let time = |f: &dyn Fn() -> Result<()>| -> Result<f64> {
        let mut best = f64::INFINITY;
        for _ in 0..3 {
            let start = Instant::now();
            f()?;
            best = best.min(start.elapsed().as_secs_f64());
        }
        Ok(best)
    };
    let tb = time(&|| mu_brute(&big, &g).map(|_| ()))?;
    let tf = time(&|| mu_fast(&big, &g).map(|_| ()))?;
    let speedup = tb / tf;
    let pass = worst <= 1e-12 && mismatched == 0 && speedup >= 2.0;
    Ok((
        pass,
        format!(
            "{} shapes, max |fast - brute| {worst:.1e}, {mismatched} contact mismatches; \
             N=8192 brute {:.0} ms fast {:.0} ms ({speedup:.1}x)",
            shapes.len(),
            1e3 * tb,
            1e3 * tf
        ),
    ))
}

fn c4(_ctx: &mut Context) -> Result<(bool, String)> {
    let convex = [
        ScenarioSpec::Circle { radius: 1.0, n: 256 },
        ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n: 512 },
        ScenarioSpec::PerturbedCircle {
            radius: 1.0,
            amplitude: 0.1,
            n: 512,
            seed: 3,
        },
        ScenarioSpec::Sphere { radius: 1.0, n: 65 },
        ScenarioSpec::PerturbedSphere {
            radius: 1.0,
            amplitude: 0.05,
            n: 65,
            seed: 4,
        },
    ];
    let mut nonzero = 0usize;
    for spec in &convex {
        let s = generate(spec)?;
        let r = rho(&s, &build_geometry(&s)?)?;
        nonzero += r.values.iter().filter(|v| **v != 0.0).count();
    }
    let s = generate(&dumbbell_spec(300))?;
    let g = build_geometry(&s)?;
    let r = rho(&s, &g)?;
    let neck: Vec<usize> = (0..s.len()).filter(|&i| g.lambda_min(i) < 0.0).collect();
    let bad = neck
        .iter()
        .filter(|&&i| !(r.values[i] > 0.0 && r.values[i] >= -g.lambda_min(i) - 1e-2 * g.mean_curvature[i]))
        .count();
    let pass = nonzero == 0 && !neck.is_empty() && bad == 0;
    Ok((
        pass,
        format!(
            "{} convex shapes with {nonzero} nonzero rho; dumbbell neck {} vertices, {bad} below -lambda_1",
            convex.len(),
            neck.len()
        ),
    ))
}

fn ladder_check(
    ctx: &Context,
    name: &str,
    specs: &[(ScenarioSpec, f64)],
    stop: f64,
) -> Result<(bool, String)> {
    let mut tol: Option<ToleranceModel> = None;
    let mut parts = Vec::new();
    let mut pass = true;
    for (level, (spec, dt)) in specs.iter().enumerate() {
        let trace = run(generate(spec)?, &ctx.flow_config(stop, *dt))?;
        let report = mu_evolution_residual(&trace, 0..trace.samples.len())?;
        let frozen = *tol.get_or_insert_with(|| ToleranceModel::fit_upper(report.rows.iter()));
        if level == 0 {
            parts.push(format!("{name} c = {:.2e}", frozen.coefficient));
            continue;
        }
        let frac = report.pass_fraction(&frozen).unwrap_or(0.0);
        pass &= frac >= FRACTION;
        parts.push(format!("N={} {:.1}% of {}", spec.resolution(), 100.0 * frac, report.eligible_count()));
    }
    Ok((pass, parts.join(", ")))
}

fn c5(ctx: &mut Context) -> Result<(bool, String)> {
    let steps = [(128usize, 0.01), (256, 0.005), (512, 0.0025)];
    let ellipse: Vec<_> = steps
        .iter()
        .map(|&(n, dt)| (ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n }, dt))
        .collect();
    let perturbed: Vec<_> = steps
        .iter()
        .map(|&(n, dt)| {
            (
                ScenarioSpec::PerturbedCircle {
                    radius: 1.0,
                    amplitude: 0.15,
                    n,
                    seed: 1,
                },
                dt,
            )
        })
        .collect();
    let (pe, de) = ladder_check(ctx, "ellipse", &ellipse, 0.3)?;
    let (pp, dp) = ladder_check(ctx, "perturbed circle", &perturbed, 0.3)?;

    // saturated case: the exact residual vanishes
    let mut maxima = Vec::new();
    let mut coefficient: f64 = 0.0;
    for (n, dt) in [(33usize, 0.01), (65, 0.005), (129, 0.0025)] {
        let trace = run(generate(&ScenarioSpec::Sphere { radius: 1.0, n })?, &ctx.flow_config(0.1, dt))?;
        let opts = ResidualOptions {
            forced: true,
            ..ResidualOptions::default()
        };
        let r = mu_evolution_residual_with(&trace, 0..trace.samples.len(), opts)?;
        coefficient = coefficient.max(ToleranceModel::fit(r.rows.iter()).coefficient);
        maxima.push(r.max_abs_normalized());
    }
    let shrinking = maxima.windows(2).all(|w| w[1] < w[0]);
    let pass = pe && pp && shrinking && coefficient.is_finite();
    Ok((
        pass,
        format!(
            "{de}; {dp}; sphere |r|/H^3 {:.1e} -> {:.1e} -> {:.1e} (c = {coefficient:.1e})",
            maxima[0], maxima[1], maxima[2]
        ),
    ))
}

fn bump(surface: &Surface, centre: usize, radius: f64) -> Result<Vec<f64>> {
    let g = build_geometry(surface)?;
    Ok((0..surface.len())
        .map(|i| {
            let mut d = (g.arclength[i] - g.arclength[centre]).abs();
            d = d.min(g.total_length - d);
            let x = d / radius;
            if x < 1.0 {
                (1.0 - x * x).powi(2)
            } else {
                0.0
            }
        })
        .collect())
}

fn c6(ctx: &mut Context) -> Result<(bool, String)> {
    let mut pass = true;
    let mut worst_ratio = f64::NEG_INFINITY;
    let mut tols = Vec::new();
    // tolerance scale taken on the coarsest mesh, then halved per level
    let mut base: [Option<AuxSlack>; 2] = [None, None];
    for (level, n) in [128usize, 256, 512].into_iter().enumerate() {
        let s = generate(&ScenarioSpec::Ellipse { a: 2.0, b: 1.0, n })?;
        let g = build_geometry(&s)?;
        let mu = mu_fast(&s, &g)?;
        let trace = trace_from_frames(vec![(s.clone(), 0.0)], None)?;
        let constants = extract_constants(&trace, &params())?;
        let mask = support_mask(&mu, &g);
        for (k, radius) in [0.5, 1.0].into_iter().enumerate() {
            let eta = bump(&s, n / 4, radius)?;
            if (0..n).any(|i| eta[i] > 0.0 && !mask[i]) {
                return Err(Error::SupportViolation {
                    vertex: (0..n).find(|&i| eta[i] > 0.0 && !mask[i]).unwrap_or(0),
                });
            }
            let a = aux_integral_check(&s, &g, &mu, &constants, &eta)?;
            let tol = aux_tolerance(base[k].get_or_insert(a), level as u32);
            if radius == 0.5 {
                tols.push(tol);
            }
            pass &= a.slack >= -tol;
            worst_ratio = worst_ratio.max(-a.slack / tol);
        }
    }
    let halving = tols.windows(2).all(|w| w[1] <= 0.5 * w[0]);
    pass &= halving;

    let mut checked = 0usize;
    let mut positive = 0usize;
    for (level, &(n, _)) in DUMBBELL_LADDER.iter().enumerate() {
        let trace = ctx.dumbbell(n)?.clone();
        let constants = extract_constants(&trace, &params())?;
        for smp in &trace.samples {
            let mu = smp.mu.as_ref().expect("contacts recorded");
            let f = pinch_fields(&smp.geometry, mu, &constants, Side::Mu)?;
            let eta: Vec<f64> = f
                .f_plus
                .iter()
                .zip(&smp.geometry.mean_curvature)
                .map(|(v, h)| v.powf(P) / h)
                .collect();
            let eta = mask_to_support(&eta, &support_mask(mu, &smp.geometry));
            positive += eta.iter().filter(|v| **v > 0.0).count();
            let a = aux_integral_check(&smp.surface, &smp.geometry, mu, &constants, &eta)?;
            pass &= a.slack >= -aux_tolerance(&a, level as u32);
            checked += 1;
        }
    }
    Ok((
        pass,
        format!(
            "ellipse bumps worst -slack/tol {worst_ratio:.2}, tol {:.1e} -> {:.1e} -> {:.1e}; \
             dumbbell {checked} samples, {positive} vertices with f_+ > 0",
            tols[0], tols[1], tols[2]
        ),
    ))
}

fn c7(ctx: &mut Context) -> Result<(bool, String)> {
    let mut vacuous = true;
    for spec in [ScenarioSpec::Circle { radius: 1.0, n: 256 }, ScenarioSpec::Sphere { radius: 1.0, n: 65 }] {
        let trace = run(generate(&spec)?, &ctx.flow_config(0.2, 0.01))?;
        let constants = extract_constants(&trace, &params())?;
        let lp = lp_monitor(&trace, &constants, Side::Mu)?;
        vacuous &= lp.is_vacuous() && lp.rows.iter().all(|r| r.pass && r.margin >= 0.0);
    }

    let training = ctx.dumbbell(DUMBBELL_LADDER[0].0)?.clone();
    let c_hat = fit_c_hat(&training, &extract_constants(&training, &params())?)?;
    let eval = ctx.dumbbell(DUMBBELL_LADDER[1].0)?.clone();
    let constants = extract_constants(&eval, &params())?.with_c_hat(Constant::fitted(c_hat));
    let lp = lp_monitor(&eval, &constants, Side::Mu)?;
    let gr = gronwall_check(&eval, &constants, Side::Mu)?;
    let gr_frac = gr.iter().filter(|r| r.pass).count() as f64 / gr.len() as f64;
    let levels = levelset_monitor(&eval, &constants, Side::Mu, &default_levels(constants.k0.value))?;

    let fine = ctx.dumbbell(DUMBBELL_LADDER[2].0)?.clone();
    let b_fine = extract_constants(&fine, &params())?.b_hat.value;
    let b = constants.b_hat.value;
    let stable = (b - b_fine).abs() <= 0.15 * b_fine.abs();

    let pass = vacuous && lp.pass_fraction() >= FRACTION && gr_frac >= FRACTION && levels.is_nested() && stable;
    Ok((
        pass,
        format!(
            "convex integrals zero: {vacuous}; dumbbell C_hat {c_hat:.2e}, L^p {:.1}%{}, integrated {:.1}%, \
             levels nested {}, k* {:?}; B_hat {b:.4} vs {b_fine:.4}",
            100.0 * lp.pass_fraction(),
            if lp.is_vacuous() { " (f_+ = 0)" } else { "" },
            100.0 * gr_frac,
            levels.is_nested(),
            levels.k_star
        ),
    ))
}

fn c8(ctx: &mut Context) -> Result<(bool, String)> {
    let mut tol: Option<ToleranceModel> = None;
    let mut parts = Vec::new();
    let mut pass = true;
    for (level, &(n, _)) in DUMBBELL_LADDER.iter().enumerate() {
        let trace = ctx.dumbbell(n)?.clone();
        let report = rho_pde_residual(&trace, 0..trace.samples.len())?;
        let frozen = *tol.get_or_insert_with(|| ToleranceModel::fit_upper(report.rows.iter()));
        if level == 0 {
            parts.push(format!("c = {:.2e}", frozen.coefficient));
            continue;
        }
        let frac = report.pass_fraction(&frozen).unwrap_or(0.0);
        pass &= frac >= FRACTION;
        parts.push(format!("N={n} {:.1}% of {}", 100.0 * frac, report.eligible_count()));
    }
    let eval = ctx.dumbbell(DUMBBELL_LADDER[1].0)?.clone();
    let constants = extract_constants(&eval, &params())?;
    let lp = lp_monitor(&eval, &constants, Side::Rho)?;
    pass &= lp.pass_fraction() >= FRACTION;
    parts.push(format!(
        "outer L^p {:.1}%{}",
        100.0 * lp.pass_fraction(),
        if lp.is_vacuous() { " (g_+ = 0)" } else { "" }
    ));
    Ok((pass, parts.join(", ")))
}

fn c9(ctx: &mut Context) -> Result<(bool, String)> {
    let trace = ctx.dumbbell(DUMBBELL_LADDER[1].0)?.clone();
    let w = theorem_witness(&trace, &[0.1, 0.2, 0.3])?;
    let finite = |t: Theorem| w.rows.iter().any(|r| r.delta == 0.3 && r.theorem == t && r.c_hat.is_finite());
    let (sm, sr) = (w.mu_trend.top_decile(), w.rho_trend.top_decile());
    let pass = w.mu_trend.is_monotone()
        && w.rho_trend.is_monotone()
        && sm <= 1.3
        && sr <= 0.3
        && finite(Theorem::Inscribed)
        && finite(Theorem::Outer);
    Ok((
        pass,
        format!(
            "top-decile s_mu {sm:.4}, s_rho {sr:.4}; C_hat(0.3) finite: {} / {}",
            finite(Theorem::Inscribed),
            finite(Theorem::Outer)
        ),
    ))
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, title, check| Criterion { id, title, check };
    vec![
        c("C1", "exact-solution fidelity", c1 as Check),
        c("C2", "mu oracle identities", c2),
        c("C3", "kernel equivalence", c3),
        c("C4", "convexity clamp", c4),
        c("C5", "mu evolution monitor", c5),
        c("C6", "auxiliary integral monitor", c6),
        c("C7", "L^p machinery", c7),
        c("C8", "rho machinery", c8),
        c("C9", "theorem trends", c9),
    ]
}

fn evaluate(ctx: &mut Context, c: &Criterion) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = match (c.check)(ctx) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Outcome {
        id: c.id,
        title: c.title,
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs the criteria whose ids are listed (all when `only` is empty).
pub fn run_selected(only: &[String], fault: Fault) -> Vec<Outcome> {
    let mut ctx = Context::new(fault);
    criteria()
        .iter()
        .filter(|c| only.is_empty() || only.iter().any(|o| o.eq_ignore_ascii_case(c.id)))
        .map(|c| evaluate(&mut ctx, c))
        .collect()
}

fn scratch_dir(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("pinchlab-verify-{}-{tag}", std::process::id()))
}

fn files(dir: &Path) -> Result<BTreeMap<PathBuf, Vec<u8>>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).map_err(|e| Error::io(&d, e))? {
            let path = entry.map_err(|e| Error::io(&d, e))?.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
                out.insert(path.strip_prefix(dir).unwrap_or(&path).to_path_buf(), bytes);
            }
        }
    }
    Ok(out)
}

/// Runs the same configuration twice and compares every output byte.
pub fn reproducibility(fault: Fault) -> Result<(bool, String)> {
    let dir = scratch_dir("rerun");
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let _ = std::fs::remove_dir_all(&dir);
        let config = RunConfig {
            scenario: dumbbell_spec(100),
            flow: FlowConfig {
                stop_h_max: DUMBBELL_STOP_H,
                sample_interval: 0.002,
                dt_multiplier: if fault == Fault::DtDouble { 2.0 } else { 1.0 },
                ..FlowConfig::default()
            },
            estimates: EstimateGrid {
                deltas: vec![DELTA],
                sigmas: vec![SIGMA],
                ps: vec![P],
                ..EstimateGrid::default()
            },
            output: OutputConfig {
                dir: dir.clone(),
                ..OutputConfig::default()
            },
        };
        let result = super::execute(&config);
        let snapshot = result.and_then(|_| files(&dir));
        let _ = std::fs::remove_dir_all(&dir);
        outputs.push(snapshot?);
    }
    let same = outputs[0] == outputs[1];
    Ok((same, format!("{} files, identical: {same}", outputs[0].len())))
}

/// The whole suite, including the runtime and reproducibility criterion.
pub fn run_all(fault: Fault) -> Vec<Outcome> {
    let start = Instant::now();
    let mut out = run_selected(&[], fault);
    let suite = start.elapsed().as_secs_f64();
    let t = Instant::now();
    let (same, detail) = reproducibility(fault).unwrap_or_else(|e| (false, format!("error: {e}")));
    let total = suite + t.elapsed().as_secs_f64();
    out.push(Outcome {
        id: "C10",
        title: "runtime and reproducibility",
        pass: same && total <= 900.0,
        detail: format!("suite {total:.0}s (<= 900s); rerun {detail}"),
        seconds: t.elapsed().as_secs_f64(),
    });
    out
}
