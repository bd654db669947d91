//! Explicit mean curvature flow with periodic remeshing.

use crate::error::{Error, Result};
use crate::geometry::{build_geometry, resample_to_count, GeometryData, Point, Surface};
use crate::inradius::{self, ContactReport, SearchOptions};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    /// Time step as a fraction of the squared minimum edge length.
    pub cfl_factor: f64,
    /// Steps between equal-arclength remeshes; 0 disables remeshing.
    pub remesh_every: usize,
    /// Stop once the largest mean curvature reaches this value.
    pub stop_h_max: f64,
    pub stop_time: f64,
    /// Vertex count after remeshing; defaults to the initial count.
    pub resolution: Option<usize>,
    /// Time between recorded samples.
    pub sample_interval: f64,
    pub max_steps: usize,
    /// Compute μ and ρ at every sample.
    pub contacts: bool,
    /// Azimuthal resolution for surfaces of revolution.
    pub azimuths: Option<usize>,
    /// Scales every time step after it is chosen. Values above 1 push the
    /// step past the stability limit and are rejected by [`step`].
    pub dt_multiplier: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            cfl_factor: 0.1,
            remesh_every: 25,
            stop_h_max: 1e3,
            stop_time: 1.0,
            resolution: None,
            sample_interval: 1e-2,
            max_steps: 10_000_000,
            contacts: true,
            azimuths: None,
            dt_multiplier: 1.0,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::PreconditionViolated(m));
        if !(self.cfl_factor > 0.0 && self.cfl_factor <= 0.5) {
            return bad(format!("cfl_factor must lie in (0, 0.5], got {}", self.cfl_factor));
        }
        if !(self.stop_h_max > 0.0) {
            return bad(format!("stop_h_max must be positive, got {}", self.stop_h_max));
        }
        if !(self.stop_time > 0.0) {
            return bad(format!("stop_time must be positive, got {}", self.stop_time));
        }
        if !(self.sample_interval > 0.0) {
            return bad(format!("sample_interval must be positive, got {}", self.sample_interval));
        }
        if !(self.dt_multiplier > 0.0) {
            return bad(format!("dt_multiplier must be positive, got {}", self.dt_multiplier));
        }
        Ok(())
    }
}

/// A surface at time `t` with its cached geometry.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub t: f64,
    pub surface: Surface,
    pub geometry: GeometryData,
}

impl FlowState {
    pub fn new(surface: Surface) -> Result<Self> {
        let geometry = build_geometry(&surface)?;
        Ok(FlowState {
            t: 0.0,
            surface,
            geometry,
        })
    }

    /// Largest stable step for the given CFL factor.
    pub fn stable_dt(&self, cfl_factor: f64) -> f64 {
        cfl_factor * self.geometry.min_spacing * self.geometry.min_spacing
    }
}

/// Moves every vertex by `-H ν dt` and rebuilds the geometry.
pub fn step(state: &FlowState, dt: f64, cfl_factor: f64) -> Result<FlowState> {
    let limit = state.stable_dt(cfl_factor);
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, limit });
    }
    let g = &state.geometry;
    let mut pts: Vec<Point> = state
        .surface
        .points()
        .iter()
        .zip(&g.normals)
        .zip(&g.mean_curvature)
        .map(|((p, nu), h)| p - nu * (h * dt))
        .collect();
    if let Surface::AxiSym(_) = state.surface {
        let n = pts.len();
        pts[0].x = 0.0;
        pts[n - 1].x = 0.0;
        if let Some(i) = (1..n - 1).find(|&i| pts[i].x <= 0.0) {
            return Err(Error::SelfIntersection {
                first: i - 1,
                second: i,
            });
        }
    }
    let surface = state.surface.with_points(pts)?;
    let geometry = build_geometry(&surface)?;
    Ok(FlowState {
        t: state.t + dt,
        surface,
        geometry,
    })
}

/// Radius of the shrinking sphere `sqrt(R0^2 - 2 n t)`.
pub fn exact_sphere_radius(r0: f64, n: usize, t: f64) -> Result<f64> {
    let extinction = r0 * r0 / (2.0 * n as f64);
    if t > extinction {
        return Err(Error::ExtinctionPassed { t, extinction });
    }
    Ok((r0 * r0 - 2.0 * n as f64 * t).max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub enum StopReason {
    StopTime,
    CurvatureLimit { h_max: f64 },
    SelfIntersection { first: usize, second: usize },
    /// Rebuilt from stored frames; the original reason is not known here.
    Reloaded,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StopReason::StopTime => write!(f, "stop_time"),
            StopReason::CurvatureLimit { h_max } => write!(f, "stop_h_max (H_max = {h_max:.6e})"),
            StopReason::SelfIntersection { first, second } => {
                write!(f, "self_intersection (segments {first} and {second})")
            }
            StopReason::Reloaded => write!(f, "reloaded"),
        }
    }
}

/// One recorded state.
#[derive(Debug, Clone)]
pub struct Sample {
    pub t: f64,
    pub surface: Surface,
    pub geometry: GeometryData,
    pub mu: Option<ContactReport>,
    pub rho: Option<ContactReport>,
    /// Steps taken since the start of the run.
    pub steps: usize,
    /// Size of the step that ended at this sample (0 for the initial state).
    pub dt: f64,
}

impl Sample {
    pub fn h_max(&self) -> f64 {
        self.geometry.max_mean_curvature()
    }

    pub fn measure(&self) -> f64 {
        self.surface.measure()
    }
}

/// Running extrema over all recorded samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Extrema {
    pub h_max: f64,
    pub mu_over_h_max: f64,
    pub rho_over_h_max: f64,
}

#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub samples: Vec<Sample>,
    pub stop: StopReason,
    pub steps: usize,
    pub extrema: Extrema,
}

impl FlowTrace {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("a trace always holds the initial sample")
    }

    pub fn dimension(&self) -> usize {
        self.samples[0].geometry.dimension()
    }
}

fn record(state: &FlowState, config: &FlowConfig, steps: usize, dt: f64, previous: Option<&Sample>) -> Result<Sample> {
    let (mu, rho) = if config.contacts {
        let opts = SearchOptions {
            azimuths: config.azimuths,
            previous: previous.and_then(|p| p.mu.as_ref()),
        };
        let mu = inradius::mu_fast_with(&state.surface, &state.geometry, opts)?;
        let rho = inradius::rho_with(
            &state.surface,
            &state.geometry,
            SearchOptions {
                azimuths: config.azimuths,
                previous: None,
            },
        )?;
        (Some(mu), Some(rho))
    } else {
        (None, None)
    };
    Ok(Sample {
        t: state.t,
        surface: state.surface.clone(),
        geometry: state.geometry.clone(),
        mu,
        rho,
        steps,
        dt,
    })
}

fn update_extrema(ext: &mut Extrema, s: &Sample) {
    let g = &s.geometry;
    ext.h_max = ext.h_max.max(g.max_mean_curvature());
    if let Some(mu) = &s.mu {
        for (v, h) in mu.values.iter().zip(&g.mean_curvature) {
            ext.mu_over_h_max = ext.mu_over_h_max.max(v / h);
        }
    }
    if let Some(rho) = &s.rho {
        for (v, h) in rho.values.iter().zip(&g.mean_curvature) {
            ext.rho_over_h_max = ext.rho_over_h_max.max(v / h);
        }
    }
}

/// Integrates from `initial` until a stop condition, recording samples at
/// multiples of `sample_interval` and at the final state.
pub fn run(initial: Surface, config: &FlowConfig) -> Result<FlowTrace> {
    config.validate()?;
    let resolution = config.resolution.unwrap_or(initial.len());
    let mut state = FlowState::new(initial)?;
    let mut samples = vec![record(&state, config, 0, 0.0, None)?];
    let mut extrema = Extrema::default();
    update_extrema(&mut extrema, &samples[0]);
    let mut next_sample = 1usize;
    let mut steps = 0usize;
    let mut last_dt = 0.0;
    let stop = loop {
        let h_max = state.geometry.max_mean_curvature();
        if h_max >= config.stop_h_max {
            break StopReason::CurvatureLimit { h_max };
        }
        if state.t >= config.stop_time * (1.0 - 1e-14) {
            break StopReason::StopTime;
        }
        if steps >= config.max_steps {
            return Err(Error::MaxStepsExceeded(config.max_steps));
        }
        let sample_time = next_sample as f64 * config.sample_interval;
        let mut dt = state
            .stable_dt(config.cfl_factor)
            .min(config.stop_time - state.t)
            .min(sample_time - state.t);
        if !(dt > 0.0) {
            dt = state.stable_dt(config.cfl_factor);
        }
        dt *= config.dt_multiplier;
        state = match step(&state, dt, config.cfl_factor) {
            Ok(s) => s,
            Err(Error::SelfIntersection { first, second }) => {
                break StopReason::SelfIntersection { first, second };
            }
            Err(e) => return Err(e),
        };
        steps += 1;
        last_dt = dt;
        if config.remesh_every > 0 && steps % config.remesh_every == 0 {
            let surface = resample_to_count(&state.surface, resolution)?;
            state = FlowState {
                t: state.t,
                geometry: build_geometry(&surface)?,
                surface,
            };
        }
        if state.t >= sample_time * (1.0 - 1e-12) {
            let s = record(&state, config, steps, dt, samples.last())?;
            update_extrema(&mut extrema, &s);
            samples.push(s);
            while next_sample as f64 * config.sample_interval <= state.t * (1.0 + 1e-12) {
                next_sample += 1;
            }
        }
    };
    if samples.last().map(|s| s.steps) != Some(steps) {
        let s = record(&state, config, steps, last_dt, samples.last())?;
        update_extrema(&mut extrema, &s);
        samples.push(s);
    }
    log::info!("flow stopped after {steps} steps at t = {:.6e}: {stop}", state.t);
    Ok(FlowTrace {
        samples,
        stop,
        steps,
        extrema,
    })
}

/// Rebuilds a trace from stored `(surface, t)` frames, recomputing the
/// geometry and contact data of each.
pub fn trace_from_frames(frames: Vec<(Surface, f64)>, azimuths: Option<usize>) -> Result<FlowTrace> {
    if frames.is_empty() {
        return Err(Error::NoSamples);
    }
    let config = FlowConfig {
        azimuths,
        ..FlowConfig::default()
    };
    let mut samples: Vec<Sample> = Vec::with_capacity(frames.len());
    let mut extrema = Extrema::default();
    for (surface, t) in frames {
        let state = FlowState {
            t,
            geometry: build_geometry(&surface)?,
            surface,
        };
        let dt = samples.last().map_or(0.0, |p| t - p.t);
        let s = record(&state, &config, 0, dt, samples.last())?;
        update_extrema(&mut extrema, &s);
        samples.push(s);
    }
    Ok(FlowTrace {
        samples,
        stop: StopReason::Reloaded,
        steps: 0,
        extrema,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_radius_values() {
        assert_eq!(exact_sphere_radius(1.0, 1, 0.0).unwrap(), 1.0);
        assert_eq!(exact_sphere_radius(1.0, 1, 0.5).unwrap(), 0.0);
        assert_eq!(exact_sphere_radius(2.0, 2, 0.75).unwrap(), 1.0);
        assert!(matches!(
            exact_sphere_radius(1.0, 2, 0.3),
            Err(Error::ExtinctionPassed { .. })
        ));
    }

    #[test]
    fn config_bounds() {
        let mut c = FlowConfig::default();
        assert!(c.validate().is_ok());
        c.cfl_factor = 0.6;
        assert!(c.validate().is_err());
    }
}
