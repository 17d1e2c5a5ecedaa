//! Explicit finite-volume integrator for
//!
//! ```text
//! u_t = Δu − ∇·(f(u)∇v)
//! v_t = Δv − v + g(u)     (pp)   or   0 = Δv − v + g(u)   (pe)
//! ```
//!
//! on `[0, L]^d` with zero-flux boundaries. Diffusion uses central face
//! fluxes, the chemotactic flux `f(u)∂v/∂ν` is upwinded on the sign of
//! `∂v/∂ν`, and the `−v` reaction is integrated exactly.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::certificate::{certify, DEFAULT_SEARCH_BUDGET};
use crate::config::{ConfigError, Preset, SimConfig, DEFAULT_AMPLITUDE};
use crate::diagnostics::{
    classify_run, mass, DiagnosticRecord, DiagnosticsError, MonitorExponents, RunThresholds, RunVerdict, Termination,
};
use crate::elliptic::{solve_elliptic, DEFAULT_TOL};
use crate::grid::{laplacian, Field, Grid};
use crate::model::{classify_pp, Kinetics, Mode, RegionTag};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("step {dt} exceeds the explicit diffusion limit {limit}")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("state is in {actual} mode, step requires {expected}")]
    WrongMode { expected: Mode, actual: Mode },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("conjugate gradients stalled after {iterations} iterations (relative residual {relative_residual:e})")]
    ConvergenceFailure { iterations: usize, relative_residual: f64 },
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
}

/// Values below `−NEGATIVITY_TOL · max(1, sup u)` count as a failed step.
pub const NEGATIVITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub u: Field,
    pub v: Field,
    pub t: f64,
    /// Size of the step that produced this state (0 initially).
    pub dt: f64,
    pub mode: Mode,
}

/// Largest `dt` for which the explicit diffusion update stays monotone.
pub fn diffusion_limit(grid: &Grid) -> f64 {
    let h = grid.spacing();
    h * h / (2.0 * grid.dims() as f64)
}

/// Maximum face speed `|f(u_donor) ∂v/∂ν|`.
fn max_advective_speed(u: &Field, v: &Field, kinetics: &dyn Kinetics) -> f64 {
    let grid = u.grid();
    let vv = v.values();
    let sens: Vec<f64> = u.values().iter().map(|&s| kinetics.sensitivity(s.max(0.0))).collect();
    let inv_h = 1.0 / grid.spacing();
    let mut top = 0.0_f64;
    for axis in 0..grid.dims() {
        grid.for_each_face(axis, |left, right| {
            let slope = (vv[right] - vv[left]) * inv_h;
            let donor = if slope > 0.0 { sens[left] } else { sens[right] };
            top = top.max((donor * slope).abs());
        });
    }
    top
}

/// `safety · min(h²/(2d), h / max|f(u)∂v/∂ν|)`.
pub fn stable_dt(u: &Field, v: &Field, kinetics: &dyn Kinetics, safety: f64) -> f64 {
    let grid = u.grid();
    let speed = max_advective_speed(u, v, kinetics);
    let advective = if speed > 0.0 {
        grid.spacing() / speed
    } else {
        f64::INFINITY
    };
    safety * diffusion_limit(grid).min(advective)
}

/// One explicit conservative step of the density equation with the signal
/// `v` frozen.
///
/// Advective outflow from a cell is scaled down, when necessary, so that it
/// never exceeds what the cell still holds after diffusive outflow. The
/// scaling acts on whole face fluxes, so conservation is unaffected.
pub fn advance_density(u: &Field, v: &Field, dt: f64, kinetics: &dyn Kinetics) -> Result<Field, SolverError> {
    let grid = *u.grid();
    let limit = diffusion_limit(&grid);
    if !(dt > 0.0 && dt <= limit) {
        return Err(SolverError::StepTooLarge { dt, limit });
    }
    let (uu, vv) = (u.values(), v.values());
    let h = grid.spacing();
    let inv_h = 1.0 / h;
    let ratio = dt * inv_h;
    let sens: Vec<f64> = uu.iter().map(|&s| kinetics.sensitivity(s.max(0.0))).collect();

    // Advective outflow and number of interior faces per cell.
    let mut outflow = vec![0.0; uu.len()];
    let mut faces = vec![0.0; uu.len()];
    for axis in 0..grid.dims() {
        grid.for_each_face(axis, |left, right| {
            faces[left] += 1.0;
            faces[right] += 1.0;
            let slope = (vv[right] - vv[left]) * inv_h;
            if slope > 0.0 {
                outflow[left] += ratio * sens[left] * slope;
            } else if slope < 0.0 {
                outflow[right] -= ratio * sens[right] * slope;
            }
        });
    }
    let dt_h2 = dt * inv_h * inv_h;
    let scale: Vec<f64> = uu
        .iter()
        .zip(&outflow)
        .zip(&faces)
        .map(|((&ui, &out), &m)| {
            // Content left after diffusive outflow.
            let available = (ui * (1.0 - dt_h2 * m)).max(0.0);
            if out > available {
                available / out
            } else {
                1.0
            }
        })
        .collect();

    let mut next = uu.to_vec();
    let mut axis_part = vec![0.0; uu.len()];
    let mut total = vec![0.0; uu.len()];
    for axis in 0..grid.dims() {
        axis_part.iter_mut().for_each(|x| *x = 0.0);
        grid.for_each_face(axis, |left, right| {
            let slope = (vv[right] - vv[left]) * inv_h;
            let advective = if slope > 0.0 {
                scale[left] * sens[left] * slope
            } else if slope < 0.0 {
                scale[right] * sens[right] * slope
            } else {
                0.0
            };
            // Net transport from `left` into `right` over the step.
            let transfer = ratio * (advective - (uu[right] - uu[left]) * inv_h);
            axis_part[left] -= transfer;
            axis_part[right] += transfer;
        });
        total.iter_mut().zip(&axis_part).for_each(|(t, a)| *t += a);
    }
    next.iter_mut().zip(&total).for_each(|(n, d)| *n += d);
    let next = Field::new(grid, next).expect("same grid");
    check_density(&next)?;
    Ok(next)
}

fn check_density(u: &Field) -> Result<(), SolverError> {
    if !u.is_finite() {
        return Err(SolverError::NumericalFailure("non-finite density".into()));
    }
    let floor = -NEGATIVITY_TOL * u.max().max(1.0);
    let min = u.min();
    if min < floor {
        return Err(SolverError::NumericalFailure(format!("density undershoot {min:e}")));
    }
    Ok(())
}

/// Parabolic–parabolic step: explicit in `u`, and for `v` a diffusion step
/// followed by the exact solution of `v' = −v + g(u)`.
pub fn step_pp(state: &SimState, dt: f64, kinetics: &dyn Kinetics) -> Result<SimState, SolverError> {
    if state.mode != Mode::ParabolicParabolic {
        return Err(SolverError::WrongMode {
            expected: Mode::ParabolicParabolic,
            actual: state.mode,
        });
    }
    let u_next = advance_density(&state.u, &state.v, dt, kinetics)?;

    let grid = *state.v.grid();
    let v = state.v.values();
    let mut lap = vec![0.0; v.len()];
    laplacian(&grid, v, &mut lap);
    let decay = (-dt).exp();
    let gain = -(-dt).exp_m1();
    let v_next: Vec<f64> = v
        .iter()
        .zip(&lap)
        .zip(state.u.values())
        .map(|((&vi, &li), &ui)| decay * (vi + dt * li) + gain * kinetics.production(ui.max(0.0)))
        .collect();
    let v_next = Field::new(grid, v_next).expect("same grid");
    if !v_next.is_finite() {
        return Err(SolverError::NumericalFailure("non-finite signal".into()));
    }
    Ok(SimState {
        u: u_next,
        v: v_next,
        t: state.t + dt,
        dt,
        mode: state.mode,
    })
}

/// Parabolic–elliptic step: `v` solves the elliptic problem for the current
/// `u`, then `u` is advanced. The returned state carries the signal solved
/// for the new density, so states produced here are always consistent.
pub fn step_pe(state: &SimState, dt: f64, kinetics: &dyn Kinetics, tol: f64) -> Result<SimState, SolverError> {
    if state.mode != Mode::ParabolicElliptic {
        return Err(SolverError::WrongMode {
            expected: Mode::ParabolicElliptic,
            actual: state.mode,
        });
    }
    let v = solve_elliptic(&state.u, kinetics, tol, Some(&state.v))?;
    let u_next = advance_density(&state.u, &v, dt, kinetics)?;
    let v_next = solve_elliptic(&u_next, kinetics, tol, Some(&v))?;
    Ok(SimState {
        u: u_next,
        v: v_next,
        t: state.t + dt,
        dt,
        mode: state.mode,
    })
}

fn gaussian(x: f64, y: f64, cx: f64, cy: f64, sigma: f64) -> f64 {
    (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * sigma * sigma)).exp()
}

/// Initial density for a preset, rescaled so its discrete mass is `mass`.
pub fn initial_density(grid: Grid, preset: Preset, mass_target: f64, amplitude: Option<f64>, seed: u64) -> Field {
    if preset == Preset::Constant {
        return Field::constant(grid, mass_target / grid.measure());
    }
    let len = grid.extent();
    let two_d = grid.dims() == 2;
    let mid_y = if two_d { 0.5 * len } else { 0.0 };
    let raw = match preset {
        Preset::Constant => Field::constant(grid, 1.0),
        Preset::Gaussian => Field::from_fn(grid, |x, y| gaussian(x, y, 0.5 * len, mid_y, 0.1 * len)),
        Preset::TwoBumps => Field::from_fn(grid, |x, y| {
            gaussian(x, y, 0.3 * len, mid_y, 0.08 * len) + gaussian(x, y, 0.7 * len, mid_y, 0.08 * len)
        }),
        Preset::ConstantPerturbed => {
            let a = amplitude.unwrap_or(DEFAULT_AMPLITUDE);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let modes: Vec<(f64, f64, f64)> = (0..4)
                .map(|_| {
                    let kx = rng.gen_range(1..=3) as f64;
                    let ky = if two_d { rng.gen_range(0..=3) as f64 } else { 0.0 };
                    (kx, ky, rng.gen_range(-1.0..=1.0))
                })
                .collect();
            // Weights sum to at most 1 in magnitude, so 1 + a·φ > 0 for a < 1.
            let norm: f64 = modes.iter().map(|m| m.2.abs()).sum::<f64>().max(1e-300);
            Field::from_fn(grid, |x, y| {
                let phi: f64 = modes
                    .iter()
                    .map(|&(kx, ky, w)| w * (kx * PI * x / len).cos() * (ky * PI * y / len).cos())
                    .sum();
                1.0 + a * phi / norm
            })
        }
    };
    let current = mass(&raw);
    raw.map(|s| s * mass_target / current)
}

/// Builds the initial state from a configuration. In `pe` mode the signal
/// is solved from the density; in `pp` mode it starts at `init.v0`.
pub fn init_state(config: &SimConfig, kinetics: &dyn Kinetics) -> Result<SimState, SolverError> {
    let init = &config.init;
    let u = initial_density(config.grid, init.preset, init.mass, init.amplitude, init.seed);
    let v = match config.mode {
        Mode::ParabolicParabolic => Field::constant(config.grid, init.v0),
        Mode::ParabolicElliptic => solve_elliptic(&u, kinetics, DEFAULT_TOL, None)?,
    };
    Ok(SimState {
        u,
        v,
        t: 0.0,
        dt: 0.0,
        mode: config.mode,
    })
}

/// Where the monitoring exponents came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentSource {
    /// `(p, q)` of a verified exponent certificate for the run's `(n, α, l)`.
    Certificate,
    /// `(2, 1)`, used when no certificate exists.
    Fallback,
}

/// `(p, q)` for the diagnostics of a run.
pub fn monitor_exponents(config: &SimConfig) -> (MonitorExponents, ExponentSource) {
    let p = &config.params;
    let in_region = matches!(classify_pp(p.n, &p.alpha, &p.l), Ok(v) if v.tag == RegionTag::TheoremRegion);
    if in_region {
        if let Ok(cert) = certify::<crate::exact::Rational>(p.n, &p.alpha, &p.l, DEFAULT_SEARCH_BUDGET) {
            let cert = cert.to_f64();
            return (
                MonitorExponents {
                    p: cert.p,
                    q: cert.q,
                    n: p.n,
                },
                ExponentSource::Certificate,
            );
        }
    }
    (MonitorExponents { p: 2.0, q: 1.0, n: p.n }, ExponentSource::Fallback)
}

#[derive(Debug, Clone)]
pub struct SimResult {
    pub final_state: SimState,
    pub records: Vec<DiagnosticRecord>,
    pub termination: Termination,
    pub verdict: RunVerdict,
    pub steps: u64,
    pub wall_time: f64,
    pub exponents: MonitorExponents,
    pub exponent_source: ExponentSource,
    /// Message of the error that ended a failed run.
    pub failure: Option<String>,
}

/// Runs the configured simulation with the power-law kinetics.
pub fn run(config: &SimConfig) -> Result<SimResult, SolverError> {
    run_with_kinetics(config, &config.params.power_law())
}

/// Runs the configured simulation with arbitrary kinetics.
pub fn run_with_kinetics(config: &SimConfig, kinetics: &dyn Kinetics) -> Result<SimResult, SolverError> {
    let start = Instant::now();
    let (exps, source) = monitor_exponents(config);
    let mut state = init_state(config, kinetics)?;
    let mut records = vec![DiagnosticRecord::compute(0.0, &state.u, &state.v, exps)?];
    let initial_sup = state.u.max() + state.v.max();
    let growth_limit = config.output.growth_threshold * initial_sup;
    let time = config.time;
    let stride = config.output.stride as u64;

    let mut steps = 0_u64;
    let mut failure = None;
    let termination = loop {
        let remaining = time.t_end - state.t;
        if remaining <= 0.0 {
            break Termination::Completed;
        }
        let v_now = &state.v;
        let dt_allowed = time.dt_max.min(stable_dt(&state.u, v_now, kinetics, time.safety));
        if dt_allowed < time.dt_min && remaining > dt_allowed {
            break Termination::StepUnderflow;
        }
        let last = dt_allowed >= remaining;
        let dt = if last { remaining } else { dt_allowed };
        let stepped = match state.mode {
            Mode::ParabolicParabolic => step_pp(&state, dt, kinetics),
            Mode::ParabolicElliptic => step_pe(&state, dt, kinetics, DEFAULT_TOL),
        };
        match stepped {
            Ok(mut next) => {
                if last {
                    next.t = time.t_end;
                }
                state = next;
            }
            Err(err @ (SolverError::NumericalFailure(_) | SolverError::ConvergenceFailure { .. })) => {
                failure = Some(err.to_string());
                break Termination::NumericalFailure;
            }
            Err(err) => return Err(err),
        }
        steps += 1;
        if state.u.max() + state.v.max() > growth_limit {
            break Termination::GrowthSuspected;
        }
        if steps.is_multiple_of(stride) {
            records.push(DiagnosticRecord::compute(state.t, &state.u, &state.v, exps)?);
        }
    };
    if records.last().is_none_or(|r| r.t < state.t) {
        records.push(DiagnosticRecord::compute(state.t, &state.u, &state.v, exps)?);
    }
    let thresholds = RunThresholds {
        growth_threshold: config.output.growth_threshold,
        ..RunThresholds::default()
    };
    let verdict = classify_run(&records, termination, &thresholds);
    Ok(SimResult {
        final_state: state,
        records,
        termination,
        verdict,
        steps,
        wall_time: start.elapsed().as_secs_f64(),
        exponents: exps,
        exponent_source: source,
        failure,
    })
}
