//! Monitored quantities on simulation snapshots and the plateau-based run
//! classifier.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{gradient_sq, Field};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("{name} = {value} is outside its domain ({requirement})")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
}

fn require(name: &'static str, value: f64, ok: bool, requirement: &'static str) -> Result<(), DiagnosticsError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(DiagnosticsError::Domain {
            name,
            value,
            requirement,
        })
    }
}

/// `Σ u · cell volume`.
pub fn mass(u: &Field) -> f64 {
    u.integral()
}

/// `(Σ |w|^p · cell volume)^{1/p}`, evaluated relative to `max |w|` so large
/// exponents neither overflow nor underflow.
pub fn lp_norm(field: &Field, p: f64) -> Result<f64, DiagnosticsError> {
    require("p", p, p >= 1.0, "p >= 1")?;
    Ok(scaled_norm(
        field.values().iter().map(|w| w.abs()),
        p,
        field.grid().cell_volume(),
    ))
}

fn scaled_norm(values: impl Iterator<Item = f64> + Clone, p: f64, volume: f64) -> f64 {
    let top = values.clone().fold(0.0, f64::max);
    if top == 0.0 || !top.is_finite() {
        return top;
    }
    let sum: f64 = values.map(|w| (w / top).powf(p)).sum();
    top * (sum * volume).powf(1.0 / p)
}

/// `‖∇v‖_{L^{2q}}`, gradients by centered differences with mirrored ghosts.
pub fn grad_norm_2q(v: &Field, q: f64) -> Result<f64, DiagnosticsError> {
    require("q", q, q >= 1.0, "q >= 1")?;
    let grads: Vec<f64> = gradient_sq(v).into_iter().map(f64::sqrt).collect();
    Ok(scaled_norm(grads.iter().copied(), 2.0 * q, v.grid().cell_volume()))
}

/// `y = 1/(p(p−1)) ∫(u+1)^p + 1/q ∫|∇v|^{2q}`.
pub fn functional_y(u: &Field, v: &Field, p: f64, q: f64) -> Result<f64, DiagnosticsError> {
    require("p", p, p > 1.0, "p > 1")?;
    require("q", q, q >= 1.0, "q >= 1")?;
    let vol = u.grid().cell_volume();
    let density: f64 = u.values().iter().map(|&s| (s + 1.0).powf(p)).sum::<f64>() * vol;
    let gradient: f64 = gradient_sq(v).iter().map(|g2| g2.powf(q)).sum::<f64>() * vol;
    Ok(density / (p * (p - 1.0)) + gradient / q)
}

/// `(‖v‖_n^n + ‖∇v‖_n^n)^{1/n}`.
pub fn w1n_norm(v: &Field, n: u32) -> Result<f64, DiagnosticsError> {
    require("n", n as f64, n >= 2, "n >= 2")?;
    let n = n as f64;
    let value = lp_norm(v, n)?;
    let gradient = grad_norm_2q(v, n / 2.0)?;
    // Combine as a 2-vector ℓⁿ norm to stay finite for large entries.
    let top = value.max(gradient);
    if top == 0.0 {
        return Ok(0.0);
    }
    Ok(top * ((value / top).powf(n) + (gradient / top).powf(n)).powf(1.0 / n))
}

/// One row of the diagnostic timeseries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub t: f64,
    pub mass: f64,
    pub sup_u: f64,
    pub sup_v: f64,
    pub lp_u: f64,
    pub grad_v_2q: f64,
    pub y: f64,
    pub w1n_v: f64,
}

/// Exponents used for `lp_u`, `grad_v_2q`, `y` and `w1n_v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorExponents {
    pub p: f64,
    pub q: f64,
    pub n: u32,
}

impl DiagnosticRecord {
    pub fn compute(t: f64, u: &Field, v: &Field, exps: MonitorExponents) -> Result<Self, DiagnosticsError> {
        Ok(Self {
            t,
            mass: mass(u),
            sup_u: u.max(),
            sup_v: v.max(),
            lp_u: lp_norm(u, exps.p)?,
            grad_v_2q: grad_norm_2q(v, exps.q)?,
            y: functional_y(u, v, exps.p, exps.q)?,
            w1n_v: w1n_norm(v, exps.n)?,
        })
    }

    fn fields(&self) -> [f64; 8] {
        [
            self.t,
            self.mass,
            self.sup_u,
            self.sup_v,
            self.lp_u,
            self.grad_v_2q,
            self.y,
            self.w1n_v,
        ]
    }
}

pub const CSV_HEADER: &str = "t,mass,sup_u,sup_v,lp_u,grad_v_2q,y,w1n_v";

/// Writes the timeseries as CSV with 17 significant digits per entry.
pub fn write_csv<W: Write>(mut out: W, records: &[DiagnosticRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for record in records {
        let row: Vec<String> = record.fields().iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// How a simulation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Termination {
    Completed,
    GrowthSuspected,
    StepUnderflow,
    NumericalFailure,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RunVerdict {
    Bounded,
    GrowthSuspected,
    Inconclusive,
}

impl fmt::Display for RunVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunThresholds {
    /// Allowed growth of the trailing-half maxima over the 10%-time values.
    pub plateau_factor: f64,
    /// Multiple of the initial `sup u + sup v` treated as blow-up.
    pub growth_threshold: f64,
}

impl Default for RunThresholds {
    fn default() -> Self {
        Self {
            plateau_factor: 2.0,
            growth_threshold: 1e6,
        }
    }
}

/// Plateau heuristic: `Bounded` when both sup-norms over the trailing half
/// stay within `plateau_factor` of their values at the 10% mark.
pub fn classify_run(records: &[DiagnosticRecord], termination: Termination, thresholds: &RunThresholds) -> RunVerdict {
    let (Some(first), Some(last)) = (records.first(), records.last()) else {
        return RunVerdict::Inconclusive;
    };
    if matches!(termination, Termination::GrowthSuspected | Termination::StepUnderflow) {
        return RunVerdict::GrowthSuspected;
    }
    let initial = first.sup_u + first.sup_v;
    if records
        .iter()
        .any(|r| r.sup_u + r.sup_v > thresholds.growth_threshold * initial)
    {
        return RunVerdict::GrowthSuspected;
    }
    if termination != Termination::Completed {
        return RunVerdict::Inconclusive;
    }
    let span = last.t - first.t;
    let mark = records.iter().find(|r| r.t >= first.t + 0.1 * span).unwrap_or(last);
    let trailing = records.iter().filter(|r| r.t >= first.t + 0.5 * span);
    let (mut top_u, mut top_v) = (0.0_f64, 0.0_f64);
    for r in trailing {
        top_u = top_u.max(r.sup_u);
        top_v = top_v.max(r.sup_v);
    }
    let factor = thresholds.plateau_factor;
    if top_u <= factor * mark.sup_u && top_v <= factor * mark.sup_v {
        RunVerdict::Bounded
    } else {
        RunVerdict::Inconclusive
    }
}

/// `max y` over the trailing half divided by `max y` over the first half.
pub fn y_plateau_ratio(records: &[DiagnosticRecord]) -> Option<f64> {
    let first = records.first()?;
    let half = first.t + 0.5 * (records.last()?.t - first.t);
    let (mut early, mut late) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for r in records {
        if r.t <= half {
            early = early.max(r.y);
        }
        if r.t >= half {
            late = late.max(r.y);
        }
    }
    (early > 0.0).then(|| late / early)
}
