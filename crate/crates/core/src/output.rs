//! On-disk artifacts of a simulation run.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::{Preset, SimConfig, DEFAULT_AMPLITUDE};
use crate::diagnostics::{mass, write_csv, RunVerdict, Termination};
use crate::exact::format_rational;
use crate::model::{classify_pe, classify_pp, RegionTag};
use crate::solver::{ExponentSource, SimResult};

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CONFIG_FILE: &str = "config.toml";

#[derive(Debug, Clone, Serialize)]
pub struct ModelSummary {
    pub n: u32,
    pub alpha: String,
    pub l: String,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "K0")]
    pub k0: f64,
    pub mode: String,
    pub region_pp: Option<RegionTag>,
    pub region_pe: Option<RegionTag>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentSummary {
    pub p: f64,
    pub q: f64,
    pub source: ExponentSource,
}

/// Initial data description. Shapes, widths and amplitudes of the presets
/// are fixed by this tool, and the `note` field says so.
#[derive(Debug, Clone, Serialize)]
pub struct InitSummary {
    pub preset: Preset,
    pub mass: f64,
    pub amplitude: Option<f64>,
    pub seed: u64,
    pub v0: f64,
    pub shape: &'static str,
    pub note: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub termination: Termination,
    pub verdict: RunVerdict,
    pub wall_time: f64,
    pub steps: u64,
    pub final_t: f64,
    pub final_sup_u: f64,
    pub final_sup_v: f64,
    pub initial_mass: f64,
    pub final_mass: f64,
    pub failure: Option<String>,
    pub model: ModelSummary,
    pub exponents: ExponentSummary,
    pub init: InitSummary,
}

fn preset_shape(preset: Preset) -> &'static str {
    match preset {
        Preset::Constant => "u0 = mass/|domain|",
        Preset::Gaussian => "centered Gaussian, sigma = 0.1*extent, rescaled to the mass",
        Preset::TwoBumps => "Gaussians at x = 0.3*extent and 0.7*extent, sigma = 0.08*extent, rescaled to the mass",
        Preset::ConstantPerturbed => {
            "uniform times (1 + amplitude*phi), phi a seeded mix of four cosine modes with sum|w| = 1, rescaled to the mass"
        }
    }
}

impl RunSummary {
    pub fn new(config: &SimConfig, result: &SimResult) -> Self {
        let p = &config.params;
        let amplitude = match config.init.preset {
            Preset::ConstantPerturbed => Some(config.init.amplitude.unwrap_or(DEFAULT_AMPLITUDE)),
            _ => config.init.amplitude,
        };
        let state = &result.final_state;
        Self {
            termination: result.termination,
            verdict: result.verdict,
            wall_time: result.wall_time,
            steps: result.steps,
            final_t: state.t,
            final_sup_u: state.u.max(),
            final_sup_v: state.v.max(),
            initial_mass: result.records.first().map_or(f64::NAN, |r| r.mass),
            final_mass: mass(&state.u),
            failure: result.failure.clone(),
            model: ModelSummary {
                n: p.n,
                alpha: format_rational(&p.alpha),
                l: format_rational(&p.l),
                k: p.k,
                k0: p.k0,
                mode: config.mode.to_string(),
                region_pp: classify_pp(p.n, &p.alpha, &p.l).ok().map(|v| v.tag),
                region_pe: classify_pe(p.n, &p.alpha, &p.l).ok().map(|v| v.tag),
            },
            exponents: ExponentSummary {
                p: result.exponents.p,
                q: result.exponents.q,
                source: result.exponent_source,
            },
            init: InitSummary {
                preset: config.init.preset,
                mass: config.init.mass,
                amplitude,
                seed: config.init.seed,
                v0: config.init.v0,
                shape: preset_shape(config.init.preset),
                note: "initial-data shapes and amplitudes are illustrative choices of this tool",
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summaries always serialize")
    }
}

/// Writes `timeseries.csv`, `summary.json` and the effective `config.toml`
/// into `dir`, creating it if needed.
pub fn write_run(dir: &Path, config: &SimConfig, result: &SimResult) -> io::Result<RunSummary> {
    fs::create_dir_all(dir)?;
    let mut csv = BufWriter::new(File::create(dir.join(TIMESERIES_FILE))?);
    write_csv(&mut csv, &result.records)?;
    csv.flush()?;
    let summary = RunSummary::new(config, result);
    fs::write(dir.join(SUMMARY_FILE), summary.to_json() + "\n")?;
    fs::write(dir.join(CONFIG_FILE), config.to_toml_string())?;
    Ok(summary)
}
