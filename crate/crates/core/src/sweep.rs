//! Parameter sweeps over `(α, l)` and optionally the initial mass.
//!
//! A sweep spec is a simulation config with an extra section:
//!
//! ```toml
//! [sweep]
//! alpha = [1, "9/8", 1.25]
//! l = [0.25, 0.5]
//! mass = [1.0, 20.0]   # optional
//! workers = 4          # optional, default 1
//! ```

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{
    ConfigDocument, ConfigError, DomainSection, ExponentValue, InitSection, ModelSection, OutputSection, SimConfig,
    TimeSection,
};
use crate::diagnostics::{RunVerdict, Termination};
use crate::exact::{to_f64, Rational};
use crate::model::{classify, ModelParams, RegionTag};
use crate::output::write_run;
use crate::solver::{run, SolverError};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("point alpha = {alpha}, l = {l}: {source}")]
    Run {
        alpha: String,
        l: String,
        #[source]
        source: SolverError,
    },
    #[error("cannot write sweep output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

fn one_worker() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub alpha: Vec<ExponentValue>,
    pub l: Vec<ExponentValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<Vec<f64>>,
    #[serde(default = "one_worker")]
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepDocument {
    model: ModelSection,
    domain: DomainSection,
    time: TimeSection,
    init: InitSection,
    output: OutputSection,
    sweep: SweepSection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SimConfig,
    pub alphas: Vec<Rational>,
    pub ls: Vec<Rational>,
    pub masses: Option<Vec<f64>>,
    pub workers: usize,
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        reason: reason.into(),
    }
}

fn exact_grid(key: &'static str, values: &[ExponentValue]) -> Result<Vec<Rational>, ConfigError> {
    if values.is_empty() {
        return Err(invalid(key, "grid is empty"));
    }
    let mut out = values
        .iter()
        .map(|v| v.to_rational(key))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid(key, "grid has repeated values"));
    }
    Ok(out)
}

impl SweepSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let doc: SweepDocument = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        let base = SimConfig::from_document(&ConfigDocument {
            model: doc.model,
            domain: doc.domain,
            time: doc.time,
            init: doc.init,
            output: doc.output,
        })?;
        let alphas = exact_grid("sweep.alpha", &doc.sweep.alpha)?;
        let ls = exact_grid("sweep.l", &doc.sweep.l)?;
        let masses = match doc.sweep.mass {
            None => None,
            Some(mut m) => {
                if m.is_empty() {
                    return Err(invalid("sweep.mass", "grid is empty"));
                }
                if m.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                    return Err(invalid("sweep.mass", "masses must be positive"));
                }
                m.sort_by(f64::total_cmp);
                if m.windows(2).any(|w| w[0] == w[1]) {
                    return Err(invalid("sweep.mass", "grid has repeated values"));
                }
                Some(m)
            }
        };
        if doc.sweep.workers == 0 {
            return Err(invalid("sweep.workers", "must be at least 1"));
        }
        let spec = Self {
            base,
            alphas,
            ls,
            masses,
            workers: doc.sweep.workers,
        };
        // Reject exponents the model cannot take before any run starts.
        spec.point_configs()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Per-point configurations in `(α, l, mass)` order.
    pub fn point_configs(&self) -> Result<Vec<SimConfig>, ConfigError> {
        let masses = self.masses.clone().unwrap_or_else(|| vec![self.base.init.mass]);
        let mut out = Vec::with_capacity(self.alphas.len() * self.ls.len() * masses.len());
        for alpha in &self.alphas {
            for l in &self.ls {
                for &m in &masses {
                    let mut config = self.base.clone();
                    let p = &self.base.params;
                    config.params = ModelParams::new(p.n, alpha.clone(), l.clone(), p.k, p.k0)?;
                    config.init.mass = m;
                    out.push(config);
                }
            }
        }
        Ok(out)
    }
}

/// Outcome of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub alpha: Rational,
    pub l: Rational,
    pub mass: f64,
    /// Region tag for the sweep's mode.
    pub region: RegionTag,
    pub termination: Termination,
    pub run_verdict: RunVerdict,
    pub final_sup_u: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    pub with_mass: bool,
}

impl SweepOutcome {
    /// `alpha,l,verdict,termination,final_sup_u`, plus a `mass` column after
    /// `l` when the sweep spec has a mass grid.
    pub fn aggregate_csv(&self) -> String {
        let mut out = String::from(if self.with_mass {
            "alpha,l,mass,verdict,termination,final_sup_u\n"
        } else {
            "alpha,l,verdict,termination,final_sup_u\n"
        });
        for p in &self.points {
            let _ = write!(out, "{},{},", to_f64(&p.alpha), to_f64(&p.l));
            if self.with_mass {
                let _ = write!(out, "{},", p.mass);
            }
            let _ = writeln!(out, "{},{},{:.16e}", p.region, p.termination, p.final_sup_u);
        }
        out
    }
}

pub const AGGREGATE_FILE: &str = "aggregate.csv";

/// Directory name of the `index`-th point.
pub fn point_dir_name(index: usize) -> String {
    format!("point-{index:04}")
}

/// Runs every point on a pool of `workers` threads (the sweep spec's count when
/// `None`). With an output directory, each point's artifacts go into
/// `point-NNNN/` and the aggregate CSV next to them.
pub fn run_sweep(spec: &SweepSpec, output: Option<&Path>, workers: Option<usize>) -> Result<SweepOutcome, SweepError> {
    let configs = spec.point_configs()?;
    let workers = workers.unwrap_or(spec.workers).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let dirs: Vec<Option<PathBuf>> = (0..configs.len())
        .map(|i| output.map(|d| d.join(point_dir_name(i))))
        .collect();

    let results: Vec<Result<SweepPoint, SweepError>> = pool.install(|| {
        configs
            .par_iter()
            .zip(dirs.par_iter())
            .map(|(config, dir)| run_point(config, dir.as_deref()))
            .collect()
    });
    let points = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let outcome = SweepOutcome {
        points,
        with_mass: spec.masses.is_some(),
    };
    if let Some(dir) = output {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(AGGREGATE_FILE), outcome.aggregate_csv())?;
    }
    Ok(outcome)
}

fn run_point(config: &SimConfig, dir: Option<&Path>) -> Result<SweepPoint, SweepError> {
    let p = &config.params;
    let describe = |source| SweepError::Run {
        alpha: crate::exact::format_rational(&p.alpha),
        l: crate::exact::format_rational(&p.l),
        source,
    };
    let region = classify(p.n, &p.alpha, &p.l, config.mode)
        .map_err(|e| describe(SolverError::Config(ConfigError::Model(e))))?
        .tag;
    let mut config = config.clone();
    if let Some(dir) = dir {
        config.output.path = dir.to_owned();
    }
    let result = run(&config).map_err(describe)?;
    if let Some(dir) = dir {
        write_run(dir, &config, &result)?;
    }
    Ok(SweepPoint {
        alpha: p.alpha.clone(),
        l: p.l.clone(),
        mass: config.init.mass,
        region,
        termination: result.termination,
        run_verdict: result.verdict,
        final_sup_u: result.final_state.u.max(),
        steps: result.steps,
    })
}
