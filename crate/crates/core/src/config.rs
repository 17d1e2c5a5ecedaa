//! TOML simulation configuration.
//!
//! ```toml
//! [model]
//! n = 2
//! alpha = "1"        # number or "p/q"
//! l = 0.5
//! mode = "pp"        # pp | pe
//! # K = 1, K0 = 1
//!
//! [domain]
//! dims = 2
//! extent = 1.0
//! resolution = 64
//!
//! [time]
//! t_end = 10.0
//! dt_max = 0.01
//! # safety = 0.4, dt_min = 1e-10
//!
//! [init]
//! preset = "gaussian"  # constant | gaussian | constant-perturbed | two-bumps
//! mass = 1.0
//! # amplitude = 0.05, seed = 0, v0 = 0
//!
//! [output]
//! path = "out"
//! stride = 100
//! # growth_threshold = 1e6
//! ```
//!
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, parse_rational, rational_from_f64, Rational};
use crate::grid::{Grid, GridError};
use crate::model::{Mode, ModelError, ModelParams};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed configuration: {0}")]
    Syntax(String),
    #[error("invalid {key}: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        reason: reason.into(),
    }
}

/// An exponent written as a TOML number or a string such as `"3/4"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl ExponentValue {
    pub fn to_rational(&self, key: &'static str) -> Result<Rational, ConfigError> {
        match self {
            ExponentValue::Int(i) => Ok(Rational::from_integer((*i).into())),
            ExponentValue::Float(x) => rational_from_f64(*x).map_err(|e| invalid(key, e.to_string())),
            ExponentValue::Text(s) => parse_rational(s).map_err(|e| invalid(key, e.to_string())),
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n: u32,
    pub alpha: ExponentValue,
    pub l: ExponentValue,
    #[serde(rename = "K", default = "one")]
    pub k: f64,
    #[serde(rename = "K0", default = "one")]
    pub k0: f64,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub dims: usize,
    pub extent: f64,
    pub resolution: usize,
}

fn default_safety() -> f64 {
    0.4
}

fn default_dt_min() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_end: f64,
    pub dt_max: f64,
    #[serde(default = "default_safety")]
    pub safety: f64,
    #[serde(default = "default_dt_min")]
    pub dt_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Constant,
    Gaussian,
    ConstantPerturbed,
    TwoBumps,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Constant => "constant",
            Preset::Gaussian => "gaussian",
            Preset::ConstantPerturbed => "constant-perturbed",
            Preset::TwoBumps => "two-bumps",
        }
    }
}

/// Relative amplitude of the `constant-perturbed` preset when none is given.
pub const DEFAULT_AMPLITUDE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSection {
    pub preset: Preset,
    pub mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Uniform initial signal.
    #[serde(default)]
    pub v0: f64,
}

fn default_growth() -> f64 {
    1e6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: PathBuf,
    pub stride: usize,
    #[serde(default = "default_growth")]
    pub growth_threshold: f64,
}

/// Raw document layout shared by simulation configs and sweep specs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub model: ModelSection,
    pub domain: DomainSection,
    pub time: TimeSection,
    pub init: InitSection,
    pub output: OutputSection,
}

/// A validated simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub mode: Mode,
    pub grid: Grid,
    pub time: TimeSection,
    pub init: InitSection,
    pub output: OutputSection,
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let doc: ConfigDocument = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn from_document(doc: &ConfigDocument) -> Result<Self, ConfigError> {
        let m = &doc.model;
        let params = ModelParams::new(m.n, m.alpha.to_rational("alpha")?, m.l.to_rational("l")?, m.k, m.k0)?;
        let d = doc.domain;
        let grid = Grid::new(d.dims, d.extent, d.resolution)?;
        let config = Self {
            params,
            mode: m.mode,
            grid,
            time: doc.time,
            init: doc.init,
            output: doc.output.clone(),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let finite_pos = |x: f64| x > 0.0 && x.is_finite();
        let t = &self.time;
        if !finite_pos(t.t_end) {
            return Err(invalid("time.t_end", format!("must be positive, got {}", t.t_end)));
        }
        if !finite_pos(t.dt_max) {
            return Err(invalid("time.dt_max", format!("must be positive, got {}", t.dt_max)));
        }
        if !(t.safety > 0.0 && t.safety <= 1.0) {
            return Err(invalid("time.safety", format!("must lie in (0, 1], got {}", t.safety)));
        }
        if !(finite_pos(t.dt_min) && t.dt_min <= t.dt_max) {
            return Err(invalid(
                "time.dt_min",
                format!("must lie in (0, dt_max], got {}", t.dt_min),
            ));
        }
        let init = &self.init;
        if !finite_pos(init.mass) {
            return Err(invalid("init.mass", format!("must be positive, got {}", init.mass)));
        }
        if let Some(a) = init.amplitude {
            if !(0.0..1.0).contains(&a) {
                return Err(invalid("init.amplitude", format!("must lie in [0, 1), got {a}")));
            }
        }
        if !(init.v0 >= 0.0 && init.v0.is_finite()) {
            return Err(invalid("init.v0", format!("must be nonnegative, got {}", init.v0)));
        }
        if self.output.stride == 0 {
            return Err(invalid("output.stride", "must be at least 1"));
        }
        let g = self.output.growth_threshold;
        if !(g > 1.0 && g.is_finite()) {
            return Err(invalid("output.growth_threshold", format!("must exceed 1, got {g}")));
        }
        Ok(())
    }

    /// The equivalent document, with exponents written as exact fractions.
    pub fn to_document(&self) -> ConfigDocument {
        ConfigDocument {
            model: ModelSection {
                n: self.params.n,
                alpha: ExponentValue::Text(format_rational(&self.params.alpha)),
                l: ExponentValue::Text(format_rational(&self.params.l)),
                k: self.params.k,
                k0: self.params.k0,
                mode: self.mode,
            },
            domain: DomainSection {
                dims: self.grid.dims(),
                extent: self.grid.extent(),
                resolution: self.grid.resolution(),
            },
            time: self.time,
            init: self.init,
            output: self.output.clone(),
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_document()).expect("config documents always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    const SAMPLE: &str = r#"
[model]
n = 2
alpha = 1
l = "1/2"
mode = "pp"

[domain]
dims = 2
extent = 1.0
resolution = 16

[time]
t_end = 1.0
dt_max = 0.01

[init]
preset = "gaussian"
mass = 1.0

[output]
path = "out"
stride = 10
"#;

    #[test]
    fn parses_with_defaults() {
        let c = SimConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(c.params.alpha, ratio(1, 1));
        assert_eq!(c.params.l, ratio(1, 2));
        assert_eq!((c.params.k, c.params.k0), (1.0, 1.0));
        assert_eq!(c.time.safety, 0.4);
        assert_eq!(c.time.dt_min, 1e-10);
        assert_eq!(c.init.seed, 0);
        assert_eq!(c.init.amplitude, None);
        assert_eq!(c.output.growth_threshold, 1e6);
        assert_eq!(c.grid.len(), 256);
    }

    #[test]
    fn float_exponents_are_read_as_decimals() {
        let c = SimConfig::from_toml_str(&SAMPLE.replace("alpha = 1", "alpha = 1.3")).unwrap();
        assert_eq!(c.params.alpha, ratio(13, 10));
    }

    #[test]
    fn round_trips_through_toml() {
        let c = SimConfig::from_toml_str(SAMPLE).unwrap();
        let again = SimConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let typo = SAMPLE.replace("stride = 10", "stride = 10\nstrid = 3");
        assert!(matches!(SimConfig::from_toml_str(&typo), Err(ConfigError::Syntax(_))));
        let section = format!("{SAMPLE}\n[extra]\nx = 1\n");
        assert!(SimConfig::from_toml_str(&section).is_err());
    }

    #[test]
    fn missing_and_invalid_values() {
        let missing = SAMPLE.replace("mass = 1.0", "");
        assert!(matches!(
            SimConfig::from_toml_str(&missing),
            Err(ConfigError::Syntax(_))
        ));
        let zero_mass = SAMPLE.replace("mass = 1.0", "mass = 0.0");
        assert!(matches!(
            SimConfig::from_toml_str(&zero_mass),
            Err(ConfigError::Invalid { key: "init.mass", .. })
        ));
        let preset = SAMPLE.replace("\"gaussian\"", "\"spiral\"");
        assert!(SimConfig::from_toml_str(&preset).is_err());
        let coarse = SAMPLE.replace("resolution = 16", "resolution = 4");
        assert!(matches!(SimConfig::from_toml_str(&coarse), Err(ConfigError::Grid(_))));
        let bad_l = SAMPLE.replace("\"1/2\"", "\"1/0\"");
        assert!(matches!(
            SimConfig::from_toml_str(&bad_l),
            Err(ConfigError::Invalid { key: "l", .. })
        ));
        let stride = SAMPLE.replace("stride = 10", "stride = 0");
        assert!(SimConfig::from_toml_str(&stride).is_err());
        let dim = SAMPLE.replace("n = 2", "n = 1");
        assert!(matches!(SimConfig::from_toml_str(&dim), Err(ConfigError::Model(_))));
    }
}
