//! Model parameters, the sensitivity/production nonlinearities and the
//! boundedness-region classifiers.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, ratio, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unsupported dimension n = {0} (need n >= 2)")]
    UnsupportedDimension(u32),
    #[error("parameter {name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: String },
    #[error("argument must be nonnegative, got {0}")]
    NegativeArgument(f64),
    #[error("kinetics violate the bound at s = {s}: {detail}")]
    BoundViolation { s: f64, detail: String },
}

/// Which form the signal equation takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// `v_t = Δv − v + g(u)`.
    #[serde(rename = "pp")]
    ParabolicParabolic,
    /// `0 = Δv − v + g(u)`.
    #[serde(rename = "pe")]
    ParabolicElliptic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::ParabolicParabolic => "pp",
            Mode::ParabolicElliptic => "pe",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pp" => Ok(Mode::ParabolicParabolic),
            "pe" => Ok(Mode::ParabolicElliptic),
            other => Err(format!("unknown mode `{other}` (expected pp or pe)")),
        }
    }
}

/// Dimension, exponents and scales of `f(s) = K s^α`, `g(s) = K₀ s^l`.
///
/// The exponents are kept exact so region tests at the boundary are decided
/// without rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub n: u32,
    pub alpha: Rational,
    pub l: Rational,
    pub k: f64,
    pub k0: f64,
}

impl ModelParams {
    pub fn new(n: u32, alpha: Rational, l: Rational, k: f64, k0: f64) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::UnsupportedDimension(n));
        }
        require_positive_rational("alpha", &alpha)?;
        require_positive_rational("l", &l)?;
        require_positive_float("K", k)?;
        require_positive_float("K0", k0)?;
        Ok(Self { n, alpha, l, k, k0 })
    }

    pub fn alpha_f64(&self) -> f64 {
        to_f64(&self.alpha)
    }

    pub fn l_f64(&self) -> f64 {
        to_f64(&self.l)
    }

    pub fn power_law(&self) -> PowerLaw {
        PowerLaw {
            k: self.k,
            alpha: self.alpha_f64(),
            k0: self.k0,
            l: self.l_f64(),
        }
    }
}

fn require_positive_rational(name: &'static str, value: &Rational) -> Result<(), ModelError> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(ModelError::NonPositive {
            name,
            value: format_rational(value),
        })
    }
}

fn require_positive_float(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::NonPositive {
            name,
            value: value.to_string(),
        })
    }
}

/// Chemosensitivity `f(s) = K s^α`.
pub fn eval_sensitivity(s: f64, params: &ModelParams) -> Result<f64, ModelError> {
    if s < 0.0 || s.is_nan() {
        return Err(ModelError::NegativeArgument(s));
    }
    Ok(params.power_law().sensitivity(s))
}

/// Signal production `g(s) = K₀ s^l`.
pub fn eval_production(s: f64, params: &ModelParams) -> Result<f64, ModelError> {
    if s < 0.0 || s.is_nan() {
        return Err(ModelError::NegativeArgument(s));
    }
    Ok(params.power_law().production(s))
}

/// The two nonlinearities driving the solver. Implementations are called
/// only with nonnegative arguments.
pub trait Kinetics: Send + Sync {
    fn sensitivity(&self, s: f64) -> f64;
    fn production(&self, s: f64) -> f64;
}

/// Prototype nonlinearities `K s^α` and `K₀ s^l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub k: f64,
    pub alpha: f64,
    pub k0: f64,
    pub l: f64,
}

impl Kinetics for PowerLaw {
    fn sensitivity(&self, s: f64) -> f64 {
        if s == 0.0 {
            0.0
        } else if self.alpha == 1.0 {
            self.k * s
        } else {
            self.k * s.powf(self.alpha)
        }
    }

    fn production(&self, s: f64) -> f64 {
        if s == 0.0 {
            0.0
        } else {
            self.k0 * s.powf(self.l)
        }
    }
}

/// User-supplied nonlinearities from plain closures.
pub struct CustomKinetics<F, G> {
    pub sensitivity: F,
    pub production: G,
}

impl<F, G> Kinetics for CustomKinetics<F, G>
where
    F: Fn(f64) -> f64 + Send + Sync,
    G: Fn(f64) -> f64 + Send + Sync,
{
    fn sensitivity(&self, s: f64) -> f64 {
        (self.sensitivity)(s)
    }

    fn production(&self, s: f64) -> f64 {
        (self.production)(s)
    }
}

/// Checks `f(0) = 0`, `f(s) ≤ K s^α` and `0 ≤ g(s) ≤ K₀ s^l` on the given
/// sample points.
pub fn check_kinetics_bounds(kinetics: &dyn Kinetics, params: &ModelParams, samples: &[f64]) -> Result<(), ModelError> {
    let bound = params.power_law();
    let f0 = kinetics.sensitivity(0.0);
    if f0 != 0.0 {
        return Err(ModelError::BoundViolation {
            s: 0.0,
            detail: format!("f(0) = {f0}, expected 0"),
        });
    }
    for &s in samples {
        if s < 0.0 || s.is_nan() {
            return Err(ModelError::NegativeArgument(s));
        }
        let slack = 1e-12 * (1.0 + s);
        let f = kinetics.sensitivity(s);
        if !f.is_finite() || f > bound.sensitivity(s) * (1.0 + 1e-12) + slack {
            return Err(ModelError::BoundViolation {
                s,
                detail: format!("f(s) = {f} exceeds K s^alpha = {}", bound.sensitivity(s)),
            });
        }
        let g = kinetics.production(s);
        if !g.is_finite() || g < 0.0 || g > bound.production(s) * (1.0 + 1e-12) + slack {
            return Err(ModelError::BoundViolation {
                s,
                detail: format!("g(s) = {g} outside [0, K0 s^l = {}]", bound.production(s)),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    /// Inside the region where boundedness is proved here.
    TheoremRegion,
    /// `α < 2/n`, covered by the earlier linear-production result.
    PriorResultRegion,
    OutsideKnownRegion,
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RegionTag::TheoremRegion => "TheoremRegion",
            RegionTag::PriorResultRegion => "PriorResultRegion",
            RegionTag::OutsideKnownRegion => "OutsideKnownRegion",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub tag: RegionTag,
    pub detail: String,
}

/// Lower α bound `2/n`, shared by both modes.
pub fn alpha_lower(n: u32) -> Rational {
    ratio(2, n as i64)
}

/// Upper α bound `1 + 1/n − l/2` for the parabolic–parabolic system.
pub fn alpha_upper_pp(n: u32, l: &Rational) -> Rational {
    ratio(n as i64 + 1, n as i64) - l / ratio(2, 1)
}

/// Upper α bound `1 + 2/n − l` for the parabolic–elliptic system.
pub fn alpha_upper_pe(n: u32, l: &Rational) -> Rational {
    ratio(n as i64 + 2, n as i64) - l
}

/// Supremum of admissible `l`: `2/n` (pp) or `1` (pe).
pub fn l_upper(n: u32, mode: Mode) -> Rational {
    match mode {
        Mode::ParabolicParabolic => ratio(2, n as i64),
        Mode::ParabolicElliptic => ratio(1, 1),
    }
}

pub fn classify(n: u32, alpha: &Rational, l: &Rational, mode: Mode) -> Result<RegionVerdict, ModelError> {
    if n < 2 {
        return Err(ModelError::UnsupportedDimension(n));
    }
    require_positive_rational("alpha", alpha)?;
    require_positive_rational("l", l)?;

    let l_max = l_upper(n, mode);
    let lower = alpha_lower(n);
    let upper = match mode {
        Mode::ParabolicParabolic => alpha_upper_pp(n, l),
        Mode::ParabolicElliptic => alpha_upper_pe(n, l),
    };
    let (a, lf) = (format_rational(alpha), format_rational(l));

    let verdict = if l >= &l_max {
        RegionVerdict {
            tag: RegionTag::OutsideKnownRegion,
            detail: format!("l = {lf} is not below {}", format_rational(&l_max)),
        }
    } else if alpha < &lower {
        RegionVerdict {
            tag: RegionTag::PriorResultRegion,
            detail: format!("alpha = {a} is below 2/n = {}", format_rational(&lower)),
        }
    } else if alpha < &upper {
        RegionVerdict {
            tag: RegionTag::TheoremRegion,
            detail: format!(
                "{} <= alpha = {a} < {} with l = {lf} < {}",
                format_rational(&lower),
                format_rational(&upper),
                format_rational(&l_max)
            ),
        }
    } else {
        RegionVerdict {
            tag: RegionTag::OutsideKnownRegion,
            detail: format!("alpha = {a} is not below the upper bound {}", format_rational(&upper)),
        }
    };
    Ok(verdict)
}

/// Classification against `l ∈ (0, 2/n)`, `2/n ≤ α < 1 + 1/n − l/2`.
pub fn classify_pp(n: u32, alpha: &Rational, l: &Rational) -> Result<RegionVerdict, ModelError> {
    classify(n, alpha, l, Mode::ParabolicParabolic)
}

/// Classification against `l ∈ (0, 1)`, `2/n ≤ α < 1 + 2/n − l`.
pub fn classify_pe(n: u32, alpha: &Rational, l: &Rational) -> Result<RegionVerdict, ModelError> {
    classify(n, alpha, l, Mode::ParabolicElliptic)
}

/// Sample points on `[0, s_max]` suitable for [`check_kinetics_bounds`].
pub fn default_bound_samples(s_max: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count)
        .map(|i| s_max * i as f64 / (count - 1) as f64)
        .filter(|s| !s.is_zero())
        .collect()
}
