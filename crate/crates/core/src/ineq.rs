//! Explicit constants for the Young-type inequalities
//!
//! ```text
//! a^{d1} b^{d2} ≤ ε(a + b) + c                 (d1 + d2 < 1)
//! a^{d3} + b^{d4} ≥ 2^{−d5} (a + b)^{d5} − d
//! ```
//!
//! and the comparison bound for `y' + c18 y^{1+κ}`-type absorptive ODEs.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IneqError {
    #[error("d1 + d2 = {0} is not below 1: the supremum diverges")]
    DivergentSupremum(f64),
    #[error("parameter {name} must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<f64, IneqError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(IneqError::InvalidParameter { name, value })
    }
}

/// Relative padding added on top of closed-form suprema to absorb roundoff.
const CLOSED_FORM_PAD: f64 = 1e-12;

/// Safety factor over numerically maximized gaps.
const NUMERIC_SAFETY: f64 = 1.0 + 1e-6;

/// Smallest `c` with `a^{d1} b^{d2} ≤ ε(a+b) + c` for all `a, b ≥ 0`.
///
/// The gap is concave, so its maximum sits at the stationary point on the
/// ray `b/a = d2/d1`; with `s = d1 + d2` and `K = d1^{d1} d2^{d2}` this gives
/// `c = ε (1 − s) (K/ε)^{1/(1−s)}`.
pub fn young_product_constant(d1: f64, d2: f64, epsilon: f64) -> Result<f64, IneqError> {
    let d1 = positive("d1", d1)?;
    let d2 = positive("d2", d2)?;
    let epsilon = positive("epsilon", epsilon)?;
    let s = d1 + d2;
    if s >= 1.0 {
        return Err(IneqError::DivergentSupremum(s));
    }
    let k = d1.powf(d1) * d2.powf(d2);
    let t = (k / epsilon).powf(1.0 / (1.0 - s));
    Ok(epsilon * (1.0 - s) * t * (1.0 + CLOSED_FORM_PAD))
}

/// Gap `2^{−d5}(a+b)^{d5} − a^{d3} − b^{d4}` of the power-sum inequality.
pub fn power_sum_gap(a: f64, b: f64, d3: f64, d4: f64, d5: f64) -> f64 {
    (0.5 * (a + b)).powf(d5) - a.powf(d3) - b.powf(d4)
}

/// Returns `(d5, d)` with `d5 = min(d3, d4)` and `d` bounding the gap
/// [`power_sum_gap`] from above on the whole quadrant.
///
/// With `d5 = min(d3, d4)` the gap is nonpositive unless both `a, b < 1`,
/// so `d` is the maximum over the unit square: located by a graded grid,
/// polished by a shrinking pattern search and inflated by `1 + 10⁻⁶`.
pub fn power_sum_lower(d3: f64, d4: f64) -> Result<(f64, f64), IneqError> {
    let d3 = positive("d3", d3)?;
    let d4 = positive("d4", d4)?;
    let d5 = d3.min(d4);
    let gap = |a: f64, b: f64| power_sum_gap(a, b, d3, d4, d5);

    // Nodes graded towards 0, where fractional powers are steep.
    const NODES: usize = 160;
    let nodes: Vec<f64> = (0..=NODES).map(|i| (i as f64 / NODES as f64).powi(3)).collect();
    let mut candidates: Vec<(f64, f64, f64)> = Vec::with_capacity(nodes.len() * nodes.len());
    for &a in &nodes {
        for &b in &nodes {
            candidates.push((gap(a, b), a, b));
        }
    }
    candidates.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut best = 0.0_f64;
    for &(value, a, b) in candidates.iter().take(8) {
        best = best.max(value).max(pattern_search(&gap, a, b));
    }
    let d = if best > 0.0 { best * NUMERIC_SAFETY + 1e-15 } else { 0.0 };
    Ok((d5, d))
}

/// Compass search for a maximum of `f` on `[0, 1]²` starting from `(a, b)`.
fn pattern_search(f: &impl Fn(f64, f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut value = f(a, b);
    let mut step = 0.05_f64.max(a.max(b));
    while step > 1e-15 {
        let mut improved = false;
        for (da, db) in [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 1.0),
            (-1.0, -1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
        ] {
            let (na, nb) = ((a + da * step).clamp(0.0, 1.0), (b + db * step).clamp(0.0, 1.0));
            let candidate = f(na, nb);
            if candidate > value {
                value = candidate;
                a = na;
                b = nb;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    value
}

/// `max(y0, (c19/c18)^{1/κ})`.
pub fn ode_comparison_bound(y0: f64, c18: f64, c19: f64, kappa: f64) -> Result<f64, IneqError> {
    if !(y0 >= 0.0 && y0.is_finite()) {
        return Err(IneqError::InvalidParameter { name: "y0", value: y0 });
    }
    let c18 = positive("c18", c18)?;
    if !(c19 >= 0.0 && c19.is_finite()) {
        return Err(IneqError::InvalidParameter {
            name: "c19",
            value: c19,
        });
    }
    let kappa = positive("kappa", kappa)?;
    Ok(y0.max((c19 / c18).powf(1.0 / kappa)))
}
