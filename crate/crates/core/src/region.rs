//! Tables of the boundedness regions in the `(l, α)` plane.

use std::io::{self, Write};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::exact::{ratio, Rational};
use crate::model::{alpha_lower, alpha_upper_pe, alpha_upper_pp, l_upper, Mode, ModelError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionRow {
    pub l: Rational,
    pub alpha_lower: Rational,
    /// `1 + 1/n − l/2`, present iff `l < 2/n`.
    pub alpha_upper_pp: Option<Rational>,
    /// `1 + 2/n − l`, present iff `l < 1`.
    pub alpha_upper_pe: Option<Rational>,
}

pub fn region_row(n: u32, l: &Rational) -> Result<RegionRow, ModelError> {
    if n < 2 {
        return Err(ModelError::UnsupportedDimension(n));
    }
    let pp = (l < &l_upper(n, Mode::ParabolicParabolic)).then(|| alpha_upper_pp(n, l));
    let pe = (l < &l_upper(n, Mode::ParabolicElliptic)).then(|| alpha_upper_pe(n, l));
    Ok(RegionRow {
        l: l.clone(),
        alpha_lower: alpha_lower(n),
        alpha_upper_pp: pp,
        alpha_upper_pe: pe,
    })
}

/// Rows at the midpoints `l_i = (i + 1/2)/samples` of a uniform partition
/// of `(0, 1)`.
pub fn region_table(n: u32, samples: usize) -> Result<Vec<RegionRow>, RegionError> {
    if samples < 2 {
        return Err(RegionError::TooFewSamples(samples));
    }
    let den = 2 * samples as i64;
    (0..samples as i64)
        .map(|i| region_row(n, &ratio(2 * i + 1, den)).map_err(RegionError::from))
        .collect()
}

pub const CSV_HEADER: &str = "l,alpha_lower,alpha_upper_pp,alpha_upper_pe";

fn cell(r: Option<&Rational>) -> String {
    r.map(|x| format!("{}", x.to_f64().unwrap_or(f64::NAN)))
        .unwrap_or_default()
}

/// Writes decimal CSV with empty cells for absent bounds.
pub fn write_csv<W: Write>(mut out: W, rows: &[RegionRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            cell(Some(&row.l)),
            cell(Some(&row.alpha_lower)),
            cell(row.alpha_upper_pp.as_ref()),
            cell(row.alpha_upper_pe.as_ref())
        )?;
    }
    Ok(())
}
