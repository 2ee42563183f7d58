//! Error metrics between two fields.

use crate::classical::PdfField;
use crate::error::{Error, Result};

/// Denominator guard for the relative error; guarded entries are counted
/// and flagged in the output rather than silently clamped.
pub const EPS_GUARD: f64 = 1e-30;

/// Mean root-mean-squared relative error between two fields.
#[derive(Debug, Clone)]
pub struct RmseResult {
    /// Filled in by sweep drivers; NaN when the metric is used standalone.
    pub viscosity: f64,
    /// Mean over directions of the per-direction RMS relative error.
    pub mean_rmse: f64,
    /// Companion value with the square omitted inside the sum (the literal
    /// printed form); NaN when the signed sum goes negative.
    pub mean_rmse_literal: f64,
    pub per_direction: Vec<f64>,
    /// Number of entries whose reference magnitude fell below the guard.
    pub flagged: usize,
}

/// Per direction i: sqrt( (1/n_g) sum_j ((fp_ij - fe_ij)/fe_ij)^2 ), then
/// the mean over directions.
pub fn rmse(fp: &PdfField, fe: &PdfField) -> Result<RmseResult> {
    if fp.grid != fe.grid || fp.lattice.name != fe.lattice.name {
        return Err(Error::ShapeMismatch(
            "rmse requires matching grids and lattices".to_string(),
        ));
    }
    let n_e = fp.lattice.n_e();
    let n_g = fp.grid.n_sites();
    let mut per_direction = Vec::with_capacity(n_e);
    let mut literal_sum = 0.0;
    let mut flagged = 0usize;
    for i in 0..n_e {
        let mut sq = 0.0;
        let mut signed = 0.0;
        for s in 0..n_g {
            let p = fp.data[i * n_g + s];
            let e = fe.data[i * n_g + s];
            let denom = if e.abs() <= EPS_GUARD {
                flagged += 1;
                EPS_GUARD
            } else {
                e
            };
            let r = (p - e) / denom;
            sq += r * r;
            signed += r;
        }
        per_direction.push((sq / n_g as f64).sqrt());
        literal_sum += (signed / n_g as f64).sqrt();
    }
    let mean_rmse = per_direction.iter().sum::<f64>() / n_e as f64;
    Ok(RmseResult {
        viscosity: f64::NAN,
        mean_rmse,
        mean_rmse_literal: literal_sum / n_e as f64,
        per_direction,
        flagged,
    })
}
