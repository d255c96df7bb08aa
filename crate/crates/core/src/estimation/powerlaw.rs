use serde::{Deserialize, Serialize};

use super::density::DensityTable;
use crate::error::{Error, Result};

/// Share of densest units dropped before the regression by default.
pub const DEFAULT_TRIM: f64 = 0.05;

const MIN_ROWS: usize = 10;

/// Least-squares fit of `ln rho = alpha * ln P + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    /// Natural-log intercept.
    pub intercept: f64,
    pub r_squared: f64,
    pub rows_used: usize,
}

/// Fits the magnification exponent after dropping the `trim_top_fraction`
/// of rows with the largest unit density.
pub fn fit_power_law(table: &DensityTable, trim_top_fraction: f64) -> Result<PowerLawFit> {
    if !(0.0..1.0).contains(&trim_top_fraction) {
        return Err(Error::invalid(format!(
            "trim fraction must lie in [0, 1), got {trim_top_fraction}"
        )));
    }
    let mut rows: Vec<(f64, f64, usize)> = table
        .rows
        .iter()
        .map(|r| (r.p_hat, r.rho_hat, r.unit))
        .collect();
    if rows.iter().any(|&(p, rho, _)| !(p > 0.0 && rho > 0.0)) {
        return Err(Error::invalid("density table has non-positive entries"));
    }
    // Densest first, ties by unit index.
    rows.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.2.cmp(&b.2)));
    let drop = (trim_top_fraction * rows.len() as f64).floor() as usize;
    let kept = &rows[drop..];
    if kept.len() < MIN_ROWS {
        return Err(Error::invalid(format!(
            "power-law fit needs at least {MIN_ROWS} rows after trimming, have {}",
            kept.len()
        )));
    }
    let xs: Vec<f64> = kept.iter().map(|r| r.0.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|r| r.1.ln()).collect();
    let (alpha, intercept, r_squared) = ols(&xs, &ys)?;
    Ok(PowerLawFit {
        alpha,
        intercept,
        r_squared,
        rows_used: kept.len(),
    })
}

fn ols(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::invalid(
            "input densities are all equal, slope undefined",
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).min(1.0)
    };
    Ok((slope, intercept, r_squared))
}
