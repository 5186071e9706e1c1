//! Noise sweeps and log-log slope fits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares fit `log10 y = slope · log10 x + intercept` over `window`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub window: [f64; 2],
    pub n_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    /// Name of the swept noise strength, used as the CSV column header.
    pub axis: String,
    /// Name of the measured quantity.
    pub quantity: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub fit: SlopeFit,
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64)).collect()
}

/// Checks a noise grid: at least four positive, strictly ascending points.
pub fn validate_grid(x: &[f64]) -> Result<()> {
    if x.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 grid points, got {}", x.len())));
    }
    if let Some(v) = x.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Fit(format!("grid values must be positive, got {v}")));
    }
    if x.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Fit("grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Fits the log-log slope over the lowest decade of `x`, widened to
/// `max(5, n/2)` points when the decade holds fewer than five.
pub fn fit_loglog_slope(x: &[f64], y: &[f64]) -> Result<SlopeFit> {
    validate_grid(x)?;
    if x.len() != y.len() {
        return Err(Error::Fit(format!("{} grid points but {} values", x.len(), y.len())));
    }
    let in_decade = x.iter().take_while(|v| **v <= 10.0 * x[0] * (1.0 + 1e-12)).count();
    let m = if in_decade >= 5 { in_decade } else { 5.max(x.len() / 2).min(x.len()) };
    let (xs, ys) = (&x[..m], &y[..m]);
    if let Some(v) = ys.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Fit(format!("cannot take the logarithm of {v}")));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.log10()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.log10()).collect();
    let n = m as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok(SlopeFit { slope, intercept: my - slope * mx, window: [xs[0], xs[m - 1]], n_points: m })
}

/// Evaluates `f` at every grid point in parallel (results in grid order) and
/// fits the slope.
pub fn run_sweep<F>(axis: &str, quantity: &str, x: &[f64], f: F) -> Result<SweepTable>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    validate_grid(x)?;
    let y = x.par_iter().map(|&v| f(v)).collect::<Result<Vec<f64>>>()?;
    let fit = fit_loglog_slope(x, &y)?;
    Ok(SweepTable { axis: axis.into(), quantity: quantity.into(), x: x.to_vec(), y, fit })
}
