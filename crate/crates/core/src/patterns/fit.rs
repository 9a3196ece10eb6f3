//! Log-binned power-law fitting and the fit-gamma comparison score.
//!
//! Heavy-tailed count data is noisy in the tail, so the fitter pools
//! counts into geometrically growing integer bins (edge ratio ~1.5,
//! starting at 1), normalizes each bin's mass by the number of integer
//! values it covers, and runs ordinary least squares on log10(density)
//! against log10(bin center). The slope of that line is the exponent
//! estimate consumed by [`goodness_of_fit_gamma`].

use thiserror::Error;

use super::DistributionHistogram;

/// Result of a log-log linear fit over binned histogram densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    /// Slope of log10(density) vs log10(value); negative for decaying
    /// distributions.
    pub slope: f64,
    /// Fitted log10(density) at value 1.
    pub intercept: f64,
    /// Coefficient of determination, in [0, 1].
    pub r_squared: f64,
    pub num_bins_used: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitError {
    #[error("fit undefined: {non_empty} non-empty bin(s), need at least 2")]
    InsufficientBins { non_empty: usize },
    #[error("fit-gamma undefined: reference slope is zero")]
    ZeroReferenceSlope,
}

/// Integer bin edges 1, 2, 3, 5, 8, 12, ... — each edge is
/// max(prev+1, ceil(prev*1.5)) so every bin covers at least one integer.
fn bin_edges(max_value: u64) -> Vec<u64> {
    let mut edges = vec![1u64];
    let mut edge = 1u64;
    while edge <= max_value {
        let grown = ((edge as f64) * 1.5).ceil() as u64;
        edge = grown.max(edge + 1);
        edges.push(edge);
    }
    edges
}

/// Fits a power law to a frequency histogram by logarithmic binning.
///
/// Values below 1 cannot be placed on a log axis and are ignored. Bin
/// density is the bin's total count divided by the number of integer
/// values the bin covers (the top bin is clipped at the histogram
/// maximum), so a flat histogram fits slope 0 exactly. Occupied bins
/// enter the regression with equal weight; empty bins are dropped.
/// Fails when fewer than two bins are occupied.
pub fn fit_power_law(hist: &DistributionHistogram) -> Result<PowerLawFit, FitError> {
    let entries: Vec<(u64, u64)> = hist
        .entries()
        .iter()
        .copied()
        .filter(|&(value, _)| value >= 1)
        .collect();
    let Some(&(max_value, _)) = entries.last() else {
        return Err(FitError::InsufficientBins { non_empty: 0 });
    };

    let edges = bin_edges(max_value);
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut cursor = 0usize;
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1].min(max_value + 1));
        let mut mass = 0u64;
        while cursor < entries.len() && entries[cursor].0 < hi {
            mass += entries[cursor].1;
            cursor += 1;
        }
        if mass == 0 {
            continue;
        }
        let width = (hi - lo) as f64;
        let center = ((lo * (hi - 1)) as f64).sqrt();
        points.push(((center).log10(), (mass as f64 / width).log10()));
    }

    let ols = ols(&points).ok_or(FitError::InsufficientBins {
        non_empty: points.len(),
    })?;
    Ok(PowerLawFit {
        slope: ols.slope,
        intercept: ols.intercept,
        r_squared: ols.r_squared,
        num_bins_used: points.len(),
    })
}

/// Fit agreement score: 1 - |slope_real - slope_gen| / |slope_real|.
///
/// 1 means the generated slope matches the reference exactly; the score
/// is unbounded below and reported raw (no clamping). Undefined for a
/// zero reference slope.
pub fn goodness_of_fit_gamma(
    fit_real: &PowerLawFit,
    fit_gen: &PowerLawFit,
) -> Result<f64, FitError> {
    fit_gamma_from_slopes(fit_real.slope, fit_gen.slope)
}

/// [`goodness_of_fit_gamma`] on bare slopes (used where the compared
/// curves are fitted outside the histogram pipeline).
pub fn fit_gamma_from_slopes(slope_real: f64, slope_gen: f64) -> Result<f64, FitError> {
    if slope_real == 0.0 {
        return Err(FitError::ZeroReferenceSlope);
    }
    Ok(1.0 - (slope_real - slope_gen).abs() / slope_real.abs())
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Ols {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through (x, y) points. None when fewer than two
/// points or when x has no variance. A zero-variance y is a perfect fit
/// (r² = 1).
pub(crate) fn ols(points: &[(f64, f64)]) -> Option<Ols> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let ss_xx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let ss_yy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_xy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    if ss_xx == 0.0 {
        return None;
    }
    let slope = ss_xy / ss_xx;
    let r_squared = if ss_yy == 0.0 {
        1.0
    } else {
        (slope * slope * ss_xx / ss_yy).min(1.0)
    };
    Some(Ols {
        slope,
        intercept: mean_y - slope * mean_x,
        r_squared,
    })
}
