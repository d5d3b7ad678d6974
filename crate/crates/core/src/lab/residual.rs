use serde::Serialize;

use crate::error::{LsdError, Result};
use crate::ComplexValue;

/// A normalized residual whose log-log growth slope stays below this counts
/// as bounded over a desk-scale grid.
pub const BOUNDED_SLOPE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// `|E| (log x)^{-e} / x`, for partial sums of order `x`.
    PerX,
    /// `|E| (log x)^{-e}`, for logarithmic sums.
    LogOnly,
}

/// Residuals `E_i` on an increasing grid together with their normalized size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualGrid {
    pub grid: Vec<u64>,
    pub residuals: Vec<ComplexValue>,
    pub normalized: Vec<f64>,
    pub e_target: f64,
    pub normalization: Normalization,
    /// Geometric mean of consecutive grid ratios.
    pub spacing_ratio: f64,
}

impl ResidualGrid {
    pub fn new(
        grid: Vec<u64>,
        residuals: Vec<ComplexValue>,
        e_target: f64,
        normalization: Normalization,
    ) -> Result<Self> {
        if grid.len() != residuals.len() {
            return Err(LsdError::LengthMismatch {
                left: grid.len(),
                right: residuals.len(),
            });
        }
        if grid.is_empty() || grid[0] < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LsdError::InvalidParameter(
                "residual grid must be strictly increasing and start at >= 2".into(),
            ));
        }
        let normalized = grid
            .iter()
            .zip(&residuals)
            .map(|(&x, e)| {
                let x = x as f64;
                let scale = x.ln().powf(-e_target);
                match normalization {
                    Normalization::PerX => e.norm() * scale / x,
                    Normalization::LogOnly => e.norm() * scale,
                }
            })
            .collect();
        let spacing_ratio = if grid.len() > 1 {
            ((*grid.last().unwrap() as f64 / grid[0] as f64).ln() / (grid.len() - 1) as f64).exp()
        } else {
            1.0
        };
        Ok(ResidualGrid {
            grid,
            residuals,
            normalized,
            e_target,
            normalization,
            spacing_ratio,
        })
    }

    /// The points with `lo <= x <= hi`.
    pub fn window(&self, lo: u64, hi: u64) -> Result<ResidualGrid> {
        let (grid, residuals): (Vec<u64>, Vec<ComplexValue>) = self
            .grid
            .iter()
            .zip(&self.residuals)
            .filter(|(&x, _)| x >= lo && x <= hi)
            .map(|(&x, &e)| (x, e))
            .unzip();
        ResidualGrid::new(grid, residuals, self.e_target, self.normalization)
    }

    /// Least-squares slope of `log n_i` against `log log x_i` over the
    /// nonzero normalized values.
    pub fn growth_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .grid
            .iter()
            .zip(&self.normalized)
            .filter(|(_, &n)| n > 0.0)
            .map(|(&x, &n)| ((x as f64).ln().ln(), n.ln()))
            .collect();
        least_squares(&pts).map(|f| f.0)
    }

    /// Bounded in the desk-scale sense: no systematic growth of the
    /// normalized residual against `log log x`.
    pub fn is_bounded(&self) -> bool {
        self.growth_slope().map_or(true, |s| s <= BOUNDED_SLOPE)
    }

    /// `max n_i / min n_i` over the grid.
    pub fn spread(&self) -> f64 {
        let max = self.normalized.iter().cloned().fold(f64::MIN, f64::max);
        let min = self.normalized.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (u64, u64),
    pub points: usize,
}

/// `(slope, intercept, r^2)` of an ordinary least-squares line.
pub(crate) fn least_squares(pts: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some((slope, intercept, r2))
}

/// Minimum number of nonzero residuals for a fit.
pub const MIN_FIT_POINTS: usize = 5;

/// Fits `log |E_i / x_i|` (or `log |E_i|` for log-only grids) against
/// `log log x_i`.
pub fn fit_error_exponent(res: &ResidualGrid) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = res
        .grid
        .iter()
        .zip(&res.residuals)
        .filter(|(_, e)| e.norm() > 0.0)
        .map(|(&x, e)| {
            let xf = x as f64;
            let y = match res.normalization {
                Normalization::PerX => (e.norm() / xf).ln(),
                Normalization::LogOnly => e.norm().ln(),
            };
            (xf.ln().ln(), y)
        })
        .collect();
    if pts.is_empty() {
        return Err(LsdError::DegenerateFit { exact_vanishing: true });
    }
    if pts.len() < MIN_FIT_POINTS {
        return Err(LsdError::DegenerateFit { exact_vanishing: false });
    }
    let (slope, intercept, r_squared) =
        least_squares(&pts).ok_or(LsdError::DegenerateFit { exact_vanishing: false })?;
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
        window: (res.grid[0], *res.grid.last().unwrap()),
        points: pts.len(),
    })
}
