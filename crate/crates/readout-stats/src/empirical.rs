//! Binned `Ī` samples. Bins are right-closed, `(k·w, (k+1)·w]`, on a lattice
//! that contains 0, so a readout exactly on the threshold counts as "0".

use serde::{Deserialize, Serialize};

use crate::analytic::StateLabel;
use crate::error::{Error, Result};

/// `√(τ/t)/5` rounded down to `1/n`, so that −1, 0 and +1 are bin edges.
pub fn default_bin_width(t_over_tau: f64) -> f64 {
    let w = t_over_tau.recip().sqrt() / 5.0;
    1.0 / (1.0 / w).ceil()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalHistogram {
    pub label: StateLabel,
    pub t_over_tau: f64,
    pub width: f64,
    /// Bin `j` covers `((first_bin + j)·w, (first_bin + j + 1)·w]`.
    pub first_bin: i64,
    pub counts: Vec<u64>,
    pub total: u64,
}

fn bin_of(x: f64, width: f64) -> i64 {
    (x / width).ceil() as i64 - 1
}

/// Histogram of `samples` with bin width `width` (default from `t/τ`).
pub fn empirical_histogram(
    label: StateLabel,
    samples: &[f64],
    t_over_tau: f64,
    width: Option<f64>,
) -> Result<EmpiricalHistogram> {
    if samples.is_empty() {
        return Err(Error::Empty);
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite readout".into()));
    }
    let width = width.unwrap_or_else(|| default_bin_width(t_over_tau));
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidInput("bin width must be positive".into()));
    }
    let lo = samples.iter().map(|&x| bin_of(x, width)).min().unwrap_or(0);
    let hi = samples.iter().map(|&x| bin_of(x, width)).max().unwrap_or(0);
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for &x in samples {
        counts[(bin_of(x, width) - lo) as usize] += 1;
    }
    Ok(EmpiricalHistogram { label, t_over_tau, width, first_bin: lo, counts, total: samples.len() as u64 })
}

impl EmpiricalHistogram {
    pub fn lower_edge(&self, j: usize) -> f64 {
        (self.first_bin + j as i64) as f64 * self.width
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|j| self.lower_edge(j) + 0.5 * self.width).collect()
    }

    /// Count divided by total; these sum to 1 up to rounding of the division.
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.total as f64).collect()
    }

    pub fn densities(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / (self.total as f64 * self.width)).collect()
    }

    /// Fraction at or below `x`; exact when `x` is a bin edge, linear inside
    /// a bin otherwise.
    pub fn cdf(&self, x: f64) -> f64 {
        let mut below = 0.0;
        for (j, &c) in self.counts.iter().enumerate() {
            let lo = self.lower_edge(j);
            let hi = lo + self.width;
            if hi <= x {
                below += c as f64;
            } else if lo < x {
                below += c as f64 * (x - lo) / self.width;
            }
        }
        below / self.total as f64
    }

    /// Combine two histograms of the same label, time and width.
    pub fn merge(&self, other: &EmpiricalHistogram) -> Result<EmpiricalHistogram> {
        if self.label != other.label || self.width != other.width || self.t_over_tau != other.t_over_tau {
            return Err(Error::InvalidInput("histograms differ in label, time or width".into()));
        }
        let lo = self.first_bin.min(other.first_bin);
        let hi = (self.first_bin + self.counts.len() as i64).max(other.first_bin + other.counts.len() as i64);
        let mut counts = vec![0u64; (hi - lo) as usize];
        for h in [self, other] {
            for (j, &c) in h.counts.iter().enumerate() {
                counts[(h.first_bin - lo) as usize + j] += c;
            }
        }
        Ok(EmpiricalHistogram { counts, first_bin: lo, total: self.total + other.total, ..self.clone() })
    }
}
