//! Telegraph fits `P(t) = s + (1 − s)·e^{−λt}` style, with `λ = Γ⁺ + Γ⁻`
//! and saturation `s = Γ⁺/λ`. The amplitude is left free so that the
//! collapse transient before the fit window does not bias the rate.

use operators_core::numerics::{golden_section, linear_fit};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMode {
    /// Symmetric rates, saturation pinned at 1/2; linear fit of `ln(P − 1/2)`.
    Pinned,
    /// Free saturation; variable projection over `λ`.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelegraphFit {
    pub gamma_sw_minus: f64,
    pub gamma_sw_plus: f64,
    pub saturation: f64,
    pub amplitude: f64,
    /// RMS residual of the fitted curve.
    pub residual: f64,
    pub n_points: usize,
}

impl TelegraphFit {
    pub fn total_rate(&self) -> f64 {
        self.gamma_sw_minus + self.gamma_sw_plus
    }

    /// Mean of the two rates; equals either one in pinned mode.
    pub fn gamma_sw(&self) -> f64 {
        0.5 * self.total_rate()
    }
}

/// Minimum `λ·(t_last − t_first)` for a rate to be identifiable.
pub const MIN_DECAY_SPAN: f64 = 1e-3;

pub fn fit_telegraph(times: &[f64], p: &[f64], skip: f64, mode: FitMode) -> Result<TelegraphFit> {
    if times.len() != p.len() {
        return Err(Error::FitInsufficient("times and populations differ in length".into()));
    }
    let t0 = times.first().copied().unwrap_or(0.0);
    let (t, y): (Vec<f64>, Vec<f64>) =
        times.iter().zip(p).filter(|(&ti, _)| ti >= t0 + skip).map(|(&a, &b)| (a, b)).unzip();
    if t.len() < 3 {
        return Err(Error::FitInsufficient(format!("{} points after skip window", t.len())));
    }
    let span = t[t.len() - 1] - t[0];
    let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !(hi - lo > 1e-14) {
        return Err(Error::FitInsufficient(format!("population varies by only {:.1e}", hi - lo)));
    }
    let fit = match mode {
        FitMode::Pinned => fit_pinned(&t, &y)?,
        FitMode::Free => fit_free(&t, &y, span)?,
    };
    if fit.total_rate() * span < MIN_DECAY_SPAN || !fit.total_rate().is_finite() {
        return Err(Error::FitInsufficient(format!(
            "decay λ·span = {:.2e} below {MIN_DECAY_SPAN:.0e}",
            fit.total_rate() * span
        )));
    }
    Ok(fit)
}

fn fit_pinned(t: &[f64], y: &[f64]) -> Result<TelegraphFit> {
    let mut logs = Vec::with_capacity(y.len());
    for &v in y {
        if v <= 0.5 {
            return Err(Error::FitInsufficient(format!(
                "population {v:.6} at or below the pinned saturation 1/2"
            )));
        }
        logs.push((v - 0.5).ln());
    }
    let line = linear_fit(t, &logs)
        .ok_or_else(|| Error::FitInsufficient("degenerate time grid".into()))?;
    let lambda = -line.slope;
    let amp = line.intercept.exp();
    let residual = rms(t, y, 0.5, amp, lambda);
    Ok(TelegraphFit {
        gamma_sw_minus: lambda / 2.0,
        gamma_sw_plus: lambda / 2.0,
        saturation: 0.5,
        amplitude: amp,
        residual,
        n_points: t.len(),
    })
}

/// Best `(s, A)` for fixed `λ` in `y ≈ s + A·e^{−λ(t−t₀)}`, plus the squared error.
fn project(t: &[f64], y: &[f64], lambda: f64) -> (f64, f64, f64) {
    let t0 = t[0];
    let n = t.len() as f64;
    let (mut se, mut see, mut sy, mut sey) = (0.0, 0.0, 0.0, 0.0);
    for (&ti, &yi) in t.iter().zip(y) {
        let e = (-lambda * (ti - t0)).exp();
        se += e;
        see += e * e;
        sy += yi;
        sey += e * yi;
    }
    let det = n * see - se * se;
    let s = (see * sy - se * sey) / det;
    let a = (n * sey - se * sy) / det;
    let err: f64 = t
        .iter()
        .zip(y)
        .map(|(&ti, &yi)| (yi - s - a * (-lambda * (ti - t0)).exp()).powi(2))
        .sum();
    (s, a * (lambda * t0).exp(), err)
}

fn fit_free(t: &[f64], y: &[f64], span: f64) -> Result<TelegraphFit> {
    // Search ln λ between "barely decays over the window" and "decays within one sample".
    let dt_min = t.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let lo = (MIN_DECAY_SPAN / span).ln();
    let hi = (10.0 / dt_min).ln();
    let (x, _) = golden_section(|x| project(t, y, x.exp()).2, lo, hi, 1e-12);
    let lambda = x.exp();
    if (x - lo).abs() < 1e-6 || (x - hi).abs() < 1e-6 {
        return Err(Error::FitInsufficient(format!("rate {lambda:.3e} pinned at search bound")));
    }
    let (s, amp, _) = project(t, y, lambda);
    Ok(TelegraphFit {
        gamma_sw_minus: (1.0 - s) * lambda,
        gamma_sw_plus: s * lambda,
        saturation: s,
        amplitude: amp,
        residual: rms(t, y, s, amp, lambda),
        n_points: t.len(),
    })
}

fn rms(t: &[f64], y: &[f64], s: f64, amp: f64, lambda: f64) -> f64 {
    let ss: f64 =
        t.iter().zip(y).map(|(&ti, &yi)| (yi - s - amp * (-lambda * ti).exp()).powi(2)).sum();
    (ss / t.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dispersive_analytics::telegraph_population;

    #[test]
    fn recovers_exact_symmetric_curve() {
        let g = 1e3;
        let t: Vec<f64> = (0..400).map(|k| k as f64 * 2e-6).collect();
        let p: Vec<f64> = t.iter().map(|&x| telegraph_population(g, g, x)).collect();
        for mode in [FitMode::Pinned, FitMode::Free] {
            let f = fit_telegraph(&t, &p, 0.0, mode).unwrap();
            assert!((f.gamma_sw_minus / g - 1.0).abs() < 1e-6, "{mode:?} {f:?}");
            assert!((f.gamma_sw_plus / g - 1.0).abs() < 1e-6, "{mode:?} {f:?}");
        }
    }

    #[test]
    fn recovers_asymmetric_rates() {
        let (gm, gp) = (2.0, 1.0);
        let t: Vec<f64> = (0..300).map(|k| k as f64 * 0.01).collect();
        let p: Vec<f64> = t.iter().map(|&x| telegraph_population(gm, gp, x)).collect();
        let f = fit_telegraph(&t, &p, 0.5, FitMode::Free).unwrap();
        assert!((f.gamma_sw_minus - gm).abs() < 1e-6);
        assert!((f.gamma_sw_plus - gp).abs() < 1e-6);
        assert!((f.saturation - 1.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn flat_signal_is_rejected() {
        let t: Vec<f64> = (0..50).map(|k| k as f64).collect();
        let p = vec![0.9; 50];
        assert!(fit_telegraph(&t, &p, 0.0, FitMode::Free).is_err());
        assert!(fit_telegraph(&t, &p, 0.0, FitMode::Pinned).is_err());
    }
}
