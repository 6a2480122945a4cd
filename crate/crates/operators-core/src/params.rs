use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of one experiment, in any consistent angular-frequency
/// unit (the engines are scale free; configs use `Δ = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Qubit-qubit coupling.
    pub g: f64,
    /// Stark-shifted detuning between main qubit and neighbor.
    pub delta: f64,
    /// Dispersive shift.
    pub chi: f64,
    /// Resonator energy decay rate.
    pub kappa: f64,
    /// Drive amplitude in the drive frame.
    pub drive_amp: Complex64,
    /// Bare resonator-drive detuning.
    pub delta_r: f64,
    /// Quantum efficiency of the detection chain.
    pub eta: f64,
    /// Environmental dephasing (coherence decay rate).
    pub gamma_e: f64,
    /// Energy relaxation time; `None` means no relaxation.
    pub t1: Option<f64>,
    /// Resonator photon truncation.
    pub n_cutoff: usize,
}

/// Non-fatal diagnostics raised by [`SystemParams::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum ParamWarning {
    /// `|g/Δ|` above 1/3, where the dispersive neighbor picture degrades.
    WeakDispersiveNeighbor { ratio: f64 },
}

impl fmt::Display for ParamWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamWarning::WeakDispersiveNeighbor { ratio } => {
                write!(f, "|g/delta| = {ratio:.3} exceeds 1/3; neighbor is barely dispersive")
            }
        }
    }
}

fn finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam { name, reason: reason.into() }
}

impl SystemParams {
    /// Checks the hard invariants and returns soft warnings.
    pub fn validate(&self) -> Result<Vec<ParamWarning>> {
        finite("g", self.g)?;
        finite("delta", self.delta)?;
        finite("chi", self.chi)?;
        finite("kappa", self.kappa)?;
        finite("drive_amp.re", self.drive_amp.re)?;
        finite("drive_amp.im", self.drive_amp.im)?;
        finite("delta_r", self.delta_r)?;
        finite("eta", self.eta)?;
        finite("gamma_e", self.gamma_e)?;
        if let Some(t1) = self.t1 {
            if t1.is_nan() {
                return Err(Error::NonFinite("t1"));
            }
            if t1 <= 0.0 {
                return Err(invalid("t1", "must be positive"));
            }
        }
        if self.g <= 0.0 {
            return Err(invalid("g", "must be positive"));
        }
        if self.kappa <= 0.0 {
            return Err(invalid("kappa", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(invalid("eta", "must lie in [0, 1]"));
        }
        if self.gamma_e < 0.0 {
            return Err(invalid("gamma_e", "must be non-negative"));
        }
        if self.n_cutoff < 1 {
            return Err(invalid("n_cutoff", "must be at least 1"));
        }
        if self.delta == 0.0 {
            return Err(Error::DegenerateDetuning);
        }
        let ratio = (self.g / self.delta).abs();
        if ratio >= 0.5 {
            return Err(invalid("g", format!("|g/delta| = {ratio} must be below 1/2")));
        }
        let mut warnings = Vec::new();
        if ratio > 1.0 / 3.0 {
            warnings.push(ParamWarning::WeakDispersiveNeighbor { ratio });
        }
        Ok(warnings)
    }

    /// Steady coherent amplitudes `(α₊, α₋)` for the main qubit excited / ground.
    pub fn alpha_pm(&self) -> (Complex64, Complex64) {
        let i = Complex64::i();
        let half = self.kappa / 2.0;
        let ap = -i * self.drive_amp / Complex64::new(half, self.delta_r + self.chi);
        let am = -i * self.drive_amp / Complex64::new(half, self.delta_r - self.chi);
        (ap, am)
    }

    /// `4|ε|²/κ²`, the photon number with no dispersive pull.
    pub fn nbar_max(&self) -> f64 {
        4.0 * self.drive_amp.norm_sqr() / (self.kappa * self.kappa)
    }

    /// ac Stark shift `2χ Re(α₊*α₋)` of the main qubit.
    pub fn stark_shift(&self) -> f64 {
        let (ap, am) = self.alpha_pm();
        2.0 * self.chi * (ap.conj() * am).re
    }

    /// Real drive amplitude giving `(n̄₊ + n̄₋)/2 = nbar`.
    pub fn drive_for_nbar(kappa: f64, chi: f64, delta_r: f64, nbar: f64) -> f64 {
        let lp = 1.0 / (kappa * kappa / 4.0 + (delta_r + chi).powi(2));
        let lm = 1.0 / (kappa * kappa / 4.0 + (delta_r - chi).powi(2));
        (nbar / (0.5 * (lp + lm))).sqrt()
    }

    /// Poisson-tail cutoff `ceil(m + 8√m) + 2`, floored at 4.
    pub fn default_cutoff(photons: f64) -> usize {
        let m = photons.max(0.0);
        ((m + 8.0 * m.sqrt()).ceil() as usize + 2).max(4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SystemParams {
        SystemParams {
            g: 0.1,
            delta: 1.0,
            chi: 1e-3,
            kappa: 1.0,
            drive_amp: Complex64::new(0.5, 0.0),
            delta_r: 0.0,
            eta: 1.0,
            gamma_e: 0.0,
            t1: None,
            n_cutoff: 10,
        }
    }

    #[test]
    fn rejects_bad_values() {
        assert!(base().validate().unwrap().is_empty());
        let mut p = base();
        p.g = f64::NAN;
        assert_eq!(p.validate(), Err(Error::NonFinite("g")));
        let mut p = base();
        p.n_cutoff = 0;
        assert!(p.validate().is_err());
        let mut p = base();
        p.eta = 1.5;
        assert!(p.validate().is_err());
        let mut p = base();
        p.g = 0.6;
        assert!(p.validate().is_err());
        let mut p = base();
        p.g = 0.4;
        assert_eq!(p.validate().unwrap().len(), 1);
    }

    #[test]
    fn drive_reproduces_target_mean() {
        let (kappa, chi, dr) = (0.1, 3.5e-3, 0.02);
        let eps = SystemParams::drive_for_nbar(kappa, chi, dr, 10.0);
        let p = SystemParams { kappa, chi, delta_r: dr, drive_amp: eps.into(), ..base() };
        let (ap, am) = p.alpha_pm();
        let mean = 0.5 * (ap.norm_sqr() + am.norm_sqr());
        assert!((mean - 10.0).abs() < 1e-12);
    }

    #[test]
    fn cutoff_rule() {
        assert_eq!(SystemParams::default_cutoff(0.0), 4);
        // 10 + 8·3.1623 = 35.3 → 36 + 2
        assert_eq!(SystemParams::default_cutoff(10.0), 38);
    }
}
