//! Switching rates between `|10bar⟩` and `|01bar⟩`.
//!
//! `Γ⁻` is the downward rate out of `|10bar⟩` and is driven by photon-number
//! noise of the `n̄₊` field; `Γ⁺` is the return rate and uses `n̄₋`.

use std::str::FromStr;

use operators_core::{eigenbasis, SystemParams};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{dephasing_and_stark, steady_state};
use crate::Warning;

/// Sign convention for the experimental `χ` term in the filter denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiShift {
    /// `κ² + 4(±Ω − Δ_r ∓ χ)²`: photon energy before the switch.
    Before,
    /// `κ² + 4(±Ω − Δ_r ± χ)²`: photon energy after the switch.
    After,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchingVariant {
    /// Classical photon-number noise, `κ² + 4Ω²` filter.
    #[default]
    Classical,
    /// `2Γ_m(g/Δ)²·κ²/(κ² + 4Δ²)` for both directions.
    Simplified,
    /// Filter `κ² + 4(±Ω − Δ_r)²`, optionally with a `χ` term.
    DeltaRCorrected { chi: Option<ChiShift> },
}

impl FromStr for SwitchingVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(SwitchingVariant::Classical),
            "simplified" => Ok(SwitchingVariant::Simplified),
            "delta_r_corrected" => Ok(SwitchingVariant::DeltaRCorrected { chi: None }),
            "delta_r_chi_before" => Ok(SwitchingVariant::DeltaRCorrected { chi: Some(ChiShift::Before) }),
            "delta_r_chi_after" => Ok(SwitchingVariant::DeltaRCorrected { chi: Some(ChiShift::After) }),
            other => Err(Error::UnknownVariant(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchingRates {
    pub minus: f64,
    pub plus: f64,
    #[serde(skip)]
    pub warnings: Vec<Warning>,
}

/// Filter factor `κ²/(κ² + 4x²)`; 1 for an infinitely fast resonator.
pub fn lorentz_filter(kappa: f64, x: f64) -> f64 {
    1.0 / (1.0 + (2.0 * x / kappa).powi(2))
}

/// `2Γ_m(g/Ω)²·κ²/(κ² + 4Ω²)`: the classical rate with `8χ²n̄/κ → Γ_m`.
pub fn switching_rate_from_gamma_m(gamma_m: f64, g: f64, delta: f64, kappa: f64) -> f64 {
    let omega2 = delta * delta + 4.0 * g * g;
    2.0 * gamma_m * g * g / omega2 * lorentz_filter(kappa, omega2.sqrt())
}

/// `(Γ⁻, Γ⁺)` for the chosen variant, plus `1/T1` on `Γ⁻` and `2Γ_e(g/Ω)²`
/// on both when the parameters carry them.
pub fn switching_rates(p: &SystemParams, variant: SwitchingVariant) -> Result<SwitchingRates> {
    let eig = eigenbasis(p.g, p.delta)?;
    let omega = eig.omega;
    let mix = 2.0 * p.g * p.g / (omega * omega);
    let fields = steady_state(p);
    let noise = |nbar: f64| 8.0 * p.chi * p.chi * nbar / p.kappa;
    let (mut minus, mut plus) = match variant {
        SwitchingVariant::Classical => {
            let f = lorentz_filter(p.kappa, omega);
            (mix * noise(fields.nbar_plus) * f, mix * noise(fields.nbar_minus) * f)
        }
        SwitchingVariant::Simplified => {
            let (rates, _) = dephasing_and_stark(&fields, p.chi, p.eta);
            let r = 2.0 * rates.gamma_m * (p.g / p.delta).powi(2) * lorentz_filter(p.kappa, p.delta);
            (r, r)
        }
        SwitchingVariant::DeltaRCorrected { chi } => {
            let (cm, cp) = match chi {
                None => (0.0, 0.0),
                Some(ChiShift::Before) => (-p.chi, p.chi),
                Some(ChiShift::After) => (p.chi, -p.chi),
            };
            let fm = lorentz_filter(p.kappa, omega - p.delta_r + cm);
            let fp = lorentz_filter(p.kappa, -omega - p.delta_r + cp);
            (mix * noise(fields.nbar_plus) * fm, mix * noise(fields.nbar_minus) * fp)
        }
    };
    let env = 2.0 * p.gamma_e * p.g * p.g / (omega * omega);
    minus += env;
    plus += env;
    if let Some(t1) = p.t1 {
        minus += 1.0 / t1;
    }
    let mut warnings = Vec::new();
    let fastest = minus.max(plus);
    if fastest > omega.abs() / 10.0 {
        warnings.push(Warning::SwitchingNotSlow { rate: fastest, omega: omega.abs() });
    }
    Ok(SwitchingRates { minus, plus, warnings })
}
