//! Steady resonator fields and the single-qubit rates built from them.

use num_complex::Complex64;
use operators_core::{eigenbasis, SystemParams};
use serde::Serialize;

use crate::error::Result;
use crate::switching::{switching_rates, SwitchingVariant};
use crate::Warning;

/// Steady coherent amplitudes for the main qubit excited (`+`) or ground (`−`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyFields {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub nbar_plus: f64,
    pub nbar_minus: f64,
    pub nbar_max: f64,
}

/// `α± = −iε / (κ/2 + i(Δ_r ± χ))`.
pub fn steady_state(p: &SystemParams) -> SteadyFields {
    let (alpha_plus, alpha_minus) = p.alpha_pm();
    SteadyFields {
        alpha_plus,
        alpha_minus,
        nbar_plus: alpha_plus.norm_sqr(),
        nbar_minus: alpha_minus.norm_sqr(),
        nbar_max: p.nbar_max(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementRates {
    /// ac Stark shift `δω_q`.
    pub stark: f64,
    pub gamma_m: f64,
    /// Distinguishability time; infinite when nothing is measured.
    pub tau: f64,
}

/// `δω_q = 2χ Re(α₊*α₋)`, `Γ_m = 2χ Im(α₊*α₋)`, `τ = 1/(2ηΓ_m)`.
pub fn dephasing_and_stark(fields: &SteadyFields, chi: f64, eta: f64) -> (MeasurementRates, Vec<Warning>) {
    let overlap = fields.alpha_plus.conj() * fields.alpha_minus;
    let stark = 2.0 * chi * overlap.re;
    let gamma_m = 2.0 * chi * overlap.im;
    let rate = 2.0 * eta * gamma_m;
    let mut warnings = Vec::new();
    let tau = if rate > 0.0 {
        1.0 / rate
    } else {
        warnings.push(Warning::NoMeasurement);
        f64::INFINITY
    };
    (MeasurementRates { stark, gamma_m, tau }, warnings)
}

/// `κ|α₊ − α₋|²/2`, the second form of the measurement dephasing.
pub fn gamma_m_from_separation(fields: &SteadyFields, kappa: f64) -> f64 {
    kappa * (fields.alpha_plus - fields.alpha_minus).norm_sqr() / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersiveDerived {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub nbar_plus: f64,
    pub nbar_minus: f64,
    pub nbar_max: f64,
    pub stark: f64,
    pub gamma_m: f64,
    pub tau: f64,
    pub theta: f64,
    pub omega: f64,
    pub gamma_sw_minus: f64,
    pub gamma_sw_plus: f64,
    #[serde(skip)]
    pub warnings: Vec<Warning>,
}

/// Every closed-form quantity for one parameter set.
pub fn derive(p: &SystemParams, variant: SwitchingVariant) -> Result<DispersiveDerived> {
    p.validate()?;
    let fields = steady_state(p);
    let (rates, mut warnings) = dephasing_and_stark(&fields, p.chi, p.eta);
    let eig = eigenbasis(p.g, p.delta)?;
    let sw = switching_rates(p, variant)?;
    warnings.extend(sw.warnings);
    Ok(DispersiveDerived {
        alpha_plus: fields.alpha_plus,
        alpha_minus: fields.alpha_minus,
        nbar_plus: fields.nbar_plus,
        nbar_minus: fields.nbar_minus,
        nbar_max: fields.nbar_max,
        stark: rates.stark,
        gamma_m: rates.gamma_m,
        tau: rates.tau,
        theta: eig.theta,
        omega: eig.omega,
        gamma_sw_minus: sw.minus,
        gamma_sw_plus: sw.plus,
        warnings,
    })
}
