use operators_core::SystemParams;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::switching::lorentz_filter;

/// `C` for the symmetric threshold.
pub const C_SYMMETRIC: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeighborSummary {
    pub gamma_sw_tau: f64,
    pub p_err_min_eigen: f64,
    pub p_err_min_bare: f64,
}

/// `P_min ≈ (Γτ/2) ln(C/Γτ)` with `Γτ = (g/Δ)²·κ²/(κ²+4Δ²)/η`, and the bare
/// basis paying an extra `(g/Δ)²/2` for the initial collapse.
pub fn neighbor_error_summary(p: &SystemParams, c: f64) -> Result<NeighborSummary> {
    p.validate()?;
    if p.eta <= 0.0 {
        return Err(Error::RegimeInvalid("eta = 0 gives no measurement".into()));
    }
    let r2 = (p.g / p.delta).powi(2);
    let gt = r2 * lorentz_filter(p.kappa, p.delta) / p.eta;
    let arg = c / gt;
    if arg <= 1.0 {
        return Err(Error::RegimeInvalid(format!("log argument C/(Γτ) = {arg:.3} is not above 1")));
    }
    let eigen = 0.5 * gt * arg.ln();
    Ok(NeighborSummary { gamma_sw_tau: gt, p_err_min_eigen: eigen, p_err_min_bare: eigen + 0.5 * r2 })
}
