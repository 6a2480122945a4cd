//! Misidentification probabilities for telling `|10bar⟩` from `|00⟩` with a
//! threshold on the time-averaged signal. Times are in units of `τ` inside
//! the formulas; the public API takes physical times.

use operators_core::numerics::{erfc, golden_section};
use serde::{Deserialize, Serialize};

use crate::Warning;

/// `Γ⁻·t` above which the few-jump picture is no longer trusted.
pub const VALIDITY_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorModel {
    /// Replace `Γt` by `1 − e^{−Γt}` and weight the no-jump Gaussian by `e^{−Γt}`.
    pub refined: bool,
    /// Center the excited Gaussian at `cos 2θ` instead of 1; `None` means 1.
    pub cos2theta: Option<f64>,
}

impl ErrorModel {
    pub const SIMPLE: ErrorModel = ErrorModel { refined: false, cos2theta: None };

    fn center(&self) -> f64 {
        self.cos2theta.unwrap_or(1.0)
    }

    /// `P_err^(0)` at `x = t/τ`.
    pub fn p_err_0(&self, x: f64, i_th: f64) -> f64 {
        0.5 * erfc((1.0 + i_th) * (x / 2.0).sqrt())
    }

    /// `P_err^(1)` at `x = t/τ` and `gt = Γ⁻τ`: surviving Gaussian plus one
    /// jump whose error is `1/2 + I_th/(2 cos 2θ)`.
    pub fn p_err_1(&self, x: f64, i_th: f64, gt: f64) -> f64 {
        let c = self.center();
        let s = gt * x;
        let (w, jumped) = if self.refined { ((-s).exp(), -(-s).exp_m1()) } else { (1.0, s) };
        w * 0.5 * erfc((c - i_th) * (x / 2.0).sqrt()) + jumped * 0.5 * (1.0 + i_th / c)
    }

    pub fn p_err(&self, x: f64, i_th: f64, gt: f64) -> f64 {
        0.5 * (self.p_err_0(x, i_th) + self.p_err_1(x, i_th, gt))
    }
}

/// `[1 − erf(√(t/2τ))]/2`, the error with no switching and zero threshold.
pub fn separation_error(t_over_tau: f64) -> f64 {
    0.5 * erfc((t_over_tau / 2.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBudget {
    pub t_grid: Vec<f64>,
    pub p_err_0: Vec<f64>,
    pub p_err_1: Vec<f64>,
    pub p_err: Vec<f64>,
    pub t_opt: f64,
    pub i_th_opt: f64,
    pub p_err_min: f64,
    /// `C` from `P_min = (Γτ/2) ln(C/Γτ)`.
    pub c_const: f64,
    #[serde(skip)]
    pub warnings: Vec<Warning>,
}

/// `C = Γτ·exp(2P_min/Γτ)`.
pub fn c_from_minimum(p_min: f64, gamma_tau: f64) -> f64 {
    gamma_tau * (2.0 * p_min / gamma_tau).exp()
}

/// `C ≈ e·√(2/π)·√(τ/t_opt)`, the large-`t_opt` form of the same constant.
pub fn c_asymptotic(t_opt_over_tau: f64) -> f64 {
    std::f64::consts::E * (2.0 / std::f64::consts::PI).sqrt() / t_opt_over_tau.sqrt()
}

/// Error curves at fixed threshold on `t_grid`, with the time optimum found
/// continuously inside the grid span.
pub fn error_budget(
    gamma_sw_minus: f64,
    tau: f64,
    i_th: f64,
    t_grid: &[f64],
    model: ErrorModel,
) -> ErrorBudget {
    let gt = gamma_sw_minus * tau;
    let mut warnings = Vec::new();
    let t_max = t_grid.iter().copied().fold(0.0, f64::max);
    if gamma_sw_minus * t_max > VALIDITY_LIMIT {
        warnings.push(Warning::BeyondFewJumps { gamma_t: gamma_sw_minus * t_max });
    }
    let xs: Vec<f64> = t_grid.iter().map(|t| t / tau).collect();
    let p0: Vec<f64> = xs.iter().map(|&x| model.p_err_0(x, i_th)).collect();
    let p1: Vec<f64> = xs.iter().map(|&x| model.p_err_1(x, i_th, gt)).collect();
    let p: Vec<f64> = p0.iter().zip(&p1).map(|(a, b)| 0.5 * (a + b)).collect();
    let t_min = t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let (mut x_opt, mut p_min) =
        golden_section(|x| model.p_err(x, i_th, gt), t_min / tau, t_max / tau, 1e-10 * t_max / tau);
    // The curve is unimodal for small Γτ; the grid guards the other cases.
    for (&x, &v) in xs.iter().zip(&p) {
        if v < p_min {
            x_opt = x;
            p_min = v;
        }
    }
    ErrorBudget {
        t_grid: t_grid.to_vec(),
        p_err_0: p0,
        p_err_1: p1,
        p_err: p,
        t_opt: x_opt * tau,
        i_th_opt: i_th,
        p_err_min: p_min,
        c_const: if gt > 0.0 { c_from_minimum(p_min, gt) } else { f64::NAN },
        warnings,
    }
}

/// `P(t) = Γ⁺/λ + (Γ⁻/λ)e^{−λt}`, `λ = Γ⁺ + Γ⁻`, starting from 1.
/// Written as `1 − (Γ⁻/λ)(1 − e^{−λt})` so small `λt` keeps full precision.
pub fn telegraph_population(gamma_minus: f64, gamma_plus: f64, t: f64) -> f64 {
    let l = gamma_minus + gamma_plus;
    if l == 0.0 {
        return 1.0;
    }
    1.0 + gamma_minus / l * (-l * t).exp_m1()
}
