//! Misidentification errors for telling `|00⟩` from `|10bar⟩` with the rule
//! "1" iff `Ī > I_th`.

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticHistogram;
use crate::empirical::EmpiricalHistogram;
use operators_core::numerics::erf;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReadoutHistogram {
    Analytic(AnalyticHistogram),
    Empirical(EmpiricalHistogram),
}

impl ReadoutHistogram {
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            ReadoutHistogram::Analytic(h) => h.cdf(x),
            ReadoutHistogram::Empirical(h) => h.cdf(x),
        }
    }

    pub fn tail_above(&self, x: f64) -> f64 {
        match self {
            ReadoutHistogram::Analytic(h) => h.tail_above(x),
            ReadoutHistogram::Empirical(h) => 1.0 - h.cdf(x),
        }
    }
}

impl From<AnalyticHistogram> for ReadoutHistogram {
    fn from(h: AnalyticHistogram) -> Self {
        ReadoutHistogram::Analytic(h)
    }
}

impl From<EmpiricalHistogram> for ReadoutHistogram {
    fn from(h: EmpiricalHistogram) -> Self {
        ReadoutHistogram::Empirical(h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationResult {
    pub i_th: f64,
    /// `P(Ī > I_th | 00)`.
    pub p_err_0: f64,
    /// `P(Ī ≤ I_th | 10bar)`.
    pub p_err_1: f64,
    pub p_err: f64,
    /// `p_err_1` for a bare `|10⟩` start, once [`bare_basis_error`] is applied.
    pub p_err_1_bare: Option<f64>,
    pub p_err_bare: Option<f64>,
}

pub fn error_probability(ground: &ReadoutHistogram, excited: &ReadoutHistogram, i_th: f64) -> DiscriminationResult {
    let p_err_0 = ground.tail_above(i_th).clamp(0.0, 1.0);
    let p_err_1 = excited.cdf(i_th).clamp(0.0, 1.0);
    DiscriminationResult { i_th, p_err_0, p_err_1, p_err: 0.5 * (p_err_0 + p_err_1), p_err_1_bare: None, p_err_bare: None }
}

/// `P_err(|10⟩) = cos 2θ·P_err(|10bar⟩) + sin²θ`: the bare state first
/// collapses onto `|01bar⟩` with probability `sin²θ`, which then reads as
/// "0" with probability `1 − P_err(|10bar⟩)`.
pub fn bare_basis_error(result: DiscriminationResult, theta: f64) -> DiscriminationResult {
    let bare = (2.0 * theta).cos() * result.p_err_1 + theta.sin().powi(2);
    DiscriminationResult { p_err_1_bare: Some(bare), p_err_bare: Some(0.5 * (result.p_err_0 + bare)), ..result }
}

/// One-jump error with the smoothing neglected and a tilted box:
/// `1/2 + I_th/2c − (Γ⁺−Γ⁻)t/8·(1 − I_th²/c²)`. Valid for
/// `c − |I_th| ≳ 2√(τ/t)`.
pub fn one_jump_error_flat(i_th: f64, cos2theta: f64, rate_difference_t: f64) -> f64 {
    let r = i_th / cos2theta;
    0.5 + 0.5 * r - rate_difference_t / 8.0 * (1.0 - r * r)
}

/// One-jump error near `I_th = 0` with the exact slope there.
pub fn one_jump_error_near_zero(i_th: f64, cos2theta: f64, t_over_tau: f64) -> f64 {
    0.5 + i_th / (2.0 * cos2theta) * erf(cos2theta / (2.0 / t_over_tau).sqrt())
}

/// Two-jump error of the unsmoothed ramp: `1/4 + I_th/2c + I_th²/4c²`.
pub fn two_jump_error_flat(i_th: f64, cos2theta: f64) -> f64 {
    let r = i_th / cos2theta;
    0.25 + 0.5 * r + 0.25 * r * r
}

/// Threshold in `[−1, 1]` minimizing the total error.
pub fn optimal_threshold(ground: &ReadoutHistogram, excited: &ReadoutHistogram) -> DiscriminationResult {
    let (i_th, _) = operators_core::numerics::golden_section(
        |x| error_probability(ground, excited, x).p_err,
        -1.0,
        1.0,
        1e-10,
    );
    error_probability(ground, excited, i_th)
}
