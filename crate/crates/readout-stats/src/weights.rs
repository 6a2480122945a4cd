//! Probabilities of 0, 1 and 2 switching events during the integration time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `Γ_sw·t` accepted for either rate.
pub const MAX_GAMMA_T: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightConvention {
    /// Poisson `p0` and `p2`, with `p1 = 1 − p0 − p2` absorbing the odd
    /// higher orders. Equal rates use the exact two-jump Poisson weight;
    /// unequal rates use `p2 ≈ Γ⁻Γ⁺t²/2`.
    #[default]
    Poisson,
    /// `p0 = e^{−Γ⁻t}`, `p1 = Γ⁻t(1 − 3Γ⁻t/4)`, `p2 = 0`. This folds the
    /// two-jump error `1/4` into `p1`; the weights sum to `1 − O((Γt)²)`.
    FoldedTwoJump,
    /// `p0 = e^{−Γ⁻t}`, `p1 = 1 − p0`, `p2 = 0`.
    OneJump,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpWeights {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
}

impl JumpWeights {
    pub fn sum(&self) -> f64 {
        self.p0 + self.p1 + self.p2
    }
}

/// Weights for `Γ⁻t = gm_t` and `Γ⁺t = gp_t`.
pub fn jump_weights(gm_t: f64, gp_t: f64, convention: WeightConvention) -> Result<JumpWeights> {
    if !(gm_t >= 0.0 && gp_t >= 0.0 && gm_t < MAX_GAMMA_T && gp_t < MAX_GAMMA_T) {
        return Err(Error::Weights(format!(
            "need 0 <= gamma*t < {MAX_GAMMA_T}, got {gm_t:.3e} and {gp_t:.3e}"
        )));
    }
    let p0 = (-gm_t).exp();
    let w = match convention {
        WeightConvention::Poisson => {
            let p2 = if gm_t == gp_t { 0.5 * gm_t * gm_t * p0 } else { 0.5 * gm_t * gp_t };
            JumpWeights { p0, p1: 1.0 - p0 - p2, p2 }
        }
        WeightConvention::FoldedTwoJump => JumpWeights { p0, p1: gm_t * (1.0 - 0.75 * gm_t), p2: 0.0 },
        WeightConvention::OneJump => JumpWeights { p0, p1: -(-gm_t).exp_m1(), p2: 0.0 },
    };
    if [w.p0, w.p1, w.p2].iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Weights(format!("{w:?}")));
    }
    Ok(w)
}
