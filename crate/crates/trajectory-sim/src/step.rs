//! One time step: readout sample, Bayesian update, and free rotation under
//! `H = (Δ/2)σ_z + gσ_x` on the `{|10⟩, |01⟩}` block.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::BlochState;

/// Which half of the split step comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOrder {
    /// Sample, Bayesian update, then rotate.
    #[default]
    MeasureFirst,
    /// Rotate, then sample and update.
    RotateFirst,
}

/// Draw `I` from the mixture of `N(+1, D)` with weight `ρ_10,10` and
/// `N(−1, D)` with weight `ρ_01,01`.
pub fn sample_readout<R: Rng + ?Sized>(state: &BlochState, variance: f64, rng: &mut R) -> f64 {
    let center = if rng.random::<f64>() < state.p10() { 1.0 } else { -1.0 };
    let xi: f64 = rng.sample(StandardNormal);
    center + variance.sqrt() * xi
}

/// Bayesian update for readout `I` over `dt`: the population ratio is
/// multiplied by `exp(2I·dt/τ)`, the coherence by `√(p'q'/pq)` and by
/// `coherence_factor = e^{−(Γ−ηΓ_m)dt}`.
pub fn bayes_update(state: &mut BlochState, readout: f64, dt_over_tau: f64, coherence_factor: f64) -> Result<()> {
    // s² is the likelihood ratio; s = √(ratio) keeps one exp per step.
    let s = (readout * dt_over_tau).exp();
    let p = 0.5 * (1.0 + state.z);
    let q = 0.5 * (1.0 - state.z);
    let ps2 = p * s * s;
    let norm = ps2 + q;
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Underflow { step: 0, readout });
    }
    state.z = (ps2 - q) / norm;
    let k = s * coherence_factor / norm;
    state.x *= k;
    state.y *= k;
    Ok(())
}

/// Exact rotation `exp(−iH dt)` acting on the Bloch vector: angle `Ω dt`
/// about `n = (sin 2θ, 0, cos 2θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl Rotation {
    pub fn new(g: f64, delta: f64, dt: f64) -> Self {
        let omega = (delta * delta + 4.0 * g * g).sqrt().copysign(delta);
        let (nx, nz) = if omega == 0.0 { (0.0, 1.0) } else { (2.0 * g / omega, delta / omega) };
        let (s, c) = (omega * dt).sin_cos();
        let v = 1.0 - c;
        // Rodrigues with n_y = 0.
        Rotation {
            m: [
                [c + v * nx * nx, -s * nz, v * nx * nz],
                [s * nz, c, -s * nx],
                [v * nx * nz, s * nx, c + v * nz * nz],
            ],
        }
    }

    pub fn apply(&self, b: &mut BlochState) {
        let m = &self.m;
        let (x, y, z) = (b.x, b.y, b.z);
        b.x = m[0][0] * x + m[0][1] * y + m[0][2] * z;
        b.y = m[1][0] * x + m[1][1] * y + m[1][2] * z;
        b.z = m[2][0] * x + m[2][1] * y + m[2][2] * z;
    }
}
