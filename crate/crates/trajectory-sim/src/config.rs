use operators_core::{eigenbasis, EigenbasisInfo};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::BlochState;
use crate::step::{bayes_update, sample_readout, Rotation, StepOrder};

/// Largest accepted `dt/τ`.
pub const MAX_DT_OVER_TAU: f64 = 1e-3;
/// Largest accepted `|Ω|·dt`; the split step needs the rotation per step small.
pub const MAX_OMEGA_DT: f64 = 0.2;
/// Hysteresis level for labeling `z_e`.
pub const DEFAULT_HYSTERESIS: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrajectoryConfig {
    pub dt_over_tau: f64,
    pub n_steps: u64,
    pub eta: f64,
    pub gamma_m: f64,
    pub gamma_e: f64,
    pub g: f64,
    pub delta: f64,
    pub seed: u64,
    /// Every `record_stride`-th step is stored; `Ī` itself uses every step.
    pub record_stride: u64,
    pub order: StepOrder,
    pub hysteresis: f64,
    /// Step size when `ηΓ_m = 0`. `τ` is then infinite and no readout is sampled.
    pub dt_unmeasured: Option<f64>,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        TrajectoryConfig {
            dt_over_tau: 1e-4,
            n_steps: 200_000,
            eta: 1.0,
            gamma_m: 1e-3,
            gamma_e: 0.0,
            g: 0.1,
            delta: 1.0,
            seed: 0,
            record_stride: 100,
            order: StepOrder::MeasureFirst,
            hysteresis: DEFAULT_HYSTERESIS,
            dt_unmeasured: None,
        }
    }
}

impl TrajectoryConfig {
    /// `τ = 1/(2ηΓ_m)`; infinite without measurement.
    pub fn tau(&self) -> f64 {
        1.0 / (2.0 * self.eta * self.gamma_m)
    }

    pub fn measured(&self) -> bool {
        self.eta * self.gamma_m > 0.0
    }

    pub fn dt(&self) -> f64 {
        if self.measured() {
            self.dt_over_tau * self.tau()
        } else {
            self.dt_unmeasured.unwrap_or(f64::NAN)
        }
    }

    /// Variance `D = τ/dt` of a single readout sample.
    pub fn variance(&self) -> f64 {
        1.0 / self.dt_over_tau
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return bad("eta must be in (0, 1]");
        }
        if !finite_nonneg(self.gamma_m) || !finite_nonneg(self.gamma_e) {
            return bad("gamma_m and gamma_e must be finite and non-negative");
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return bad("g must be finite and non-negative");
        }
        if self.record_stride == 0 {
            return bad("record_stride must be positive");
        }
        if !(self.hysteresis > 0.0 && self.hysteresis < 1.0) {
            return bad("hysteresis must be in (0, 1)");
        }
        if self.measured() {
            if !(self.dt_over_tau > 0.0 && self.dt_over_tau <= MAX_DT_OVER_TAU) {
                return bad("dt_over_tau must be in (0, 1e-3]");
            }
        } else if !self.dt_unmeasured.is_some_and(|dt| dt > 0.0 && dt.is_finite()) {
            return bad("without measurement a positive dt_unmeasured is required");
        }
        let eig = eigenbasis(self.g, self.delta)?;
        let omega_dt = eig.omega.abs() * self.dt();
        if omega_dt > MAX_OMEGA_DT {
            return Err(Error::InvalidConfig(format!("|omega|*dt = {omega_dt:.3} exceeds {MAX_OMEGA_DT}")));
        }
        Ok(())
    }
}

/// Validated per-step constants.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub eigen: EigenbasisInfo,
    pub dt: f64,
    /// 0 when unmeasured, which turns the Bayesian factor into 1.
    dt_over_tau: f64,
    variance: f64,
    coherence_factor: f64,
    rotation: Rotation,
    order: StepOrder,
    measured: bool,
}

impl Propagator {
    pub fn new(config: &TrajectoryConfig) -> Result<Self> {
        config.validate()?;
        let dt = config.dt();
        let measured = config.measured();
        let gamma = config.gamma_m + config.gamma_e;
        let unread = if measured { gamma - config.eta * config.gamma_m } else { gamma };
        Ok(Propagator {
            eigen: eigenbasis(config.g, config.delta)?,
            dt,
            dt_over_tau: if measured { config.dt_over_tau } else { 0.0 },
            variance: config.variance(),
            coherence_factor: (-unread * dt).exp(),
            rotation: Rotation::new(config.g, config.delta, dt),
            order: config.order,
            measured,
        })
    }

    /// Advance one step; returns the readout, or `None` when unmeasured.
    pub fn step<R: Rng + ?Sized>(&self, state: &mut BlochState, rng: &mut R) -> Result<Option<f64>> {
        if self.order == StepOrder::RotateFirst {
            self.rotation.apply(state);
        }
        let readout = if self.measured {
            let i = sample_readout(state, self.variance, rng);
            bayes_update(state, i, self.dt_over_tau, self.coherence_factor)?;
            Some(i)
        } else {
            state.x *= self.coherence_factor;
            state.y *= self.coherence_factor;
            None
        };
        if self.order == StepOrder::MeasureFirst {
            self.rotation.apply(state);
        }
        Ok(readout)
    }

    /// The same step with a given readout instead of a sampled one.
    pub fn step_with_readout(&self, state: &mut BlochState, readout: f64) -> Result<()> {
        if self.order == StepOrder::RotateFirst {
            self.rotation.apply(state);
        }
        bayes_update(state, readout, self.dt_over_tau, self.coherence_factor)?;
        if self.order == StepOrder::MeasureFirst {
            self.rotation.apply(state);
        }
        Ok(())
    }
}
