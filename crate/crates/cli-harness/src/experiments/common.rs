use dispersive_analytics::{dephasing_and_stark, steady_state};
use operators_core::{eigenbasis, Complex64, Frame, ModelSpec, QubitSubspace, SystemParams};
use trajectory_sim::TrajectoryConfig;

use crate::config::{FrameName, ModelSection, MonteCarlo, Params};
use crate::error::{HarnessError, Result};

pub fn frame(name: FrameName) -> Frame {
    match name {
        FrameName::Lab => Frame::Lab,
        FrameName::SteadyExcited => Frame::SteadyExcited,
        FrameName::SteadyMidpoint => Frame::SteadyMidpoint,
    }
}

pub fn model_spec(p: &Params, model: &ModelSection) -> ModelSpec {
    // Relaxation leaves the single-excitation block.
    let subspace = if p.t1_delta.is_some() { QubitSubspace::WithGround } else { QubitSubspace::SingleExcitation };
    ModelSpec { subspace, frame: frame(model.frame), stark_compensated: model.stark_compensated }
}

/// Full-model parameters with `Δ = 1` and the drive set for the target `n̄`.
/// The cutoff covers the larger of the two steady fields in `frame`.
pub fn full_params(p: &Params, g: f64, kappa: f64, model: &ModelSection) -> SystemParams {
    let chi = p.chi_over_delta.unwrap_or(f64::NAN);
    let delta_r = p.delta_r_over_delta.unwrap_or(0.0);
    let eps = SystemParams::drive_for_nbar(kappa, chi, delta_r, p.nbar.unwrap_or(f64::NAN));
    let mut sp = SystemParams {
        g,
        delta: 1.0,
        chi,
        kappa,
        drive_amp: Complex64::new(eps, 0.0),
        delta_r,
        eta: p.eta(),
        gamma_e: p.gamma_e_over_delta.unwrap_or(0.0),
        t1: p.t1_delta,
        n_cutoff: 4,
    };
    let d = frame(model.frame).displacement(&sp);
    let (ap, am) = sp.alpha_pm();
    let photons = (ap - d).norm_sqr().max((am - d).norm_sqr());
    sp.n_cutoff = SystemParams::default_cutoff(photons) + model.extra_cutoff;
    sp
}

/// `Γ_m` of the steady fields.
pub fn gamma_m(sp: &SystemParams) -> f64 {
    dephasing_and_stark(&steady_state(sp), sp.chi, sp.eta).0.gamma_m
}

pub fn theta(g: f64) -> Result<f64> {
    Ok(eigenbasis(g, 1.0).map_err(HarnessError::runtime)?.theta)
}

/// `Γ_sw·τ` in the bad-cavity limit, `(g/Ω)²/η`, unless overridden.
pub fn gamma_sw_tau(p: &Params, g: f64) -> f64 {
    p.gamma_sw_tau.unwrap_or_else(|| g * g / (1.0 + 4.0 * g * g) / p.eta())
}

/// Step indices for readouts at `t/τ` values; each must sit on the step lattice.
pub fn readout_steps(t_over_tau: &[f64], dt_over_tau: f64) -> std::result::Result<Vec<u64>, String> {
    let mut steps = Vec::with_capacity(t_over_tau.len());
    for &t in t_over_tau {
        let n = (t / dt_over_tau).round();
        if !(n >= 1.0) || ((n * dt_over_tau - t) / t).abs() > 1e-9 {
            return Err(format!("t/tau = {t} is not a positive multiple of dt/tau = {dt_over_tau}"));
        }
        steps.push(n as u64);
    }
    if !steps.windows(2).all(|w| w[0] < w[1]) {
        return Err("t/tau values must be strictly increasing".into());
    }
    Ok(steps)
}

pub fn trajectory_config(p: &Params, mc: &MonteCarlo, n_steps: u64) -> TrajectoryConfig {
    TrajectoryConfig {
        dt_over_tau: mc.dt_over_tau(),
        n_steps,
        eta: p.eta(),
        gamma_m: p.gamma_m_over_delta.unwrap_or(f64::NAN),
        gamma_e: p.gamma_e_over_delta.unwrap_or(0.0),
        g: p.g_over_delta.unwrap_or(f64::NAN),
        delta: 1.0,
        seed: mc.seed.unwrap_or(0),
        // Only the readouts are used; one record keeps memory flat.
        record_stride: n_steps.max(1),
        ..TrajectoryConfig::default()
    }
}

/// Stable file-name fragment for a number, e.g. `7` or `2p5`.
pub fn tag(x: f64) -> String {
    format!("{x}").replace('.', "p").replace('-', "m")
}
