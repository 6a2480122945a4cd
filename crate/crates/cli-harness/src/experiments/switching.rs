//! Switching rate fitted from the full master equation against the
//! classical-noise formula, over a `(g/Δ, κ/Δ)` grid.

use dispersive_analytics::switching_rate_from_gamma_m;
use lindblad_engine::{evolve, fit_telegraph, FitMode, InitialQubit, MasterEquation, Method, QuantumState, Schedule};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::common::{full_params, gamma_m, model_spec};
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::output::{Artifact, Table};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepPoint {
    pub g_over_delta: f64,
    pub kappa_over_delta: f64,
    pub gamma_m: f64,
    pub gamma_sw_fit: f64,
    pub gamma_sw_analytic: f64,
    pub n_cutoff: usize,
    pub dim: usize,
    pub steps_per_sample: u64,
}

impl SweepPoint {
    pub fn ratio(&self) -> f64 {
        self.gamma_sw_fit / self.gamma_sw_analytic
    }
}

pub fn sweep_points(cfg: &ExperimentConfig) -> Vec<(f64, f64)> {
    let gs = match &cfg.grid.g_over_delta {
        Some(spec) => spec.values(),
        None => cfg.params.g_over_delta.into_iter().collect(),
    };
    let kappas = cfg.grid.kappa_over_delta.as_ref().map(|s| s.values()).unwrap_or_default();
    gs.iter().flat_map(|&g| kappas.iter().map(move |&k| (g, k))).collect()
}

/// One sweep point: start in `|10bar⟩`, run to `1/Γ_sw` (unless the config
/// fixes the span) and fit `P(10bar)` past the collapse.
pub fn sweep_point(cfg: &ExperimentConfig, g: f64, kappa: f64) -> Result<SweepPoint> {
    let m = &cfg.model;
    let sp = full_params(&cfg.params, g, kappa, m);
    let gm = gamma_m(&sp);
    let expect = switching_rate_from_gamma_m(gm, g, 1.0, kappa);
    let me = MasterEquation::new(&sp, &model_spec(&cfg.params, m)).map_err(HarnessError::runtime)?;
    let s0 = QuantumState::initial(&me.space, &me.eigen, InitialQubit::Eigen10bar).map_err(HarnessError::runtime)?;
    let t_final = m.t_final_delta.unwrap_or(1.0 / expect);
    let schedule = Schedule::covering(t_final, m.samples, me.max_dt() * m.dt_fraction);
    let (series, _) = evolve(&me, &s0, schedule, Method::Auto).map_err(HarnessError::runtime)?;
    let fit = fit_telegraph(&series.times, &series.p10bar, m.fit_skip / gm, FitMode::Pinned)
        .map_err(|e| HarnessError::Runtime(format!("g/delta = {g}, kappa/delta = {kappa}: {e}")))?;
    Ok(SweepPoint {
        g_over_delta: g,
        kappa_over_delta: kappa,
        gamma_m: gm,
        gamma_sw_fit: fit.gamma_sw(),
        gamma_sw_analytic: expect,
        n_cutoff: sp.n_cutoff,
        dim: me.dim(),
        steps_per_sample: schedule.sample_every,
    })
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepPoint>> {
    // Points are independent; collect keeps grid order.
    sweep_points(cfg).into_par_iter().map(|(g, k)| sweep_point(cfg, g, k)).collect()
}

pub fn switching_sweep(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let points = run_sweep(cfg)?;
    let mut t = Table::new(&[
        ("g_over_delta", "qubit-qubit coupling over Delta"),
        ("kappa_over_delta", "resonator decay rate over Delta"),
        ("gamma_m", "measurement dephasing rate over Delta"),
        ("gamma_sw_fit", "switching rate from the telegraph fit, over Delta"),
        ("gamma_sw_analytic", "2 Gamma_m (g/Omega)^2 / [1 + (2 Omega/kappa)^2], over Delta"),
        ("ratio", "gamma_sw_fit / gamma_sw_analytic"),
        ("n_cutoff", "resonator photon cutoff"),
    ]);
    for p in &points {
        t.push(vec![
            p.g_over_delta,
            p.kappa_over_delta,
            p.gamma_m,
            p.gamma_sw_fit,
            p.gamma_sw_analytic,
            p.ratio(),
            p.n_cutoff as f64,
        ]);
    }
    let worst = points.iter().map(|p| (p.ratio() - 1.0).abs()).fold(0.0, f64::max);
    Ok(vec![Artifact::new("switching", t, json!({ "max_relative_mismatch": worst, "points": points }))])
}
