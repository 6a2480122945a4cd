//! Ensemble populations and the Bloch path from the full or reduced master
//! equation, with telegraph fits against the regime formulas.

use dispersive_analytics::switching_rate_from_gamma_m;
use lindblad_engine::{
    evolve, evolve_reduced_dephasing, fit_telegraph, FitMode, InitialQubit, MasterEquation, Method,
    PopulationSeries, QuantumState, Schedule,
};
use operators_core::operators::Q10;
use operators_core::eigenbasis;
use serde::Serialize;
use serde_json::json;
use trajectory_sim::BlochState;

use super::common::{full_params, gamma_m, model_spec};
use crate::config::{ExperimentConfig, InitialName, ModelKind};
use crate::error::{HarnessError, Result};
use crate::output::{Artifact, Table};

pub struct PopulationRun {
    pub series: PopulationSeries,
    pub gamma_m: f64,
    pub g: f64,
    pub kappa: f64,
    pub n_cutoff: Option<usize>,
    pub dim: usize,
}

pub fn population_run(cfg: &ExperimentConfig) -> Result<PopulationRun> {
    let p = &cfg.params;
    let m = &cfg.model;
    let g = p.g_over_delta.unwrap_or(f64::NAN);
    let t_final = m.t_final_delta.unwrap_or(f64::NAN);
    match m.kind {
        ModelKind::Reduced => {
            let gm = p.gamma_m_over_delta.unwrap_or(f64::NAN);
            let eig = eigenbasis(g, 1.0).map_err(HarnessError::runtime)?;
            let rho0 = match m.initial {
                InitialName::Bare10 => BlochState::BARE_10.to_matrix(),
                InitialName::Eigen10bar => BlochState::excited(&eig).to_matrix(),
            };
            let series =
                evolve_reduced_dephasing(&rho0, gm, g, 1.0, t_final, m.samples).map_err(HarnessError::runtime)?;
            Ok(PopulationRun { series, gamma_m: gm, g, kappa: f64::INFINITY, n_cutoff: None, dim: 2 })
        }
        ModelKind::Full => {
            let kappa = p.kappa_over_delta.unwrap_or(f64::NAN);
            let sp = full_params(p, g, kappa, m);
            let me = MasterEquation::new(&sp, &model_spec(p, m)).map_err(HarnessError::runtime)?;
            let initial = match m.initial {
                InitialName::Bare10 => InitialQubit::Bare(Q10),
                InitialName::Eigen10bar => InitialQubit::Eigen10bar,
            };
            let s0 = QuantumState::initial(&me.space, &me.eigen, initial).map_err(HarnessError::runtime)?;
            let schedule = Schedule::covering(t_final, m.samples, me.max_dt() * m.dt_fraction);
            let (series, _) = evolve(&me, &s0, schedule, Method::Auto).map_err(HarnessError::runtime)?;
            Ok(PopulationRun { series, gamma_m: gamma_m(&sp), g, kappa, n_cutoff: Some(sp.n_cutoff), dim: me.dim() })
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateFit {
    pub rate: f64,
    pub residual: f64,
    pub points: usize,
}

fn fit(series: &PopulationSeries, p: &[f64], skip: f64) -> Option<RateFit> {
    fit_telegraph(&series.times, p, skip, FitMode::Pinned)
        .ok()
        .map(|f| RateFit { rate: f.gamma_sw(), residual: f.residual, points: f.n_points })
}

/// Fitted rates and the closed forms they are compared with.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeSummary {
    pub gamma_m: f64,
    pub n_cutoff: Option<usize>,
    pub dim: usize,
    pub fit_p10bar: Option<RateFit>,
    pub fit_p10: Option<RateFit>,
    /// `2g²/Γ_m`, the Zeno-regime rate.
    pub zeno_rate: f64,
    /// `2Γ_m(g/Ω)²/[1 + (2Ω/κ)²]`.
    pub switching_rate: f64,
    /// `2Γ_m(g/Δ)²`.
    pub simplified_rate: f64,
    /// `2(g/Δ)²`, the drop of `P_10` after collapse from `|10⟩`.
    pub collapse_drop: f64,
    /// `1 − P_10` at the last record.
    pub final_drop: f64,
}

pub fn summarize(run: &PopulationRun, fit_skip: f64) -> RegimeSummary {
    let s = &run.series;
    let (g, gm) = (run.g, run.gamma_m);
    let skip = fit_skip / gm;
    RegimeSummary {
        gamma_m: gm,
        n_cutoff: run.n_cutoff,
        dim: run.dim,
        fit_p10bar: fit(s, &s.p10bar, skip),
        fit_p10: fit(s, &s.p10, skip),
        zeno_rate: 2.0 * g * g / gm,
        switching_rate: switching_rate_from_gamma_m(gm, g, 1.0, run.kappa),
        simplified_rate: 2.0 * gm * g * g,
        collapse_drop: 2.0 * g * g,
        final_drop: 1.0 - s.p10.last().copied().unwrap_or(f64::NAN),
    }
}

pub fn regimes(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let run = population_run(cfg)?;
    let s = &run.series;
    let mut t = Table::new(&[
        ("t_delta", "time times Delta"),
        ("p10", "population of |10>"),
        ("p01", "population of |01>"),
        ("p00", "population of |00>"),
        ("p11", "population of |11>"),
        ("p10bar", "population of the eigenstate |10bar>"),
        ("p01bar", "population of the eigenstate |01bar>"),
        ("trace", "trace of the density matrix"),
        ("photons", "mean photon number in the simulation frame"),
    ]);
    for k in 0..s.len() {
        t.push(vec![s.times[k], s.p10[k], s.p01[k], s.p00[k], s.p11[k], s.p10bar[k], s.p01bar[k], s.trace[k], s.photons[k]]);
    }
    let summary = summarize(&run, cfg.model.fit_skip);
    Ok(vec![Artifact::new("populations", t, json!(summary))])
}

pub fn bloch(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let run = population_run(cfg)?;
    let s = &run.series;
    let mut t = Table::new(&[
        ("t_delta", "time times Delta"),
        ("x", "Bloch x of the {|10>, |01>} block"),
        ("y", "Bloch y"),
        ("z", "Bloch z, P10 - P01"),
        ("z_e", "component along the eigenbasis axis, P10bar - P01bar"),
        ("block_norm", "P10 + P01"),
    ]);
    for (k, b) in s.bloch.iter().enumerate() {
        t.push(vec![s.times[k], b.x, b.y, b.z, b.z_e, s.p10[k] + s.p01[k]]);
    }
    let summary = summarize(&run, cfg.model.fit_skip);
    let eig = eigenbasis(run.g, 1.0).map_err(HarnessError::runtime)?;
    let axis = [eig.sin2theta(), 0.0, eig.cos2theta()];
    Ok(vec![Artifact::new("bloch", t, json!({ "summary": summary, "eigen_axis": axis, "theta": eig.theta }))])
}
