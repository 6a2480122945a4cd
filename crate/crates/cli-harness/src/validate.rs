//! Field-level checks of a config before anything runs. Problems are
//! returned as diagnostics; warnings do not block a run.

use dispersive_analytics::optimize::GAMMA_TAU_RANGE;
use readout_stats::MAX_GAMMA_T;

use crate::config::{Experiment, ExperimentConfig, GridSpec, ModelKind};
use crate::error::Diagnostic;
use crate::experiments::common::{full_params, gamma_sw_tau, model_spec, readout_steps, trajectory_config};
use crate::experiments::switching::sweep_points;

struct Checker {
    out: Vec<Diagnostic>,
}

impl Checker {
    fn error(&mut self, field: &str, msg: impl Into<String>) {
        self.out.push(Diagnostic::error(field, msg));
    }

    fn warning(&mut self, field: &str, msg: impl Into<String>) {
        self.out.push(Diagnostic::warning(field, msg));
    }

    fn require<T>(&mut self, field: &str, v: Option<T>) -> Option<T> {
        if v.is_none() {
            self.error(field, "required for this experiment");
        }
        v
    }

    /// `v` must be finite and inside `(lo, hi]` (or `[lo, hi]` when `closed`).
    fn range(&mut self, field: &str, v: Option<f64>, lo: f64, hi: f64, closed: bool) {
        if let Some(x) = v {
            let above = if closed { x >= lo } else { x > lo };
            if !(x.is_finite() && above && x <= hi) {
                let open = if closed { "[" } else { "(" };
                self.error(field, format!("{x} is outside {open}{lo}, {hi}]"));
            }
        }
    }

    fn grid(&mut self, field: &str, spec: &Option<GridSpec>, required: bool, lo: f64) -> Vec<f64> {
        let Some(spec) = spec else {
            if required {
                self.error(field, "required for this experiment");
            }
            return Vec::new();
        };
        if let GridSpec::Range { from, to, log: true, .. } = *spec {
            if !(from > 0.0 && to > 0.0) {
                self.error(field, "log ranges need positive endpoints");
                return Vec::new();
            }
        }
        let v = spec.values();
        if v.is_empty() {
            self.error(field, "grid is empty");
        }
        if let Some(bad) = v.iter().find(|x| !(x.is_finite() && **x > lo)) {
            self.error(field, format!("value {bad} must be finite and above {lo}"));
        }
        v
    }
}

pub fn validate(cfg: &ExperimentConfig) -> Vec<Diagnostic> {
    let mut c = Checker { out: Vec::new() };
    let p = &cfg.params;
    c.range("params.g_over_delta", p.g_over_delta, 0.0, 1.0, false);
    if let Some(k) = p.kappa_over_delta {
        if !(k > 0.0) {
            c.error("params.kappa_over_delta", format!("{k} must be positive (inf for the bad-cavity limit)"));
        }
    }
    c.range("params.chi_over_delta", p.chi_over_delta, 0.0, f64::MAX, false);
    c.range("params.nbar", p.nbar, 0.0, f64::MAX, true);
    c.range("params.gamma_m_over_delta", p.gamma_m_over_delta, 0.0, f64::MAX, false);
    c.range("params.eta", p.eta, 0.0, 1.0, false);
    c.range("params.delta_r_over_delta", p.delta_r_over_delta, f64::MIN, f64::MAX, true);
    c.range("params.gamma_e_over_delta", p.gamma_e_over_delta, 0.0, f64::MAX, true);
    c.range("params.t1_delta", p.t1_delta, 0.0, f64::MAX, false);
    c.range("params.gamma_sw_tau", p.gamma_sw_tau, 0.0, f64::MAX, false);
    c.range("params.threshold", p.threshold, -1.0, 1.0, true);
    if let Some(mc) = &cfg.monte_carlo {
        if mc.trajectories == Some(0) && cfg.experiment == Experiment::ErrorMc {
            c.error("monte_carlo.trajectories", "must be at least 1");
        }
        c.range("monte_carlo.dt_over_tau", mc.dt_over_tau, 0.0, trajectory_sim::MAX_DT_OVER_TAU, false);
    }
    if !cfg.experiment.stochastic() && cfg.seed().is_some() {
        c.warning("monte_carlo.seed", format!("{} is deterministic; the seed is unused", cfg.experiment));
    }
    match cfg.experiment {
        Experiment::Regimes | Experiment::Bloch => populations(&mut c, cfg),
        Experiment::SwitchingSweep => sweep(&mut c, cfg),
        Experiment::ErrorCurve => {
            gamma_grid(&mut c, cfg, false);
            c.grid("grid.t_over_tau", &cfg.grid.t_over_tau, true, -f64::MIN_POSITIVE);
            if cfg.model.refined && p.g_over_delta.is_none() {
                c.warning("params.g_over_delta", "refined model without g/Delta centers the Gaussian at 1");
            }
        }
        Experiment::Optimize => gamma_grid(&mut c, cfg, true),
        Experiment::ErrorMc => trajectories(&mut c, cfg),
        Experiment::Histograms => {
            c.require("params.g_over_delta", p.g_over_delta);
            let sampled = cfg.monte_carlo.as_ref().and_then(|m| m.trajectories).unwrap_or(0) > 0;
            if sampled {
                trajectories(&mut c, cfg);
                if p.gamma_sw_tau.is_some() {
                    c.warning("params.gamma_sw_tau", "overrides the analytic rate but not the simulated one");
                }
            } else {
                let ts = c.grid("grid.t_over_tau", &cfg.grid.t_over_tau, true, 0.0);
                jump_budget(&mut c, cfg, &ts, true);
            }
        }
    }
    c.out
}

fn populations(c: &mut Checker, cfg: &ExperimentConfig) {
    let p = &cfg.params;
    let m = &cfg.model;
    let g = c.require("params.g_over_delta", p.g_over_delta);
    c.require("model.t_final_delta", m.t_final_delta);
    c.range("model.t_final_delta", m.t_final_delta, 0.0, f64::MAX, false);
    if m.samples == 0 {
        c.error("model.samples", "must be at least 1");
    }
    c.range("model.dt_fraction", Some(m.dt_fraction), 0.0, 1.0, false);
    match m.kind {
        ModelKind::Reduced => {
            c.require("params.gamma_m_over_delta", p.gamma_m_over_delta);
        }
        ModelKind::Full => {
            let k = c.require("params.kappa_over_delta", p.kappa_over_delta);
            c.require("params.chi_over_delta", p.chi_over_delta);
            c.require("params.nbar", p.nbar);
            if let Some(k) = k {
                if !k.is_finite() {
                    c.error("params.kappa_over_delta", "the full model needs a finite kappa; use model.kind = \"reduced\"");
                }
            }
            if let (Some(g), Some(k)) = (g, k) {
                system(c, cfg, g, k, "params");
            }
        }
    }
}

/// Hard checks of the assembled full-model parameters.
fn system(c: &mut Checker, cfg: &ExperimentConfig, g: f64, kappa: f64, field: &str) {
    if c.out.iter().any(|d| d.is_error()) || !kappa.is_finite() {
        return;
    }
    let sp = full_params(&cfg.params, g, kappa, &cfg.model);
    match sp.validate() {
        Ok(warnings) => {
            for w in warnings {
                c.warning(field, w.to_string());
            }
        }
        Err(e) => c.error(field, e.to_string()),
    }
    if let Err(e) = lindblad_engine::MasterEquation::new(&sp, &model_spec(&cfg.params, &cfg.model)) {
        c.error(field, e.to_string());
    }
}

fn sweep(c: &mut Checker, cfg: &ExperimentConfig) {
    let p = &cfg.params;
    if cfg.model.kind != ModelKind::Full {
        c.error("model.kind", "the switching sweep fits the full model");
    }
    if cfg.grid.g_over_delta.is_none() {
        c.require("params.g_over_delta", p.g_over_delta);
    }
    c.grid("grid.g_over_delta", &cfg.grid.g_over_delta, false, 0.0);
    let kappas = c.grid("grid.kappa_over_delta", &cfg.grid.kappa_over_delta, true, 0.0);
    if kappas.iter().any(|k| k.is_infinite()) {
        c.error("grid.kappa_over_delta", "values must be finite");
    }
    c.require("params.chi_over_delta", p.chi_over_delta);
    c.require("params.nbar", p.nbar);
    if cfg.model.samples < 3 {
        c.error("model.samples", "a telegraph fit needs at least 3 samples");
    }
    c.range("model.dt_fraction", Some(cfg.model.dt_fraction), 0.0, 1.0, false);
    for (g, k) in sweep_points(cfg) {
        system(c, cfg, g, k, &format!("grid point g/delta = {g}, kappa/delta = {k}"));
    }
}

fn gamma_grid(c: &mut Checker, cfg: &ExperimentConfig, optimize: bool) {
    let values = match (&cfg.grid.gamma_sw_tau, cfg.params.gamma_sw_tau) {
        (Some(_), _) => c.grid("grid.gamma_sw_tau", &cfg.grid.gamma_sw_tau, true, 0.0),
        (None, Some(v)) => vec![v],
        (None, None) => {
            c.error("grid.gamma_sw_tau", "required for this experiment (or params.gamma_sw_tau)");
            Vec::new()
        }
    };
    if optimize {
        let (lo, hi) = GAMMA_TAU_RANGE;
        if let Some(v) = values.iter().find(|v| !(lo..=hi).contains(*v)) {
            c.error("grid.gamma_sw_tau", format!("{v} is outside the supported range [{lo}, {hi}]"));
        }
    }
}

/// Checks shared by the experiments that sample trajectories.
fn trajectories(c: &mut Checker, cfg: &ExperimentConfig) {
    let p = &cfg.params;
    let exp = cfg.experiment.name();
    c.require("params.g_over_delta", p.g_over_delta);
    let gm = c.require("params.gamma_m_over_delta", p.gamma_m_over_delta);
    if p.bad_cavity != Some(true) {
        c.error("params.bad_cavity", format!("{exp} simulates the bad-cavity limit; declare bad_cavity = true"));
    }
    if let Some(k) = p.kappa_over_delta {
        if k.is_finite() {
            c.warning("params.kappa_over_delta", "ignored: trajectories assume kappa >> Delta");
        }
    }
    if let Some(gm) = gm {
        if gm > 1.0 {
            let msg = format!("gamma_m/delta = {gm} > 1: switching is not slow compared with the splitting");
            c.warning("params.gamma_m_over_delta", msg);
        }
    }
    let Some(mc) = &cfg.monte_carlo else {
        c.error("monte_carlo", format!("{exp} needs a [monte_carlo] table with trajectories and seed"));
        return;
    };
    c.require("monte_carlo.trajectories", mc.trajectories);
    if mc.seed.is_none() {
        c.error("monte_carlo.seed", format!("required for the stochastic experiment {exp} (or pass --seed)"));
    }
    let ts = c.grid("grid.t_over_tau", &cfg.grid.t_over_tau, true, 0.0);
    if ts.is_empty() || c.out.iter().any(|d| d.is_error()) {
        return;
    }
    match readout_steps(&ts, mc.dt_over_tau()) {
        Ok(steps) => {
            let tc = trajectory_config(p, mc, *steps.last().unwrap_or(&1));
            if let Err(e) = tc.validate() {
                c.error("monte_carlo", e.to_string());
            }
        }
        Err(e) => c.error("grid.t_over_tau", e),
    }
    jump_budget(c, cfg, &ts, cfg.experiment == Experiment::Histograms);
}

/// The analytic overlays need `Γ_sw·t` inside the few-jump expansion.
fn jump_budget(c: &mut Checker, cfg: &ExperimentConfig, ts: &[f64], hard: bool) {
    let Some(g) = cfg.params.g_over_delta else { return };
    let gt = gamma_sw_tau(&cfg.params, g);
    if let Some(x) = ts.iter().find(|x| gt * **x >= MAX_GAMMA_T) {
        let msg = format!("gamma_sw*t = {:.3} at t/tau = {x} is beyond the jump expansion (< {MAX_GAMMA_T})", gt * x);
        if hard {
            c.error("grid.t_over_tau", msg);
        } else {
            c.warning("grid.t_over_tau", format!("{msg}; analytic columns will be NaN"));
        }
    }
}
