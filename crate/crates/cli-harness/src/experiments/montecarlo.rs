//! Bayesian-trajectory readouts in the bad-cavity limit: error curves and
//! histograms with their analytic counterparts.

use dispersive_analytics::{separation_error, ErrorModel};
use readout_stats::{
    analytic_histogram_with, default_bin_width, empirical_histogram, error_probability, optimal_threshold,
    AnalyticHistogram, AnalyticOptions, EmpiricalHistogram, ReadoutHistogram, StateLabel, WeightConvention,
    MAX_GAMMA_T,
};
use serde::Serialize;
use serde_json::json;
use trajectory_sim::{ground_readouts, run_ensemble, EnsembleResult, InitialState, JumpStatistics};

use super::common::{gamma_sw_tau, readout_steps, tag, theta, trajectory_config};
use crate::config::{ExperimentConfig, MonteCarlo};
use crate::error::{HarnessError, Result};
use crate::output::{Artifact, Table};

/// Ensemble readouts for `|10bar⟩` (and `|00⟩` when asked) at each `t/τ`.
pub struct Readouts {
    pub t_over_tau: Vec<f64>,
    pub excited: EnsembleResult,
    pub ground: Option<Vec<Vec<f64>>>,
}

pub fn simulate(cfg: &ExperimentConfig, with_ground: bool) -> Result<Readouts> {
    let mc = cfg.monte_carlo.clone().unwrap_or_default();
    let ts = cfg.grid.t_over_tau.as_ref().map(|s| s.values()).unwrap_or_default();
    let steps = readout_steps(&ts, mc.dt_over_tau()).map_err(HarnessError::Runtime)?;
    let n_steps = steps.last().copied().unwrap_or(1);
    let tc = trajectory_config(&cfg.params, &mc, n_steps);
    let m = mc.trajectories.unwrap_or(0);
    let excited = run_ensemble(&tc, m, InitialState::Excited, &steps).map_err(HarnessError::runtime)?;
    let ground = if with_ground {
        Some(ground_readouts(&tc, m, &steps).map_err(HarnessError::runtime)?)
    } else {
        None
    };
    Ok(Readouts { t_over_tau: ts, excited, ground })
}

fn analytic(label: StateLabel, x: f64, theta: f64, gt: f64, convention: WeightConvention) -> Option<AnalyticHistogram> {
    if gt * x >= MAX_GAMMA_T {
        return None;
    }
    let options = AnalyticOptions { convention, ..Default::default() };
    analytic_histogram_with(label, x, 1.0, theta, gt, gt, options).ok()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct McPoint {
    pub t_over_tau: f64,
    /// Share of `|10bar⟩` runs with `Ī ≤ I_th`.
    pub p_err_1_mc: f64,
    pub std_err: f64,
    /// Histogram analytics: Poisson weights, smoothed one- and two-jump pieces.
    pub p_err_1_histogram: f64,
    /// `e^{−Γt}` weights, Gaussian at `cos 2θ`.
    pub p_err_1_refined: f64,
    /// `Γt/2`-style simple model.
    pub p_err_1_simple: f64,
}

pub fn error_points(cfg: &ExperimentConfig, r: &Readouts) -> Result<Vec<McPoint>> {
    let g = cfg.params.g_over_delta.unwrap_or(f64::NAN);
    let th = theta(g)?;
    let gt = gamma_sw_tau(&cfg.params, g);
    let i_th = cfg.params.threshold();
    let refined = ErrorModel { refined: true, cos2theta: Some((2.0 * th).cos()) };
    let m = r.excited.trajectories as f64;
    Ok(r.t_over_tau
        .iter()
        .zip(&r.excited.readouts)
        .map(|(&x, samples)| {
            let p = samples.iter().filter(|&&v| v <= i_th).count() as f64 / m;
            let histogram = analytic(StateLabel::Excited, x, th, gt, WeightConvention::Poisson)
                .map_or(f64::NAN, |h| h.cdf(i_th));
            McPoint {
                t_over_tau: x,
                p_err_1_mc: p,
                std_err: (p * (1.0 - p) / m).sqrt(),
                p_err_1_histogram: histogram,
                p_err_1_refined: refined.p_err_1(x, i_th, gt),
                p_err_1_simple: ErrorModel::SIMPLE.p_err_1(x, i_th, gt),
            }
        })
        .collect())
}

fn jump_summary(j: &JumpStatistics, tau: f64) -> serde_json::Value {
    json!({ "down": j.down, "up": j.up, "rate_times_tau": j.rate() * tau, "mean_transit_over_tau": j.mean_transit / tau })
}

pub fn error_mc(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let r = simulate(cfg, false)?;
    let points = error_points(cfg, &r)?;
    let mut t = Table::new(&[
        ("t_over_tau", "integration time over tau"),
        ("p_err_1_mc", "Monte Carlo error for |10bar>"),
        ("std_err", "binomial standard error of p_err_1_mc"),
        ("p_err_1_histogram", "histogram analytics with up to two jumps"),
        ("p_err_1_refined", "exp(-gamma t) weights, Gaussian at cos 2theta"),
        ("p_err_1_simple", "simple analytics"),
        ("p_err_0", "separation error for |00>"),
    ]);
    let i_th = cfg.params.threshold();
    for p in &points {
        let p0 = if i_th == 0.0 { separation_error(p.t_over_tau) } else { ErrorModel::SIMPLE.p_err_0(p.t_over_tau, i_th) };
        t.push(vec![p.t_over_tau, p.p_err_1_mc, p.std_err, p.p_err_1_histogram, p.p_err_1_refined, p.p_err_1_simple, p0]);
    }
    let g = cfg.params.g_over_delta.unwrap_or(f64::NAN);
    let tau = trajectory_config(&cfg.params, &MonteCarlo::default(), 1).tau();
    let results = json!({
        "threshold": i_th,
        "gamma_sw_tau": gamma_sw_tau(&cfg.params, g),
        "trajectories": r.excited.trajectories,
        "jumps": jump_summary(&r.excited.jumps, tau),
    });
    Ok(vec![Artifact::new("error_mc", t, results)])
}

fn component_densities(h: &AnalyticHistogram, x: f64) -> [f64; 3] {
    match h.label {
        StateLabel::Ground => [h.density(x), 0.0, 0.0],
        _ => {
            let w = h.weights;
            let [a, b, c] = h.components(x);
            [w.p0 * a, w.p1 * b, w.p2 * c]
        }
    }
}

fn bin_mass(h: &AnalyticHistogram, lo: f64, hi: f64) -> f64 {
    h.cdf(hi) - h.cdf(lo)
}

fn empirical_table(emp: &EmpiricalHistogram, two: &AnalyticHistogram, one: &AnalyticHistogram) -> Table {
    let mut t = Table::new(&[
        ("bin_lower", "lower bin edge (bins are right-closed)"),
        ("bin_center", "bin center"),
        ("count", "trajectories in the bin"),
        ("expected_count", "analytic expectation for the bin"),
        ("density_empirical", "count / (M * width)"),
        ("density_analytic", "bin-averaged analytic density, up to two jumps"),
        ("density_one_jump", "bin-averaged analytic density, one-jump weights"),
        ("p0_density", "no-jump component at the center"),
        ("p1_density", "one-jump component at the center"),
        ("p2_density", "two-jump component at the center"),
    ]);
    let (n, w) = (emp.total as f64, emp.width);
    for (j, &c) in emp.counts.iter().enumerate() {
        let lo = emp.lower_edge(j);
        let center = lo + 0.5 * w;
        let mass = bin_mass(two, lo, lo + w);
        let [p0, p1, p2] = component_densities(two, center);
        t.push(vec![lo, center, c as f64, n * mass, c as f64 / (n * w), mass / w, bin_mass(one, lo, lo + w) / w, p0, p1, p2]);
    }
    t
}

fn analytic_table(two: &AnalyticHistogram, one: &AnalyticHistogram, width: f64) -> Table {
    let mut t = Table::new(&[
        ("bin_lower", "lower bin edge"),
        ("bin_center", "bin center"),
        ("density_analytic", "bin-averaged analytic density, up to two jumps"),
        ("density_one_jump", "bin-averaged analytic density, one-jump weights"),
        ("p0_density", "no-jump component at the center"),
        ("p1_density", "one-jump component at the center"),
        ("p2_density", "two-jump component at the center"),
    ]);
    let reach = 1.0 + 8.0 * two.sigma();
    let (first, last) = ((-reach / width).floor() as i64, (reach / width).ceil() as i64);
    for k in first..last {
        let lo = k as f64 * width;
        let center = lo + 0.5 * width;
        let [p0, p1, p2] = component_densities(two, center);
        t.push(vec![
            lo,
            center,
            bin_mass(two, lo, lo + width) / width,
            bin_mass(one, lo, lo + width) / width,
            p0,
            p1,
            p2,
        ]);
    }
    t
}

pub fn histograms(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let p = &cfg.params;
    let g = p.g_over_delta.unwrap_or(f64::NAN);
    let th = theta(g)?;
    let gt = gamma_sw_tau(p, g);
    let i_th = p.threshold();
    let ts = cfg.grid.t_over_tau.as_ref().map(|s| s.values()).unwrap_or_default();
    let sampled = cfg.monte_carlo.as_ref().and_then(|m| m.trajectories).unwrap_or(0) > 0;
    let readouts = if sampled { Some(simulate(cfg, true)?) } else { None };
    let mut out = Vec::new();
    let mut summary = Table::new(&[
        ("t_over_tau", "integration time over tau"),
        ("threshold", "configured threshold"),
        ("p_err_0_analytic", "analytic error for |00> at the threshold"),
        ("p_err_1_analytic", "analytic error for |10bar> at the threshold"),
        ("p_err_analytic", "mean analytic error"),
        ("p_err_0_empirical", "empirical error for |00> (NaN without sampling)"),
        ("p_err_1_empirical", "empirical error for |10bar>"),
        ("p_err_empirical", "mean empirical error"),
        ("i_th_opt", "analytic optimal threshold"),
        ("p_err_opt", "analytic error at the optimal threshold"),
    ]);
    for (k, &x) in ts.iter().enumerate() {
        let ana = |label, conv| {
            analytic(label, x, th, gt, conv).ok_or_else(|| {
                HarnessError::Runtime(format!("gamma_sw*t = {:.3} at t/tau = {x} is beyond the jump expansion", gt * x))
            })
        };
        let e2 = ana(StateLabel::Excited, WeightConvention::Poisson)?;
        let e1 = ana(StateLabel::Excited, WeightConvention::OneJump)?;
        let g0 = ana(StateLabel::Ground, WeightConvention::Poisson)?;
        let at = error_probability(&g0.clone().into(), &e2.clone().into(), i_th);
        let best = optimal_threshold(&g0.clone().into(), &e2.clone().into());
        let mut emp_err = [f64::NAN; 3];
        match &readouts {
            Some(r) => {
                let ground = r.ground.as_ref().map(|gr| &gr[k]).ok_or_else(|| HarnessError::runtime("ground readouts missing"))?;
                let ee = empirical_histogram(StateLabel::Excited, &r.excited.readouts[k], x, None).map_err(HarnessError::runtime)?;
                let eg = empirical_histogram(StateLabel::Ground, ground, x, None).map_err(HarnessError::runtime)?;
                let d = error_probability(&ReadoutHistogram::from(eg.clone()), &ReadoutHistogram::from(ee.clone()), i_th);
                emp_err = [d.p_err_0, d.p_err_1, d.p_err];
                out.push(Artifact::new(format!("hist_10bar_t{}", tag(x)), empirical_table(&ee, &e2, &e1), json!({ "t_over_tau": x, "state": "10bar", "gamma_sw_tau": gt, "weights": e2.weights })));
                out.push(Artifact::new(format!("hist_00_t{}", tag(x)), empirical_table(&eg, &g0, &g0), json!({ "t_over_tau": x, "state": "00" })));
            }
            None => {
                let w = default_bin_width(x);
                out.push(Artifact::new(format!("hist_10bar_t{}", tag(x)), analytic_table(&e2, &e1, w), json!({ "t_over_tau": x, "state": "10bar", "gamma_sw_tau": gt, "weights": e2.weights })));
                out.push(Artifact::new(format!("hist_00_t{}", tag(x)), analytic_table(&g0, &g0, w), json!({ "t_over_tau": x, "state": "00" })));
            }
        }
        summary.push(vec![x, i_th, at.p_err_0, at.p_err_1, at.p_err, emp_err[0], emp_err[1], emp_err[2], best.i_th, best.p_err]);
    }
    let mut results = json!({ "gamma_sw_tau": gt, "theta": th, "sampled": sampled });
    if let Some(r) = &readouts {
        let tau = trajectory_config(p, &MonteCarlo::default(), 1).tau();
        results["trajectories"] = json!(r.excited.trajectories);
        results["jumps"] = jump_summary(&r.excited.jumps, tau);
    }
    out.push(Artifact::new("histograms_summary", summary, results));
    Ok(out)
}
