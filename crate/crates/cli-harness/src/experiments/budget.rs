//! Analytic error curves and the time/threshold optimum.

use dispersive_analytics::{
    c_asymptotic, error_budget, optimize_measurement, t_opt_fixed_point, ErrorModel, OptimizeMode,
};
use serde_json::json;

use super::common::theta;
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::output::{Artifact, Table};

/// Simple model, or the refined one centered at `cos 2θ` when `g/Δ` is given.
pub fn error_model(cfg: &ExperimentConfig) -> Result<ErrorModel> {
    if !cfg.model.refined {
        return Ok(ErrorModel::SIMPLE);
    }
    let cos2theta = match cfg.params.g_over_delta {
        Some(g) => Some((2.0 * theta(g)?).cos()),
        None => None,
    };
    Ok(ErrorModel { refined: true, cos2theta })
}

pub fn gamma_taus(cfg: &ExperimentConfig) -> Vec<f64> {
    match &cfg.grid.gamma_sw_tau {
        Some(spec) => spec.values(),
        None => cfg.params.gamma_sw_tau.into_iter().collect(),
    }
}

pub fn error_curve(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let model = error_model(cfg)?;
    let i_th = cfg.params.threshold();
    let ts = cfg.grid.t_over_tau.as_ref().map(|s| s.values()).unwrap_or_default();
    let mut t = Table::new(&[
        ("gamma_sw_tau", "switching rate times tau"),
        ("t_over_tau", "integration time over tau"),
        ("p_err_0", "error for |00>"),
        ("p_err_1", "error for |10bar>"),
        ("p_err", "mean of the two"),
    ]);
    let mut minima = Vec::new();
    for gt in gamma_taus(cfg) {
        let b = error_budget(gt, 1.0, i_th, &ts, model);
        for (k, &x) in ts.iter().enumerate() {
            t.push(vec![gt, x, b.p_err_0[k], b.p_err_1[k], b.p_err[k]]);
        }
        minima.push(json!({
            "gamma_sw_tau": gt,
            "t_opt_over_tau": b.t_opt,
            "p_err_min": b.p_err_min,
            "c_const": b.c_const,
            "t_opt_fixed_point": t_opt_fixed_point(gt),
            "warnings": b.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }));
    }
    Ok(vec![Artifact::new("error_curve", t, json!({ "threshold": i_th, "model": model, "minima": minima }))])
}

/// One row of the optimization table.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct OptimizeRow {
    pub gamma_sw_tau: f64,
    pub t_opt: f64,
    pub t_opt_fixed_point: f64,
    pub p_err_min: f64,
    pub c_const: f64,
    pub c_asymptotic: f64,
    pub t_opt_joint: f64,
    pub i_th_opt: f64,
    pub p_err_min_joint: f64,
    pub c_opt: f64,
}

impl OptimizeRow {
    pub fn c_ratio(&self) -> f64 {
        self.c_opt / self.c_const
    }

    /// `D` in `P_min − P_min,opt ≈ Γτ/D`.
    pub fn gain_denominator(&self) -> f64 {
        self.gamma_sw_tau / (self.p_err_min - self.p_err_min_joint)
    }

    pub fn relative_gain(&self) -> f64 {
        (self.p_err_min - self.p_err_min_joint) / self.p_err_min
    }

    /// `−I_th,opt·t_opt/τ`.
    pub fn threshold_factor(&self) -> f64 {
        -self.i_th_opt * self.t_opt_joint
    }
}

pub fn optimize_row(gt: f64, model: ErrorModel) -> Result<OptimizeRow> {
    let f = optimize_measurement(gt, 1.0, OptimizeMode::FixedZeroThreshold, model).map_err(HarnessError::runtime)?;
    let j = optimize_measurement(gt, 1.0, OptimizeMode::Joint, model).map_err(HarnessError::runtime)?;
    Ok(OptimizeRow {
        gamma_sw_tau: gt,
        t_opt: f.t_opt,
        t_opt_fixed_point: t_opt_fixed_point(gt),
        p_err_min: f.p_err_min,
        c_const: f.c_const,
        c_asymptotic: c_asymptotic(f.t_opt),
        t_opt_joint: j.t_opt,
        i_th_opt: j.i_th_opt,
        p_err_min_joint: j.p_err_min,
        c_opt: j.c_const,
    })
}

pub fn optimize(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let model = error_model(cfg)?;
    let mut t = Table::new(&[
        ("gamma_sw_tau", "switching rate times tau"),
        ("t_opt_over_tau", "optimal time at zero threshold"),
        ("t_opt_fixed_point", "fixed-point estimate of t_opt/tau"),
        ("p_err_min", "minimum error at zero threshold"),
        ("c_const", "C from P_min = (gamma tau / 2) ln(C / gamma tau)"),
        ("c_asymptotic", "e sqrt(2/pi) sqrt(tau/t_opt)"),
        ("t_opt_joint_over_tau", "optimal time with the threshold optimized too"),
        ("i_th_opt", "optimal threshold"),
        ("p_err_min_joint", "minimum error over time and threshold"),
        ("c_opt", "C for the joint minimum"),
        ("c_opt_over_c", "c_opt / c_const"),
        ("gain_denominator", "gamma tau / (p_err_min - p_err_min_joint)"),
        ("relative_gain", "(p_err_min - p_err_min_joint) / p_err_min"),
        ("threshold_factor", "-i_th_opt * t_opt_joint / tau"),
    ]);
    for gt in gamma_taus(cfg) {
        let r = optimize_row(gt, model)?;
        t.push(vec![
            r.gamma_sw_tau,
            r.t_opt,
            r.t_opt_fixed_point,
            r.p_err_min,
            r.c_const,
            r.c_asymptotic,
            r.t_opt_joint,
            r.i_th_opt,
            r.p_err_min_joint,
            r.c_opt,
            r.c_ratio(),
            r.gain_denominator(),
            r.relative_gain(),
            r.threshold_factor(),
        ]);
    }
    Ok(vec![Artifact::new("optimize", t, json!({ "model": model }))])
}
