//! Optimal integration time and threshold.

use operators_core::numerics::golden_section;
use serde::{Deserialize, Serialize};

use crate::budget::{c_from_minimum, ErrorModel};
use crate::error::{Error, Result};

/// Supported `Γ⁻τ`.
pub const GAMMA_TAU_RANGE: (f64, f64) = (1e-8, 0.05);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizeMode {
    FixedZeroThreshold,
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum {
    pub t_opt: f64,
    pub i_th_opt: f64,
    pub p_err_min: f64,
    pub c_const: f64,
}

const FIXED_POINT_ITERS: usize = 50;
const FIXED_POINT_TOL: f64 = 1e-12;

/// Iterates `x = ln[(2/π)/((Γτ)²x)]` from `x = 2 ln(1/4Γτ)`; this is the
/// exact stationarity condition of the simple zero-threshold model.
pub fn t_opt_fixed_point(gamma_tau: f64) -> f64 {
    let a = 2.0 / std::f64::consts::PI / (gamma_tau * gamma_tau);
    let mut x = 2.0 * (1.0 / (4.0 * gamma_tau)).ln();
    for _ in 0..FIXED_POINT_ITERS {
        let next = (a / x).ln();
        let done = ((next - x) / x).abs() < FIXED_POINT_TOL;
        x = next;
        if done {
            break;
        }
    }
    x
}

/// Minimum of `P_err` over `t` (and `I_th` in joint mode). Times are
/// returned in the units of `tau`.
pub fn optimize_measurement(
    gamma_sw_minus: f64,
    tau: f64,
    mode: OptimizeMode,
    model: ErrorModel,
) -> Result<Optimum> {
    let gt = gamma_sw_minus * tau;
    let (lo, hi) = GAMMA_TAU_RANGE;
    if !(lo..=hi).contains(&gt) {
        return Err(Error::OutOfRange { name: "gamma_sw_minus*tau", value: gt, lo, hi });
    }
    let seed = t_opt_fixed_point(gt);
    let (x, i_th, p) = match mode {
        OptimizeMode::FixedZeroThreshold if model == ErrorModel::SIMPLE => {
            (seed, 0.0, model.p_err(seed, 0.0, gt))
        }
        OptimizeMode::FixedZeroThreshold => {
            let (x, p) = golden_section(|x| model.p_err(x, 0.0, gt), 0.5 * seed, 2.0 * seed, 1e-10 * seed);
            (x, 0.0, p)
        }
        OptimizeMode::Joint => {
            let best_threshold = |x: f64| golden_section(|i| model.p_err(x, i, gt), -0.5, 0.5, 1e-10);
            let (x, p) = golden_section(|x| best_threshold(x).1, 0.5 * seed, 2.0 * seed, 1e-10 * seed);
            (x, best_threshold(x).0, p)
        }
    };
    Ok(Optimum { t_opt: x * tau, i_th_opt: i_th, p_err_min: p, c_const: c_from_minimum(p, gt) })
}
