//! Closed-form results for dispersive readout next to a detuned neighbor:
//! steady fields, ac Stark shift and measurement dephasing, switching rates
//! between the two-qubit eigenstates, and the measurement-error budget.
//!
//! Everything here is a pure function of its arguments.

use std::fmt;

pub mod budget;
mod error;
pub mod fields;
pub mod neighbor;
pub mod optimize;
pub mod switching;

pub use budget::{c_asymptotic, c_from_minimum, error_budget, separation_error, telegraph_population, ErrorBudget, ErrorModel};
pub use error::{Error, Result};
pub use fields::{dephasing_and_stark, derive, steady_state, DispersiveDerived, MeasurementRates, SteadyFields};
pub use neighbor::{neighbor_error_summary, NeighborSummary};
pub use optimize::{optimize_measurement, t_opt_fixed_point, OptimizeMode, Optimum};
pub use switching::{switching_rate_from_gamma_m, switching_rates, ChiShift, SwitchingRates, SwitchingVariant};

/// Conditions worth reporting that do not invalidate a result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// `Γ_m = 0`, so `τ` is infinite.
    NoMeasurement,
    /// Switching is not slow compared with the splitting.
    SwitchingNotSlow { rate: f64, omega: f64 },
    /// `Γ⁻t` beyond the few-jump error model.
    BeyondFewJumps { gamma_t: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NoMeasurement => write!(f, "no measurement dephasing; tau is infinite"),
            Warning::SwitchingNotSlow { rate, omega } => {
                write!(f, "switching rate {rate:.3e} exceeds omega/10 = {:.3e}", omega / 10.0)
            }
            Warning::BeyondFewJumps { gamma_t } => {
                write!(f, "gamma_sw*t = {gamma_t:.3} beyond the few-jump error model")
            }
        }
    }
}
