//! Classical fourth-order Runge–Kutta on the Lindblad equation, kept as an
//! oracle for the Kraus propagator.

use operators_core::linalg::CMat;
use operators_core::Complex64;

use crate::model::MasterEquation;
use crate::propagate::PopulationSeries;
use crate::state::QuantumState;

pub fn rk4_step(me: &MasterEquation, rho: &CMat, dt: f64) -> CMat {
    let h = |x: f64| Complex64::new(x, 0.0);
    let k1 = me.rhs(rho);
    let k2 = me.rhs(&(rho + &k1 * h(dt / 2.0)));
    let k3 = me.rhs(&(rho + &k2 * h(dt / 2.0)));
    let k4 = me.rhs(&(rho + &k3 * h(dt)));
    rho + (k1 + (k2 + k3) * h(2.0) + k4) * h(dt / 6.0)
}

/// RK4 evolution recorded every `sample_every` steps, `n_samples` times.
pub fn evolve_rk4(
    me: &MasterEquation,
    state0: &QuantumState,
    dt: f64,
    sample_every: u64,
    n_samples: usize,
) -> PopulationSeries {
    let mut series = PopulationSeries::default();
    let mut rho = state0.rho.clone();
    series.record(me, state0.time, &rho);
    for k in 1..=n_samples {
        for _ in 0..sample_every {
            rho = rk4_step(me, &rho, dt);
        }
        series.record(me, state0.time + dt * (sample_every * k as u64) as f64, &rho);
    }
    series
}
