//! Quantum-Bayesian trajectories for a qubit read out through a fast
//! resonator while coupled to a detuned neighbor, in the single-excitation
//! block `{|10⟩, |01⟩}`.
//!
//! Each step draws a readout sample `I` whose mean is `+1` for `|10⟩` and `−1`
//! for `|01⟩` and whose variance is `D = τ/dt`, updates the state by Bayes'
//! rule, and rotates it under the qubit-qubit Hamiltonian. The resonator does
//! not appear: this is the bad-cavity limit, and the caller is responsible
//! for `κ ≫ Δ, Γ_m`.

mod config;
mod ensemble;
mod error;
mod jumps;
mod state;
mod step;
mod trajectory;

pub use config::{Propagator, TrajectoryConfig, DEFAULT_HYSTERESIS, MAX_DT_OVER_TAU, MAX_OMEGA_DT};
pub use ensemble::{ground_readouts, run_ensemble, EnsembleResult, JumpStatistics};
pub use error::{Error, Result};
pub use jumps::{detect_jumps, Direction, JumpEvent};
pub use state::BlochState;
pub use step::{bayes_update, sample_readout, Rotation, StepOrder};
pub use trajectory::{run_trajectory, trajectory_rng, InitialState, TrajectoryRecord};
