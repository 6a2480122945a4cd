//! Ensemble-averaged dynamics of the resonator + two-qubit system.
//!
//! The default propagator is the Kraus interleave
//! `ρ ↦ U(Σ_k M_k ρ M_k†)U†` with `U = exp(−iH dt)`. Long, slow evolutions
//! are reached by exponentiating the one-step superoperator by repeated
//! squaring, which is exactly the same map iterated.

mod error;
pub mod fit;
pub mod kraus;
pub mod model;
pub mod propagate;
pub mod reduced;
pub mod rk4;
pub mod state;

pub use error::{Error, Result};
pub use fit::{fit_telegraph, FitMode, TelegraphFit};
pub use kraus::KrausPropagator;
pub use model::MasterEquation;
pub use propagate::{evolve, evolve_validated, Method, PopulationSeries, Schedule};
pub use reduced::evolve_reduced_dephasing;
pub use state::{InitialQubit, QuantumState, StateDiagnostics};
