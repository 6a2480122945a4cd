//! Operators for a dispersively read-out transmon with a detuned neighbor.
//!
//! The composite space is `resonator ⊗ qubits`, with the resonator truncated
//! at `n_cutoff` photons and the qubit factor optionally restricted to a
//! subspace of `{|00⟩, |01⟩, |10⟩, |11⟩}`. Qubit labels are `|main, neighbor⟩`.

mod error;
pub mod eigenbasis;
pub mod hamiltonian;
pub mod linalg;
pub mod numerics;
pub mod operators;
pub mod params;

pub use eigenbasis::{bloch_coords, eigenbasis, BlochCoords, EigenbasisInfo};
pub use error::{Error, Result};
pub use hamiltonian::{build_hamiltonian, build_hamiltonian_with, Frame, ModelSpec};
pub use linalg::{CMat, OperatorMatrix};
pub use num_complex::Complex64;
pub use operators::{QubitSubspace, Space};
pub use params::{ParamWarning, SystemParams};
