use nalgebra::Matrix2;
use operators_core::linalg::{eigh, hermiticity_defect, trace, CMat};
use operators_core::operators::{Q00, Q01, Q10, Q11};
use operators_core::{Complex64, EigenbasisInfo, Space};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct QuantumState {
    pub rho: CMat,
    pub time: f64,
}

/// Qubit part of an initial product state; the resonator starts in vacuum of
/// the simulation frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialQubit {
    /// Bare label `q = 2·main + neighbor`.
    Bare(usize),
    Eigen10bar,
    Eigen01bar,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub trace_error: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl QuantumState {
    pub fn initial(space: &Space, eigen: &EigenbasisInfo, qubit: InitialQubit) -> Result<Self> {
        let amps: Vec<(usize, Complex64)> = match qubit {
            InitialQubit::Bare(q) => vec![(q, c(1.0))],
            InitialQubit::Eigen10bar => {
                vec![(Q10, c(eigen.vec_10bar[0])), (Q01, c(eigen.vec_10bar[1]))]
            }
            InitialQubit::Eigen01bar => {
                vec![(Q10, c(eigen.vec_01bar[0])), (Q01, c(eigen.vec_01bar[1]))]
            }
        };
        let rho_q = space.qubit_pure_state(&amps)?;
        Ok(QuantumState { rho: space.product_state(0, &rho_q), time: 0.0 })
    }

    /// Trace, Hermiticity and (full eigendecomposition) positivity checks.
    pub fn diagnostics(&self) -> StateDiagnostics {
        let (vals, _) = eigh(&self.rho);
        StateDiagnostics {
            trace_error: (trace(&self.rho) - c(1.0)).norm(),
            hermiticity: hermiticity_defect(&self.rho),
            min_eigenvalue: vals.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn check(&self, tol: f64) -> Result<()> {
        let d = self.diagnostics();
        if d.trace_error > tol || d.hermiticity > tol || d.min_eigenvalue < -tol {
            return Err(Error::InvalidState(format!(
                "trace error {:.2e}, hermiticity {:.2e}, min eigenvalue {:.2e}",
                d.trace_error, d.hermiticity, d.min_eigenvalue
            )));
        }
        Ok(())
    }
}

/// Populations and the `{|10⟩, |01⟩}` block of the qubit reduced state.
#[derive(Debug, Clone, Copy)]
pub struct QubitSnapshot {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
    pub block: Matrix2<Complex64>,
}

pub fn snapshot(space: &Space, rho: &CMat) -> QubitSnapshot {
    let red = space.reduce_qubits(rho);
    let pop = |q| space.subspace.position(q).map_or(0.0, |k| red[(k, k)].re);
    let k10 = space.subspace.position(Q10).expect("every subspace holds |10⟩");
    let k01 = space.subspace.position(Q01).expect("every subspace holds |01⟩");
    let block = Matrix2::new(red[(k10, k10)], red[(k10, k01)], red[(k01, k10)], red[(k01, k01)]);
    QubitSnapshot { p00: pop(Q00), p01: pop(Q01), p10: pop(Q10), p11: pop(Q11), block }
}
