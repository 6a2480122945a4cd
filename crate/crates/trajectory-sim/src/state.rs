//! The `{|10⟩, |01⟩}` block as a Bloch vector. The trace is 1 by
//! construction; positivity is `x² + y² + z² ≤ 1`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use operators_core::EigenbasisInfo;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    /// `ρ_10,10 − ρ_01,01`.
    pub z: f64,
}

impl BlochState {
    pub const BARE_10: BlochState = BlochState { x: 0.0, y: 0.0, z: 1.0 };
    pub const BARE_01: BlochState = BlochState { x: 0.0, y: 0.0, z: -1.0 };

    /// `|10bar⟩`, the upper eigenstate when `Δ > 0`.
    pub fn excited(eig: &EigenbasisInfo) -> Self {
        BlochState { x: eig.sin2theta(), y: 0.0, z: eig.cos2theta() }
    }

    pub fn from_matrix(rho: &Matrix2<Complex64>) -> Self {
        let coh = rho[(0, 1)];
        BlochState { x: 2.0 * coh.re, y: -2.0 * coh.im, z: (rho[(0, 0)].re - rho[(1, 1)].re) }
    }

    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        Matrix2::new(
            c(0.5 * (1.0 + self.z), 0.0),
            c(0.5 * self.x, -0.5 * self.y),
            c(0.5 * self.x, 0.5 * self.y),
            c(0.5 * (1.0 - self.z), 0.0),
        )
    }

    pub fn p10(&self) -> f64 {
        0.5 * (1.0 + self.z)
    }

    /// `P(10bar) − P(01bar)` for the eigenbasis at `θ`.
    pub fn z_e(&self, eig: &EigenbasisInfo) -> f64 {
        eig.cos2theta() * self.z + eig.sin2theta() * self.x
    }

    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + self.x * self.x + self.y * self.y + self.z * self.z)
    }
}
