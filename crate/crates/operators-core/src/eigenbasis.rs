//! Single-excitation eigenbasis `|10bar⟩ = cosθ|10⟩ + sinθ|01⟩`,
//! `|01bar⟩ = −sinθ|10⟩ + cosθ|01⟩` with `tan 2θ = 2g/Δ`, and Bloch coordinates
//! on the `{|10⟩, |01⟩}` block.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenbasisInfo {
    pub theta: f64,
    /// Signed splitting `E(10bar) − E(01bar)`; has the sign of Δ.
    pub omega: f64,
    /// Components on `(|10⟩, |01⟩)`.
    pub vec_10bar: [f64; 2],
    pub vec_01bar: [f64; 2],
}

impl EigenbasisInfo {
    pub fn cos2theta(&self) -> f64 {
        (2.0 * self.theta).cos()
    }

    pub fn sin2theta(&self) -> f64 {
        (2.0 * self.theta).sin()
    }

    /// Weight of `|01⟩` in `|10bar⟩`.
    pub fn tail_weight(&self) -> f64 {
        self.theta.sin().powi(2)
    }

    /// Projector onto `|10bar⟩` in the `{|10⟩, |01⟩}` block.
    pub fn projector_10bar(&self) -> Matrix2<Complex64> {
        let v = Vector2::new(self.vec_10bar[0], self.vec_10bar[1]).map(|x| Complex64::new(x, 0.0));
        v * v.transpose()
    }
}

pub fn eigenbasis(g: f64, delta: f64) -> Result<EigenbasisInfo> {
    if delta == 0.0 {
        return Err(Error::DegenerateDetuning);
    }
    if !g.is_finite() || !delta.is_finite() {
        return Err(Error::NonFinite("g/delta"));
    }
    let r = 2.0 * g / delta;
    let theta = 0.5 * r.atan();
    let (s, c) = theta.sin_cos();
    Ok(EigenbasisInfo {
        theta,
        omega: delta * (1.0 + r * r).sqrt(),
        vec_10bar: [c, s],
        vec_01bar: [-s, c],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochCoords {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// `P(10bar) − P(01bar)`.
    pub z_e: f64,
}

/// Expectation values of `x = |10⟩⟨01| + h.c.`, `y = −i|10⟩⟨01| + h.c.`,
/// `z = |10⟩⟨10| − |01⟩⟨01|` for the `{|10⟩, |01⟩}` block, plus the
/// eigenbasis coordinate obtained by rotating through `2θ`.
pub fn bloch_coords(rho: &Matrix2<Complex64>, theta: f64) -> BlochCoords {
    let coh = rho[(0, 1)];
    let x = 2.0 * coh.re;
    let y = -2.0 * coh.im;
    let z = rho[(0, 0)].re - rho[(1, 1)].re;
    let (s2, c2) = (2.0 * theta).sin_cos();
    BlochCoords { x, y, z, z_e: c2 * z + s2 * x }
}
