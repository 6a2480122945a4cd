//! Rotating-frame Hamiltonian
//! `H = Δ_r a†a + (δq/2)σz₁ + (δn/2)σz₂ + χσz₁a†a + g(|01⟩⟨10| + h.c.) + εa† + ε*a`.
//!
//! With a displaced frame `a = b + α` the same dynamics are written for `b`:
//! `Δ_r b†b + χσz₁(b†b + αb† + α*b) + χ|α|²σz₁ + (ε' b† + h.c.)` with
//! `ε' = ε + (Δ_r − iκ/2)α`; the `−iκα/2` piece comes from `κD[b + α]`.
//! The resonator damping is then `κD[b]`, so downstream engines need no change.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::CMat;
use crate::operators::{QubitSubspace, Space};
use crate::params::SystemParams;

/// Resonator displacement applied before truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    #[default]
    Lab,
    /// Displace by `α₊`, the steady field with the main qubit excited.
    SteadyExcited,
    /// Displace by `(α₊ + α₋)/2`.
    SteadyMidpoint,
    Custom(Complex64),
}

impl Frame {
    pub fn displacement(self, params: &SystemParams) -> Complex64 {
        let (ap, am) = params.alpha_pm();
        match self {
            Frame::Lab => Complex64::new(0.0, 0.0),
            Frame::SteadyExcited => ap,
            Frame::SteadyMidpoint => 0.5 * (ap + am),
            Frame::Custom(a) => a,
        }
    }
}

/// How the composite model is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub subspace: QubitSubspace,
    pub frame: Frame,
    /// Offset the neighbor by the drive-induced Stark shift so that the
    /// shifted detuning equals `params.delta`.
    pub stark_compensated: bool,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec { subspace: QubitSubspace::Full, frame: Frame::Lab, stark_compensated: false }
    }
}

impl ModelSpec {
    pub fn space(&self, params: &SystemParams) -> Space {
        Space::new(params.n_cutoff, self.subspace)
    }

    /// `(δq, δn)`: the main qubit carries the frame, the neighbor sits at `−Δ`
    /// (or `−(Δ − δω_q)` when compensated).
    pub fn qubit_offsets(&self, params: &SystemParams) -> (f64, f64) {
        let stark = if self.stark_compensated { params.stark_shift() } else { 0.0 };
        (0.0, -(params.delta - stark))
    }
}

/// Lab-frame Hamiltonian on the full qubit space.
pub fn build_hamiltonian(params: &SystemParams) -> Result<CMat> {
    build_hamiltonian_with(params, &ModelSpec::default())
}

pub fn build_hamiltonian_with(params: &SystemParams, spec: &ModelSpec) -> Result<CMat> {
    params.validate()?;
    let space = spec.space(params);
    let alpha = spec.frame.displacement(params);
    let (dq, dn) = spec.qubit_offsets(params);
    let re = |x: f64| Complex64::new(x, 0.0);

    let b = space.destroy_resonator();
    let bd = b.adjoint();
    let num = space.number_resonator();
    let id_r = space.resonator_identity();
    let eps = params.drive_amp + Complex64::new(params.delta_r, -params.kappa / 2.0) * alpha;
    let drive = &bd * eps + &b * eps.conj();
    let cross = &bd * alpha + &b * alpha.conj();

    let sz1 = space.restrict_qubit(&crate::operators::qubit4::sz_main())?;
    let sz2 = space.restrict_qubit(&crate::operators::qubit4::sz_neighbor())?;
    let x = space.restrict_qubit(&crate::operators::qubit4::swap_coupling())?;
    let id_q = space.qubit_identity();

    let chi = re(params.chi);
    let mut h = space.compose(&(&num * re(params.delta_r) + drive), &id_q);
    h += space.compose(&((&num + cross) * chi), &sz1);
    let qubit_part = &sz1 * re(params.chi * alpha.norm_sqr() + dq / 2.0)
        + &sz2 * re(dn / 2.0)
        + &x * re(params.g);
    h += space.compose(&id_r, &qubit_part);
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, hermiticity_defect, max_abs};
    use crate::operators::{Q01, Q10};

    fn params() -> SystemParams {
        SystemParams {
            g: 0.1,
            delta: 1.0,
            chi: 1e-3,
            kappa: 1.0,
            drive_amp: Complex64::new(0.0, 0.0),
            delta_r: 0.0,
            eta: 1.0,
            gamma_e: 0.0,
            t1: None,
            n_cutoff: 5,
        }
    }

    #[test]
    fn decoupled_limit_is_block_diagonal_resonator_ladder() {
        let p = SystemParams { g: 1e-300, chi: 0.0, delta_r: 0.3, ..params() };
        let spec = ModelSpec::default();
        let h = build_hamiltonian_with(&p, &spec).unwrap();
        let s = spec.space(&p);
        for n in 0..=p.n_cutoff {
            for &q in &[0usize, 1, 2, 3] {
                let i = s.index(n, q).unwrap();
                let (dq, dn) = spec.qubit_offsets(&p);
                let sz1 = if q >> 1 == 1 { 1.0 } else { -1.0 };
                let sz2 = if q & 1 == 1 { 1.0 } else { -1.0 };
                let e = 0.3 * n as f64 + dq / 2.0 * sz1 + dn / 2.0 * sz2;
                assert!((h[(i, i)].re - e).abs() < 1e-14);
            }
        }
        let off = h.clone() - CMat::from_diagonal(&h.diagonal());
        assert!(max_abs(&off) < 1e-250);
    }

    #[test]
    fn single_excitation_splitting() {
        let p = params();
        let spec = ModelSpec { subspace: QubitSubspace::SingleExcitation, ..Default::default() };
        let h = build_hamiltonian_with(&p, &spec).unwrap();
        let s = spec.space(&p);
        let i = s.index(0, Q10).unwrap();
        let j = s.index(0, Q01).unwrap();
        let block = CMat::from_fn(2, 2, |r, c| h[([i, j][r], [i, j][c])]);
        let (vals, _) = eigh(&block);
        let split = (vals[0] - vals[1]).abs();
        assert!((split - 1.04f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn displaced_frame_is_hermitian_and_consistent() {
        let mut p = params();
        p.drive_amp = Complex64::new(0.3, 0.1);
        p.delta_r = 0.05;
        for frame in [Frame::Lab, Frame::SteadyExcited, Frame::SteadyMidpoint] {
            let spec = ModelSpec { frame, stark_compensated: true, ..Default::default() };
            let h = build_hamiltonian_with(&p, &spec).unwrap();
            assert!(hermiticity_defect(&h) <= 1e-12 * max_abs(&h));
        }
    }

    #[test]
    fn stark_compensation_only_moves_the_neighbor() {
        let mut p = params();
        p.drive_amp = Complex64::new(0.5, 0.0);
        let plain = ModelSpec::default().qubit_offsets(&p);
        let comp = ModelSpec { stark_compensated: true, ..Default::default() }.qubit_offsets(&p);
        assert_eq!(plain.0, comp.0);
        assert!((comp.1 - plain.1 - p.stark_shift()).abs() < 1e-15);
    }
}
