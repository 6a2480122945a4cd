//! Composite `resonator ⊗ qubits` space and its elementary operators.
//!
//! Bare qubit labels are `q = 2·main + neighbor`, so `|00⟩, |01⟩, |10⟩, |11⟩`
//! map to 0..4. The composite index is `n·nq + k` where `k` is the position of
//! the qubit label inside the active subspace.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;

pub const Q00: usize = 0;
pub const Q01: usize = 1;
pub const Q10: usize = 2;
pub const Q11: usize = 3;

/// Qubit subspace kept in the simulation. Every term of the Hamiltonian
/// conserves excitation number on the qubits, so each of these is invariant
/// under the coherent dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitSubspace {
    Full,
    /// `{|10⟩, |01⟩}`.
    SingleExcitation,
    /// `{|10⟩, |01⟩, |00⟩}`; closed under relaxation from the single-excitation sector.
    WithGround,
}

impl QubitSubspace {
    /// Bare labels in subspace order.
    pub fn labels(self) -> &'static [usize] {
        match self {
            QubitSubspace::Full => &[Q00, Q01, Q10, Q11],
            QubitSubspace::SingleExcitation => &[Q10, Q01],
            QubitSubspace::WithGround => &[Q10, Q01, Q00],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QubitSubspace::Full => "full",
            QubitSubspace::SingleExcitation => "single_excitation",
            QubitSubspace::WithGround => "with_ground",
        }
    }

    pub fn position(self, label: usize) -> Option<usize> {
        self.labels().iter().position(|&l| l == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    pub n_cutoff: usize,
    pub subspace: QubitSubspace,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl Space {
    pub fn new(n_cutoff: usize, subspace: QubitSubspace) -> Self {
        Space { n_cutoff, subspace }
    }

    pub fn n_levels(&self) -> usize {
        self.n_cutoff + 1
    }

    pub fn nq(&self) -> usize {
        self.subspace.labels().len()
    }

    pub fn dim(&self) -> usize {
        self.n_levels() * self.nq()
    }

    /// Composite index of photon number `n` and bare qubit label `q`.
    pub fn index(&self, n: usize, q: usize) -> Option<usize> {
        if n > self.n_cutoff {
            return None;
        }
        self.subspace.position(q).map(|k| n * self.nq() + k)
    }

    /// Restricts a 4×4 bare-basis qubit operator to the subspace.
    /// Fails if the operator leaks out of it.
    pub fn restrict_qubit(&self, full: &CMat) -> Result<CMat> {
        let labels = self.subspace.labels();
        for (r, row) in full.row_iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                let inside = labels.contains(&r) && labels.contains(&col);
                let touches = labels.contains(&col) || labels.contains(&r);
                if !inside && touches && z.norm() > 0.0 {
                    return Err(Error::Subspace(self.subspace.name()));
                }
            }
        }
        Ok(CMat::from_fn(labels.len(), labels.len(), |i, j| full[(labels[i], labels[j])]))
    }

    /// `R ⊗ Q` with resonator factor `R` on `n_cutoff+1` levels and qubit factor `Q`
    /// already restricted to the subspace.
    pub fn compose(&self, resonator: &CMat, qubit: &CMat) -> CMat {
        resonator.kronecker(qubit)
    }

    pub fn resonator_identity(&self) -> CMat {
        CMat::identity(self.n_levels(), self.n_levels())
    }

    pub fn qubit_identity(&self) -> CMat {
        CMat::identity(self.nq(), self.nq())
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.dim(), self.dim())
    }

    /// Lowering operator `b` on the resonator factor.
    pub fn destroy_resonator(&self) -> CMat {
        let l = self.n_levels();
        CMat::from_fn(l, l, |i, j| if j == i + 1 { c((j as f64).sqrt()) } else { c(0.0) })
    }

    pub fn number_resonator(&self) -> CMat {
        let l = self.n_levels();
        CMat::from_fn(l, l, |i, j| if i == j { c(i as f64) } else { c(0.0) })
    }

    /// `b ⊗ 1`.
    pub fn a(&self) -> CMat {
        self.compose(&self.destroy_resonator(), &self.qubit_identity())
    }

    /// `b†b ⊗ 1`.
    pub fn number(&self) -> CMat {
        self.compose(&self.number_resonator(), &self.qubit_identity())
    }

    /// `1 ⊗ Q` for a 4×4 bare-basis qubit operator.
    pub fn qubit_op(&self, full: &CMat) -> Result<CMat> {
        Ok(self.compose(&self.resonator_identity(), &self.restrict_qubit(full)?))
    }

    pub fn sz_main(&self) -> CMat {
        self.qubit_op(&qubit4::sz_main()).expect("diagonal operators fit every subspace")
    }

    pub fn sz_neighbor(&self) -> CMat {
        self.qubit_op(&qubit4::sz_neighbor()).expect("diagonal operators fit every subspace")
    }

    /// `|01⟩⟨10| + |10⟩⟨01|`.
    pub fn swap_coupling(&self) -> CMat {
        self.qubit_op(&qubit4::swap_coupling()).expect("every subspace contains |10⟩ and |01⟩")
    }

    /// Main-qubit lowering operator; needs `|00⟩` in the subspace.
    pub fn sm_main(&self) -> Result<CMat> {
        self.lowering(qubit4::sm_main())
    }

    /// Neighbor lowering operator; needs `|00⟩` in the subspace.
    pub fn sm_neighbor(&self) -> Result<CMat> {
        self.lowering(qubit4::sm_neighbor())
    }

    fn lowering(&self, full: CMat) -> Result<CMat> {
        // Inside WithGround the |11⟩ → |10⟩/|01⟩ branch is absent, which is
        // exactly the restriction we want; only leakage out of the kept set fails.
        let labels = self.subspace.labels();
        for (r, row) in full.row_iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                if z.norm() > 0.0 && labels.contains(&col) && !labels.contains(&r) {
                    return Err(Error::Subspace(self.subspace.name()));
                }
            }
        }
        let q = CMat::from_fn(labels.len(), labels.len(), |i, j| full[(labels[i], labels[j])]);
        Ok(self.compose(&self.resonator_identity(), &q))
    }

    /// Projector onto bare qubit label `q` (all photon numbers).
    pub fn qubit_projector(&self, q: usize) -> Option<CMat> {
        let k = self.subspace.position(q)?;
        let nq = self.nq();
        let p = CMat::from_fn(nq, nq, |i, j| if i == k && j == k { c(1.0) } else { c(0.0) });
        Some(self.compose(&self.resonator_identity(), &p))
    }

    /// Partial trace over the resonator, in subspace order.
    pub fn reduce_qubits(&self, rho: &CMat) -> CMat {
        let nq = self.nq();
        let mut out = CMat::zeros(nq, nq);
        for n in 0..self.n_levels() {
            let off = n * nq;
            for j in 0..nq {
                for i in 0..nq {
                    out[(i, j)] += rho[(off + i, off + j)];
                }
            }
        }
        out
    }

    /// Photon-number distribution `P(n)` from a composite density matrix.
    pub fn photon_distribution(&self, rho: &CMat) -> Vec<f64> {
        let nq = self.nq();
        (0..self.n_levels())
            .map(|n| (0..nq).map(|k| rho[(n * nq + k, n * nq + k)].re).sum())
            .collect()
    }

    /// `|n⟩⟨n| ⊗ ρ_q` for a qubit density matrix in subspace order.
    pub fn product_state(&self, n: usize, rho_q: &CMat) -> CMat {
        let l = self.n_levels();
        let proj = CMat::from_fn(l, l, |i, j| if i == n && j == n { c(1.0) } else { c(0.0) });
        self.compose(&proj, rho_q)
    }

    /// Qubit density matrix in subspace order from a pure state given as
    /// amplitudes on bare labels.
    pub fn qubit_pure_state(&self, amps: &[(usize, Complex64)]) -> Result<CMat> {
        let nq = self.nq();
        let mut v = vec![c(0.0); nq];
        for &(q, a) in amps {
            let k = self.subspace.position(q).ok_or(Error::Subspace(self.subspace.name()))?;
            v[k] += a;
        }
        Ok(CMat::from_fn(nq, nq, |i, j| v[i] * v[j].conj()))
    }
}

/// 4×4 operators on the bare two-qubit basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub mod qubit4 {
    use super::*;

    fn diag(f: impl Fn(usize) -> f64) -> CMat {
        CMat::from_fn(4, 4, |i, j| if i == j { c(f(i)) } else { c(0.0) })
    }

    /// `σ_z` of the main qubit, `+1` when excited.
    pub fn sz_main() -> CMat {
        diag(|q| if q >> 1 == 1 { 1.0 } else { -1.0 })
    }

    pub fn sz_neighbor() -> CMat {
        diag(|q| if q & 1 == 1 { 1.0 } else { -1.0 })
    }

    pub fn swap_coupling() -> CMat {
        let mut m = CMat::zeros(4, 4);
        m[(Q01, Q10)] = c(1.0);
        m[(Q10, Q01)] = c(1.0);
        m
    }

    pub fn sm_main() -> CMat {
        let mut m = CMat::zeros(4, 4);
        m[(Q00, Q10)] = c(1.0);
        m[(Q01, Q11)] = c(1.0);
        m
    }

    pub fn sm_neighbor() -> CMat {
        let mut m = CMat::zeros(4, 4);
        m[(Q00, Q01)] = c(1.0);
        m[(Q10, Q11)] = c(1.0);
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matmul, max_abs};

    #[test]
    fn dimensions_and_indices() {
        let s = Space::new(3, QubitSubspace::SingleExcitation);
        assert_eq!(s.dim(), 8);
        assert_eq!(s.index(2, Q01), Some(5));
        assert_eq!(s.index(0, Q00), None);
        assert_eq!(Space::new(3, QubitSubspace::Full).index(1, Q10), Some(6));
    }

    #[test]
    fn commutator_is_identity_below_cutoff() {
        let s = Space::new(6, QubitSubspace::WithGround);
        let a = s.a();
        let ad = a.adjoint();
        let comm = matmul(&a, &ad) - matmul(&ad, &a);
        let nq = s.nq();
        for i in 0..s.dim() {
            let expected = if i / nq < s.n_cutoff { 1.0 } else { -(s.n_cutoff as f64) };
            assert!((comm[(i, i)].re - expected).abs() < 1e-12);
        }
        let off = comm.clone() - CMat::from_diagonal(&comm.diagonal());
        assert!(max_abs(&off) < 1e-12);
    }

    #[test]
    fn lowering_needs_ground() {
        assert!(Space::new(2, QubitSubspace::SingleExcitation).sm_main().is_err());
        let s = Space::new(2, QubitSubspace::WithGround);
        let sm = s.sm_main().unwrap();
        let i10 = s.index(1, Q10).unwrap();
        let i00 = s.index(1, Q00).unwrap();
        assert_eq!(sm[(i00, i10)], c(1.0));
        assert!(s.sm_neighbor().is_ok());
    }

    #[test]
    fn reduce_recovers_product_factor() {
        let s = Space::new(4, QubitSubspace::Full);
        let q = s.qubit_pure_state(&[(Q10, c(0.6)), (Q01, Complex64::new(0.0, 0.8))]).unwrap();
        let rho = s.product_state(3, &q);
        assert!(max_abs(&(s.reduce_qubits(&rho) - &q)) < 1e-15);
        let p = s.photon_distribution(&rho);
        assert!((p[3] - 1.0).abs() < 1e-15);
    }
}
