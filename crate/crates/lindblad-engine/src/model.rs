use operators_core::linalg::{matmul, CMat};
use operators_core::{
    build_hamiltonian_with, eigenbasis, Complex64, EigenbasisInfo, ModelSpec, QubitSubspace,
    Space, SystemParams,
};

use crate::error::Result;
use crate::kraus::KrausPropagator;

/// Hamiltonian plus Lindblad operators (rates folded in) on one truncated space.
#[derive(Debug, Clone)]
pub struct MasterEquation {
    pub space: Space,
    pub h: CMat,
    /// `L_k` with `√rate` included; the dissipator is `Σ_k D[L_k]`.
    pub jumps: Vec<CMat>,
    pub eigen: EigenbasisInfo,
    /// Photon cutoff times κ, for the step-size guard.
    pub(crate) kappa_n: f64,
    /// Fastest rate entering the dt stability rule.
    pub(crate) fastest: f64,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl MasterEquation {
    /// Full model: resonator decay `κD[b]`, optional `T1` relaxation of both
    /// qubits, and environmental dephasing `(Γ_e/2)D[σz₁]` so that `Γ_e` adds
    /// directly to the decay rate of the `|10⟩–|01⟩` coherence.
    pub fn new(params: &SystemParams, spec: &ModelSpec) -> Result<Self> {
        let h = build_hamiltonian_with(params, spec)?;
        let space = spec.space(params);
        let mut jumps = vec![space.a() * re(params.kappa.sqrt())];
        if let Some(t1) = params.t1 {
            if t1.is_finite() {
                let r = re((1.0 / t1).sqrt());
                jumps.push(space.sm_main()? * r);
                jumps.push(space.sm_neighbor()? * r);
            }
        }
        if params.gamma_e > 0.0 {
            jumps.push(space.sz_main() * re((params.gamma_e / 2.0).sqrt()));
        }
        let (ap, am) = params.alpha_pm();
        let gamma_m = 2.0 * params.chi * (ap.conj() * am).im;
        let fastest = [
            params.kappa,
            params.delta.abs(),
            gamma_m.abs(),
            2.0 * params.chi.abs() * (params.n_cutoff as f64 + 1.0),
            (params.delta_r + params.chi).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        Ok(MasterEquation {
            space,
            h,
            jumps,
            eigen: eigenbasis(params.g, params.delta)?,
            kappa_n: params.kappa * params.n_cutoff as f64,
            fastest,
        })
    }

    /// Two-qubit model on `{|10⟩, |01⟩}` without the resonator:
    /// `H = (Δ/2)(|10⟩⟨10| − |01⟩⟨01|) + g(|01⟩⟨10| + h.c.)` with the main
    /// qubit dephased so its coherence decays at `gamma_m`.
    pub fn reduced(gamma_m: f64, g: f64, delta: f64) -> Result<Self> {
        let eigen = eigenbasis(g, delta)?;
        if !(gamma_m >= 0.0 && gamma_m.is_finite()) {
            return Err(operators_core::Error::InvalidParam {
                name: "gamma_m",
                reason: "must be finite and non-negative".into(),
            }
            .into());
        }
        let space = Space::new(0, QubitSubspace::SingleExcitation);
        let h = space.sz_neighbor() * re(-delta / 2.0) + space.swap_coupling() * re(g);
        let mut jumps = Vec::new();
        if gamma_m > 0.0 {
            jumps.push(space.sz_main() * re((gamma_m / 2.0).sqrt()));
        }
        Ok(MasterEquation {
            space,
            h,
            jumps,
            eigen,
            kappa_n: 0.0,
            fastest: [gamma_m, delta.abs(), g.abs()].into_iter().fold(0.0, f64::max),
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `0.02 / (fastest rate)`, the largest admissible step.
    pub fn max_dt(&self) -> f64 {
        0.02 / self.fastest
    }

    /// `−i[H, ρ] + Σ_k (L ρ L† − ½{L†L, ρ})`.
    pub fn rhs(&self, rho: &CMat) -> CMat {
        let i = Complex64::i();
        let mut out = (matmul(rho, &self.h) - matmul(&self.h, rho)) * i;
        for l in &self.jumps {
            let ld = l.adjoint();
            let ldl = matmul(&ld, l);
            let lr = matmul(l, rho);
            out += matmul(&lr, &ld);
            out -= (matmul(&ldl, rho) + matmul(rho, &ldl)) * re(0.5);
        }
        out
    }

    pub fn kraus(&self, dt: f64) -> Result<KrausPropagator> {
        KrausPropagator::new(self, dt)
    }
}
