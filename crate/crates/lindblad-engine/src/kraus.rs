use operators_core::linalg::{gemm_into, matmul, max_abs, sqrtm_psd, CMat};
use operators_core::Complex64;

use crate::error::{Error, Result};
use crate::model::MasterEquation;

/// `κ·dt·n_cutoff` must stay below this for `M_null` to be a small correction.
pub const STEP_GUARD: f64 = 0.1;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// One Kraus operator, stored in whichever form makes `MρM†` cheapest.
#[derive(Debug, Clone)]
enum KrausOp {
    Diagonal(Vec<Complex64>),
    /// `(row, col, value)` triplets.
    Sparse(Vec<(usize, usize, Complex64)>),
    Dense { m: CMat, m_adj: CMat },
}

impl KrausOp {
    fn classify(m: CMat) -> Self {
        let d = m.nrows();
        let mut entries = Vec::new();
        let mut diagonal = true;
        for j in 0..d {
            for i in 0..d {
                let z = m[(i, j)];
                if z != C0 {
                    entries.push((i, j, z));
                    diagonal &= i == j;
                }
            }
        }
        if diagonal {
            KrausOp::Diagonal((0..d).map(|i| m[(i, i)]).collect())
        } else if entries.len() <= 4 * d {
            KrausOp::Sparse(entries)
        } else {
            let m_adj = m.adjoint();
            KrausOp::Dense { m, m_adj }
        }
    }

    fn dense(&self, d: usize) -> CMat {
        match self {
            KrausOp::Diagonal(v) => CMat::from_fn(d, d, |i, j| if i == j { v[i] } else { C0 }),
            KrausOp::Sparse(e) => {
                let mut m = CMat::zeros(d, d);
                for &(i, j, z) in e {
                    m[(i, j)] += z;
                }
                m
            }
            KrausOp::Dense { m, .. } => m.clone(),
        }
    }

    /// `acc += M ρ M†`.
    fn accumulate(&self, rho: &CMat, tmp: &mut CMat, acc: &mut CMat) {
        let d = rho.nrows();
        match self {
            KrausOp::Diagonal(v) => {
                for j in 0..d {
                    let vj = v[j].conj();
                    for i in 0..d {
                        acc[(i, j)] += v[i] * rho[(i, j)] * vj;
                    }
                }
            }
            KrausOp::Sparse(e) => {
                tmp.fill(C0);
                // tmp = M ρ, row by row.
                for &(r, c, z) in e {
                    for k in 0..d {
                        tmp[(r, k)] += z * rho[(c, k)];
                    }
                }
                // acc += tmp M†: column j of the product collects conj(M[j, k]) · tmp[:, k].
                for &(r, c, z) in e {
                    let zc = z.conj();
                    for i in 0..d {
                        acc[(i, r)] += tmp[(i, c)] * zc;
                    }
                }
            }
            KrausOp::Dense { m, m_adj } => {
                gemm_into(C1, rho, m_adj, C0, tmp);
                gemm_into(C1, m, tmp, C1, acc);
            }
        }
    }
}

/// Precomputed one-step map `ρ ↦ U(Σ_k M_k ρ M_k†)U†`.
#[derive(Debug, Clone)]
pub struct KrausPropagator {
    pub dt: f64,
    u: CMat,
    u_adj: CMat,
    ops: Vec<KrausOp>,
    acc: CMat,
    tmp: CMat,
}

impl KrausPropagator {
    pub fn new(me: &MasterEquation, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::StepTooLarge { dt, limit: me.max_dt() });
        }
        let guard = me.kappa_n * dt;
        if guard >= STEP_GUARD {
            return Err(Error::StepSizeGuard { value: guard, bound: STEP_GUARD });
        }
        let d = me.dim();
        let sqdt = Complex64::new(dt.sqrt(), 0.0);
        let mut ms: Vec<CMat> = me.jumps.iter().map(|l| l * sqdt).collect();
        let mut sum = CMat::zeros(d, d);
        for m in &ms {
            gemm_into(C1, &m.adjoint(), m, C1, &mut sum);
        }
        let complement = CMat::identity(d, d) - &sum;
        let is_diag = (0..d).all(|j| (0..d).all(|i| i == j || complement[(i, j)] == C0));
        let null = if is_diag {
            let mut n = CMat::zeros(d, d);
            for i in 0..d {
                let x = complement[(i, i)].re;
                if x < 0.0 {
                    return Err(Error::StepSizeGuard { value: 1.0 - x, bound: 1.0 });
                }
                n[(i, i)] = Complex64::new(x.sqrt(), 0.0);
            }
            n
        } else {
            let (vals, _) = operators_core::linalg::eigh(&complement);
            if vals.iter().any(|&v| v < 0.0) {
                return Err(Error::StepSizeGuard { value: 1.0 - vals[0], bound: 1.0 });
            }
            sqrtm_psd(&complement)
        };
        ms.insert(0, null);
        let u = operators_core::linalg::expm_hermitian(&me.h, dt);
        Ok(KrausPropagator {
            dt,
            u_adj: u.adjoint(),
            u,
            ops: ms.into_iter().map(KrausOp::classify).collect(),
            acc: CMat::zeros(d, d),
            tmp: CMat::zeros(d, d),
        })
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// Dense Kraus operators, `M_null` first.
    pub fn operators(&self) -> Vec<CMat> {
        self.ops.iter().map(|op| op.dense(self.dim())).collect()
    }

    pub fn unitary(&self) -> &CMat {
        &self.u
    }

    /// `max |Σ_k M_k†M_k − 1|`.
    pub fn completeness_defect(&self) -> f64 {
        let d = self.dim();
        let mut sum = -CMat::identity(d, d);
        for m in self.operators() {
            sum += matmul(&m.adjoint(), &m);
        }
        max_abs(&sum)
    }

    /// One interleaved step in place.
    pub fn step(&mut self, rho: &mut CMat) {
        self.acc.fill(C0);
        for op in &self.ops {
            op.accumulate(rho, &mut self.tmp, &mut self.acc);
        }
        gemm_into(C1, &self.acc, &self.u_adj, C0, &mut self.tmp);
        gemm_into(C1, &self.u, &self.tmp, C0, rho);
    }

    /// Matrix of the one-step map on column-stacked `vec(ρ)`:
    /// `S = (Ū ⊗ U) · Σ_k (M̄_k ⊗ M_k)`, using `vec(AXB) = (Bᵀ ⊗ A)vec(X)`.
    pub fn superoperator(&self) -> CMat {
        let d = self.dim();
        let mut k = CMat::zeros(d * d, d * d);
        for m in self.operators() {
            k += m.map(|z| z.conj()).kronecker(&m);
        }
        let uu = self.u.map(|z| z.conj()).kronecker(&self.u);
        matmul(&uu, &k)
    }
}
