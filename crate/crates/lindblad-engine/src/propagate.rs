use operators_core::linalg::{gemm_into, CMat};
use operators_core::{bloch_coords, BlochCoords, Complex64, ModelSpec, SystemParams};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::MasterEquation;
use crate::state::{snapshot, InitialQubit, QuantumState};

/// Superoperators larger than this (in `d²`) are not formed.
pub const DOUBLING_MAX_SUPERDIM: usize = 400;

/// Fixed-step sampling plan: `n_samples + 1` records, `sample_every` steps apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub dt: f64,
    pub sample_every: u64,
    pub n_samples: usize,
}

impl Schedule {
    /// Uniform samples over `[0, t_final]` with step at most `dt_max`.
    pub fn covering(t_final: f64, n_samples: usize, dt_max: f64) -> Self {
        let gap = t_final / n_samples as f64;
        let sample_every = (gap / dt_max).ceil().max(1.0) as u64;
        Schedule { dt: gap / sample_every as f64, sample_every, n_samples }
    }

    pub fn t_final(&self) -> f64 {
        self.dt * (self.sample_every as f64) * self.n_samples as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Apply the Kraus step `sample_every` times between records.
    Stepwise,
    /// Raise the one-step superoperator to the `sample_every` power by
    /// repeated squaring; same map, `O(log n)` cost.
    Doubling,
    /// Doubling when the superoperator is small enough, else stepwise.
    Auto,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct PopulationSeries {
    pub times: Vec<f64>,
    pub p10: Vec<f64>,
    pub p01: Vec<f64>,
    pub p00: Vec<f64>,
    pub p11: Vec<f64>,
    pub p10bar: Vec<f64>,
    pub p01bar: Vec<f64>,
    pub bloch: Vec<BlochCoords>,
    /// Trace of the full density matrix at each record.
    pub trace: Vec<f64>,
    /// Mean photon number in the simulation frame.
    pub photons: Vec<f64>,
}

impl PopulationSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub(crate) fn record(&mut self, me: &MasterEquation, t: f64, rho: &CMat) {
        let s = snapshot(&me.space, rho);
        let b = bloch_coords(&s.block, me.eigen.theta);
        let [c, sn] = me.eigen.vec_10bar;
        let coh = 2.0 * c * sn * s.block[(0, 1)].re;
        let p10bar = c * c * s.p10 + sn * sn * s.p01 + coh;
        let p01bar = sn * sn * s.p10 + c * c * s.p01 - coh;
        self.times.push(t);
        self.p10.push(s.p10);
        self.p01.push(s.p01);
        self.p00.push(s.p00);
        self.p11.push(s.p11);
        self.p10bar.push(p10bar);
        self.p01bar.push(p01bar);
        self.bloch.push(b);
        self.trace.push((0..rho.nrows()).map(|i| rho[(i, i)].re).sum());
        let dist = me.space.photon_distribution(rho);
        self.photons.push(dist.iter().enumerate().map(|(n, p)| n as f64 * p).sum());
    }

    /// Largest absolute difference over all tracked populations.
    pub fn max_population_diff(&self, other: &PopulationSeries) -> f64 {
        let pairs = [
            (&self.p10, &other.p10),
            (&self.p01, &other.p01),
            (&self.p00, &other.p00),
            (&self.p11, &other.p11),
            (&self.p10bar, &other.p10bar),
            (&self.p01bar, &other.p01bar),
        ];
        pairs
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

fn check_dt(me: &MasterEquation, dt: f64) -> Result<()> {
    let limit = me.max_dt();
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt, limit });
    }
    Ok(())
}

/// Propagates `state0` on the schedule, recording at `t = 0` and after every
/// `sample_every` steps. Returns the series and the final state.
pub fn evolve(
    me: &MasterEquation,
    state0: &QuantumState,
    schedule: Schedule,
    method: Method,
) -> Result<(PopulationSeries, QuantumState)> {
    check_dt(me, schedule.dt)?;
    let mut prop = me.kraus(schedule.dt)?;
    let d = me.dim();
    let use_doubling = match method {
        Method::Stepwise => false,
        Method::Doubling => true,
        Method::Auto => d * d <= DOUBLING_MAX_SUPERDIM,
    };
    let mut series = PopulationSeries::default();
    let mut rho = state0.rho.clone();
    let t0 = state0.time;
    let gap = schedule.dt * schedule.sample_every as f64;
    series.record(me, t0, &rho);
    if use_doubling {
        let g = superoperator_power(&prop.superoperator(), schedule.sample_every, d);
        let mut v = CMat::from_column_slice(d * d, 1, rho.as_slice());
        let mut next = v.clone();
        for k in 1..=schedule.n_samples {
            gemm_into(Complex64::new(1.0, 0.0), &g, &v, Complex64::new(0.0, 0.0), &mut next);
            std::mem::swap(&mut v, &mut next);
            rho.as_mut_slice().copy_from_slice(v.as_slice());
            // Roundoff in the powered map is not structurally Hermitian.
            rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
            v.as_mut_slice().copy_from_slice(rho.as_slice());
            series.record(me, t0 + gap * k as f64, &rho);
        }
    } else {
        for k in 1..=schedule.n_samples {
            for _ in 0..schedule.sample_every {
                prop.step(&mut rho);
            }
            series.record(me, t0 + gap * k as f64, &rho);
        }
    }
    let time = t0 + gap * schedule.n_samples as f64;
    Ok((series, QuantumState { rho, time }))
}

/// Restores `wᵀS = wᵀ` with `w = vec(1)`, i.e. exact trace preservation,
/// by a rank-one correction of the size of the accumulated roundoff.
fn project_trace_preserving(s: &mut CMat, d: usize) {
    let dd = d * d;
    let diag: Vec<usize> = (0..d).map(|i| i + i * d).collect();
    for col in 0..dd {
        let mut r: Complex64 = diag.iter().map(|&i| s[(i, col)]).sum();
        if diag.contains(&col) {
            r -= 1.0;
        }
        let corr = r / d as f64;
        for &i in &diag {
            s[(i, col)] -= corr;
        }
    }
}

/// `S^n` by repeated squaring, re-projected after every product.
pub fn superoperator_power(s: &CMat, n: u64, d: usize) -> CMat {
    let dd = s.nrows();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut result: Option<CMat> = None;
    let mut base = s.clone();
    project_trace_preserving(&mut base, d);
    let mut scratch = CMat::zeros(dd, dd);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => {
                    gemm_into(one, &base, &r, zero, &mut scratch);
                    let mut out = scratch.clone();
                    project_trace_preserving(&mut out, d);
                    out
                }
            });
        }
        e >>= 1;
        if e > 0 {
            gemm_into(one, &base, &base, zero, &mut scratch);
            std::mem::swap(&mut base, &mut scratch);
            project_trace_preserving(&mut base, d);
        }
    }
    result.unwrap_or_else(|| CMat::identity(dd, dd))
}

/// Runs at `params.n_cutoff` and at `n_cutoff + 4`; fails if any population
/// moves by more than `tol`. Returns the series at the base cutoff and the shift.
pub fn evolve_validated(
    params: &SystemParams,
    spec: &ModelSpec,
    initial: InitialQubit,
    schedule: Schedule,
    method: Method,
    tol: f64,
) -> Result<(PopulationSeries, f64)> {
    let run = |p: &SystemParams| -> Result<PopulationSeries> {
        let me = MasterEquation::new(p, spec)?;
        let s0 = QuantumState::initial(&me.space, &me.eigen, initial)?;
        Ok(evolve(&me, &s0, schedule, method)?.0)
    };
    let base = run(params)?;
    let mut bigger = params.clone();
    bigger.n_cutoff += 4;
    let shift = base.max_population_diff(&run(&bigger)?);
    if shift > tol {
        return Err(Error::CutoffNotConverged { shift, tol });
    }
    Ok((base, shift))
}
