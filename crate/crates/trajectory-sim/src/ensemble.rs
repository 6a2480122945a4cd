//! Monte Carlo ensembles. Trajectories are split into fixed-size chunks that
//! run in parallel; chunk sums are combined in index order, so the result is
//! bit-identical for any thread count.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Propagator, TrajectoryConfig};
use crate::error::{Error, Result};
use crate::jumps::Direction;
use crate::trajectory::{simulate, trajectory_rng, InitialState};

const CHUNK: u64 = 256;
/// Stream offset for `|00⟩` readouts so they never share noise with block runs.
const GROUND_STREAM: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct JumpStatistics {
    pub down: u64,
    pub up: u64,
    /// Simulated time summed over trajectories.
    pub total_time: f64,
    pub mean_transit: f64,
}

impl JumpStatistics {
    /// Jumps per unit time. For equal rates `Γ` in both directions this
    /// estimates `Γ`, half of `Γ⁻ + Γ⁺`.
    pub fn rate(&self) -> f64 {
        (self.down + self.up) as f64 / self.total_time
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub trajectories: u64,
    pub times: Vec<f64>,
    pub mean_z_e: Vec<f64>,
    pub mean_z: Vec<f64>,
    pub readout_times: Vec<f64>,
    /// `readouts[k][j]` is `Ī` of trajectory `j` at `readout_times[k]`.
    pub readouts: Vec<Vec<f64>>,
    pub jumps: JumpStatistics,
}

impl EnsembleResult {
    /// Ensemble-mean `ρ_10,10`.
    pub fn mean_p10(&self) -> Vec<f64> {
        self.mean_z.iter().map(|z| 0.5 * (1.0 + z)).collect()
    }

    /// Ensemble-mean `P(10bar)`.
    pub fn mean_p10bar(&self) -> Vec<f64> {
        self.mean_z_e.iter().map(|z| 0.5 * (1.0 + z)).collect()
    }
}

struct Partial {
    sum_z_e: Vec<f64>,
    sum_z: Vec<f64>,
    readouts: Vec<Vec<f64>>,
    down: u64,
    up: u64,
    transit: f64,
}

fn check_readouts(config: &TrajectoryConfig, readout_steps: &[u64]) -> Result<()> {
    if !readout_steps.is_empty() && !config.measured() {
        return Err(Error::InvalidConfig("readouts need a measured qubit".into()));
    }
    let ascending = readout_steps.windows(2).all(|w| w[0] < w[1]);
    let in_range = readout_steps.iter().all(|&k| k >= 1 && k <= config.n_steps);
    if !ascending || !in_range {
        return Err(Error::InvalidConfig("readout steps must be ascending within 1..=n_steps".into()));
    }
    Ok(())
}

/// `m` trajectories from `initial`; trajectory `j` uses stream `j` of
/// `config.seed`, so `m = 1` repeats [`run_trajectory`](crate::run_trajectory).
pub fn run_ensemble(
    config: &TrajectoryConfig,
    m: u64,
    initial: InitialState,
    readout_steps: &[u64],
) -> Result<EnsembleResult> {
    if m == 0 {
        return Err(Error::InvalidConfig("ensemble needs at least one trajectory".into()));
    }
    let prop = Propagator::new(config)?;
    check_readouts(config, readout_steps)?;
    let n_records = (config.n_steps / config.record_stride) as usize;
    let n_chunks = m.div_ceil(CHUNK);
    let partials: Vec<Partial> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut part = Partial {
                sum_z_e: vec![0.0; n_records],
                sum_z: vec![0.0; n_records],
                readouts: Vec::new(),
                down: 0,
                up: 0,
                transit: 0.0,
            };
            for j in c * CHUNK..((c + 1) * CHUNK).min(m) {
                let rec = simulate(config, &prop, initial, j, readout_steps)?;
                for (s, v) in part.sum_z_e.iter_mut().zip(&rec.z_e_series) {
                    *s += v;
                }
                for (s, v) in part.sum_z.iter_mut().zip(&rec.z_series) {
                    *s += v;
                }
                for ev in &rec.jumps {
                    match ev.direction {
                        Direction::Down => part.down += 1,
                        Direction::Up => part.up += 1,
                    }
                    part.transit += ev.transit;
                }
                part.readouts.push(rec.readouts);
            }
            Ok(part)
        })
        .collect::<Result<_>>()?;

    let mut sum_z_e = vec![0.0; n_records];
    let mut sum_z = vec![0.0; n_records];
    let mut readouts = vec![Vec::with_capacity(m as usize); readout_steps.len()];
    let (mut down, mut up, mut transit) = (0, 0, 0.0);
    for part in partials {
        for (s, v) in sum_z_e.iter_mut().zip(&part.sum_z_e) {
            *s += v;
        }
        for (s, v) in sum_z.iter_mut().zip(&part.sum_z) {
            *s += v;
        }
        for traj in part.readouts {
            for (k, v) in traj.into_iter().enumerate() {
                readouts[k].push(v);
            }
        }
        down += part.down;
        up += part.up;
        transit += part.transit;
    }
    let mf = m as f64;
    let stride_dt = config.record_stride as f64 * prop.dt;
    let jumps = down + up;
    Ok(EnsembleResult {
        trajectories: m,
        times: (1..=n_records).map(|k| k as f64 * stride_dt).collect(),
        mean_z_e: sum_z_e.into_iter().map(|s| s / mf).collect(),
        mean_z: sum_z.into_iter().map(|s| s / mf).collect(),
        readout_times: readout_steps.iter().map(|&k| k as f64 * prop.dt).collect(),
        readouts,
        jumps: JumpStatistics {
            down,
            up,
            total_time: mf * config.n_steps as f64 * prop.dt,
            mean_transit: if jumps > 0 { transit / jumps as f64 } else { f64::NAN },
        },
    })
}

/// `Ī` for `m` runs with both qubits in the ground state. Every step's readout
/// is `N(−1, D)`, so the partial sums between readout steps are drawn exactly
/// as single Gaussians of the summed variance.
pub fn ground_readouts(config: &TrajectoryConfig, m: u64, readout_steps: &[u64]) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    check_readouts(config, readout_steps)?;
    if m == 0 {
        return Err(Error::InvalidConfig("ensemble needs at least one trajectory".into()));
    }
    let var = config.variance();
    let per_traj: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let mut rng = trajectory_rng(config.seed, GROUND_STREAM | j);
            let (mut sum, mut prev) = (0.0, 0u64);
            readout_steps
                .iter()
                .map(|&k| {
                    let n = (k - prev) as f64;
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    sum += -n + (n * var).sqrt() * xi;
                    prev = k;
                    sum / k as f64
                })
                .collect()
        })
        .collect();
    let mut out = vec![Vec::with_capacity(m as usize); readout_steps.len()];
    for traj in per_traj {
        for (k, v) in traj.into_iter().enumerate() {
            out[k].push(v);
        }
    }
    Ok(out)
}
