use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{Propagator, TrajectoryConfig};
use crate::error::{Error, Result};
use crate::jumps::{detect_jumps, JumpEvent};
use crate::state::BlochState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// `|10bar⟩`.
    Excited,
    Bare10,
    Bare01,
    Bloch(BlochState),
}

impl InitialState {
    pub fn bloch(&self, prop: &Propagator) -> BlochState {
        match *self {
            InitialState::Excited => BlochState::excited(&prop.eigen),
            InitialState::Bare10 => BlochState::BARE_10,
            InitialState::Bare01 => BlochState::BARE_01,
            InitialState::Bloch(b) => b,
        }
    }
}

/// Stream `index` of the generator keyed by `seed`. Streams never overlap, so
/// a trajectory's noise depends only on `(seed, index)`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    /// Times of the stored samples, every `record_stride` steps from `dt·stride`.
    pub times: Vec<f64>,
    /// Running mean of the readout; empty without measurement.
    pub i_bar_series: Vec<f64>,
    pub z_e_series: Vec<f64>,
    pub z_series: Vec<f64>,
    pub jumps: Vec<JumpEvent>,
    pub final_state: BlochState,
    #[serde(skip)]
    pub final_rho: Matrix2<Complex64>,
    /// Smallest `tr ρ²` seen at any step.
    pub min_purity: f64,
    /// `Ī` at each requested readout step.
    pub readouts: Vec<f64>,
}

/// One trajectory on stream 0 of `config.seed`.
pub fn run_trajectory(config: &TrajectoryConfig, initial: InitialState) -> Result<TrajectoryRecord> {
    let prop = Propagator::new(config)?;
    simulate(config, &prop, initial, 0, &[])
}

/// Trajectory `index`, also reporting `Ī` after each step count in
/// `readout_steps` (ascending, each ≤ `n_steps`).
pub(crate) fn simulate(
    config: &TrajectoryConfig,
    prop: &Propagator,
    initial: InitialState,
    index: u64,
    readout_steps: &[u64],
) -> Result<TrajectoryRecord> {
    let mut rng = trajectory_rng(config.seed, index);
    let mut state = initial.bloch(prop);
    let stride = config.record_stride;
    let n_records = (config.n_steps / stride) as usize;
    let measured = config.measured();
    let mut rec = TrajectoryRecord {
        times: Vec::with_capacity(n_records),
        i_bar_series: Vec::with_capacity(if measured { n_records } else { 0 }),
        z_e_series: Vec::with_capacity(n_records),
        z_series: Vec::with_capacity(n_records),
        jumps: Vec::new(),
        final_state: state,
        final_rho: state.to_matrix(),
        min_purity: state.purity(),
        readouts: Vec::with_capacity(readout_steps.len()),
    };
    let mut next_readout = readout_steps.iter().peekable();
    let mut sum = 0.0;
    for n in 1..=config.n_steps {
        let readout = prop.step(&mut state, &mut rng).map_err(|e| match e {
            Error::Underflow { readout, .. } => Error::Underflow { step: n, readout },
            other => other,
        })?;
        if let Some(i) = readout {
            sum += i;
        }
        rec.min_purity = rec.min_purity.min(state.purity());
        if n % stride == 0 {
            rec.times.push(n as f64 * prop.dt);
            if measured {
                rec.i_bar_series.push(sum / n as f64);
            }
            rec.z_e_series.push(state.z_e(&prop.eigen));
            rec.z_series.push(state.z);
        }
        while next_readout.peek().is_some_and(|&&k| k == n) {
            next_readout.next();
            rec.readouts.push(sum / n as f64);
        }
    }
    let z_e0 = initial.bloch(prop).z_e(&prop.eigen);
    let times: Vec<f64> = std::iter::once(0.0).chain(rec.times.iter().copied()).collect();
    let z_e: Vec<f64> = std::iter::once(z_e0).chain(rec.z_e_series.iter().copied()).collect();
    rec.jumps = detect_jumps(&times, &z_e, config.hysteresis);
    rec.final_state = state;
    rec.final_rho = state.to_matrix();
    Ok(rec)
}
