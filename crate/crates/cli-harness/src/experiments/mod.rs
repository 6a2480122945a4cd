//! One pipeline per experiment. Each returns its artifacts in memory; the
//! caller writes them only once the whole computation has succeeded.

pub mod budget;
pub mod common;
pub mod montecarlo;
pub mod regimes;
pub mod switching;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::Result;
use crate::output::Artifact;

pub fn execute(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    match cfg.experiment {
        Experiment::Regimes => regimes::regimes(cfg),
        Experiment::Bloch => regimes::bloch(cfg),
        Experiment::SwitchingSweep => switching::switching_sweep(cfg),
        Experiment::ErrorCurve => budget::error_curve(cfg),
        Experiment::ErrorMc => montecarlo::error_mc(cfg),
        Experiment::Histograms => montecarlo::histograms(cfg),
        Experiment::Optimize => budget::optimize(cfg),
    }
}
