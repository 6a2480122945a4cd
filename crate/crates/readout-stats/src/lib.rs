//! Histograms of the time-averaged readout `Ī(t)` and the errors they imply.
//!
//! The excited-state histogram is a mixture over the number of switching
//! events during the integration window: a Gaussian at `cos 2θ` with no jump,
//! a smoothed box with one, and a smoothed ramp with two.

mod analytic;
mod discrimination;
mod empirical;
mod error;
mod weights;

pub use analytic::{analytic_histogram, analytic_histogram_with, AnalyticHistogram, AnalyticOptions, SmoothedLinear, StateLabel};
pub use discrimination::{
    bare_basis_error, error_probability, one_jump_error_flat, optimal_threshold, one_jump_error_near_zero, two_jump_error_flat,
    DiscriminationResult, ReadoutHistogram,
};
pub use empirical::{default_bin_width, empirical_histogram, EmpiricalHistogram};
pub use error::{Error, Result};
pub use weights::{jump_weights, JumpWeights, WeightConvention, MAX_GAMMA_T};
