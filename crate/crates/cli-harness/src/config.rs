//! Experiment configuration. Every physical input is a dimensionless ratio
//! with `Δ = 1`: rates are given over `Δ`, times as `Δ·t` or `t/τ`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Diagnostic, HarnessError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Regimes,
    Bloch,
    SwitchingSweep,
    ErrorCurve,
    ErrorMc,
    Histograms,
    Optimize,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Regimes,
        Experiment::Bloch,
        Experiment::SwitchingSweep,
        Experiment::ErrorCurve,
        Experiment::ErrorMc,
        Experiment::Histograms,
        Experiment::Optimize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Regimes => "regimes",
            Experiment::Bloch => "bloch",
            Experiment::SwitchingSweep => "switching_sweep",
            Experiment::ErrorCurve => "error_curve",
            Experiment::ErrorMc => "error_mc",
            Experiment::Histograms => "histograms",
            Experiment::Optimize => "optimize",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Experiment::Regimes => "populations vs time from the full or reduced master equation",
            Experiment::Bloch => "Bloch-vector path of the {|10>, |01>} block during collapse",
            Experiment::SwitchingSweep => "fitted vs analytic switching rate over kappa/Delta and g/Delta",
            Experiment::ErrorCurve => "analytic error P_err(t) and its decomposition",
            Experiment::ErrorMc => "Monte Carlo P_err for |10bar> with analytic overlays",
            Experiment::Histograms => "empirical and analytic readout histograms",
            Experiment::Optimize => "optimal time, threshold and C over gamma_sw*tau",
        }
    }

    /// Experiments that draw random numbers and therefore need a seed.
    pub fn stochastic(self) -> bool {
        matches!(self, Experiment::ErrorMc | Experiment::Histograms)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

/// An explicit list or an evenly spaced range (geometric with `log = true`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range {
        from: f64,
        to: f64,
        points: usize,
        #[serde(default)]
        log: bool,
    },
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            GridSpec::List(ref v) => v.clone(),
            GridSpec::Range { from, to, points, log } => (0..points)
                .map(|k| {
                    let s = if points == 1 { 0.0 } else { k as f64 / (points - 1) as f64 };
                    // Endpoints are returned exactly.
                    if k == 0 {
                        from
                    } else if k + 1 == points {
                        to
                    } else if log {
                        (from.ln() + s * (to.ln() - from.ln())).exp()
                    } else {
                        from + s * (to - from)
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub g_over_delta: Option<f64>,
    /// `inf` selects the bad-cavity limit.
    pub kappa_over_delta: Option<f64>,
    pub chi_over_delta: Option<f64>,
    /// Target `(n̄₊ + n̄₋)/2`.
    pub nbar: Option<f64>,
    pub gamma_m_over_delta: Option<f64>,
    pub eta: Option<f64>,
    pub delta_r_over_delta: Option<f64>,
    pub gamma_e_over_delta: Option<f64>,
    /// `T1·Δ`.
    pub t1_delta: Option<f64>,
    /// Overrides the switching rate derived from `g/Δ` and `η`.
    pub gamma_sw_tau: Option<f64>,
    /// Discrimination threshold `I_th`.
    pub threshold: Option<f64>,
    /// Declares that `κ ≫ Δ`, which the trajectory experiments assume.
    pub bad_cavity: Option<bool>,
}

impl Params {
    pub fn eta(&self) -> f64 {
        self.eta.unwrap_or(1.0)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Resonator + two qubits.
    #[default]
    Full,
    /// Two qubits with the main one dephased at `Γ_m`.
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameName {
    Lab,
    #[default]
    SteadyExcited,
    SteadyMidpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialName {
    Bare10,
    #[default]
    Eigen10bar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    pub frame: FrameName,
    pub initial: InitialName,
    pub stark_compensated: bool,
    /// Step as a fraction of the engine's `0.02/(fastest rate)` limit.
    pub dt_fraction: f64,
    /// Extra photons above the default cutoff.
    pub extra_cutoff: usize,
    /// `Δ·t` of the last record.
    pub t_final_delta: Option<f64>,
    pub samples: usize,
    /// Telegraph fits skip the first `fit_skip/Γ_m`.
    pub fit_skip: f64,
    /// Error curves use `e^{−Γt}` weights and `cos 2θ` centering.
    pub refined: bool,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            kind: ModelKind::Full,
            frame: FrameName::SteadyExcited,
            initial: InitialName::Eigen10bar,
            stark_compensated: true,
            dt_fraction: 0.05,
            extra_cutoff: 0,
            t_final_delta: None,
            samples: 400,
            fit_skip: 10.0,
            refined: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub g_over_delta: Option<GridSpec>,
    pub kappa_over_delta: Option<GridSpec>,
    pub t_over_tau: Option<GridSpec>,
    pub gamma_sw_tau: Option<GridSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarlo {
    pub trajectories: Option<u64>,
    pub seed: Option<u64>,
    pub dt_over_tau: Option<f64>,
}

impl MonteCarlo {
    pub const DEFAULT_DT_OVER_TAU: f64 = 1e-4;

    pub fn dt_over_tau(&self) -> f64 {
        self.dt_over_tau.unwrap_or(Self::DEFAULT_DT_OVER_TAU)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub monte_carlo: Option<MonteCarlo>,
    #[serde(default)]
    pub output: OutputSection,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| {
            let field = e.span().map(|s| format!("bytes {}..{}", s.start, s.end)).unwrap_or_default();
            HarnessError::Validation(vec![Diagnostic::error(field, e.message().to_string())])
        })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Validation(vec![Diagnostic::error("config", format!("{}: {e}", path.display()))]))?;
        Self::from_toml(&text)
    }

    /// Seed from the `monte_carlo` table, if any.
    pub fn seed(&self) -> Option<u64> {
        self.monte_carlo.as_ref().and_then(|m| m.seed)
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.monte_carlo.get_or_insert_with(MonteCarlo::default).seed = Some(seed);
    }

    /// The configuration without its output location, which must not
    /// change any emitted number.
    pub fn physics(&self) -> ExperimentConfig {
        ExperimentConfig { output: OutputSection::default(), ..self.clone() }
    }
}
