//! Closed-form histograms of `Ī` in units where `|10⟩ → +1`, `|01⟩, |00⟩ → −1`
//! and the noise on `Ī(t)` has variance `τ/t`.
//!
//! Every jump-count component is a density linear in the time-averaged
//! population difference on an interval, convolved with that Gaussian, so the
//! density and the CDF both have closed forms.

use std::f64::consts::PI;

use operators_core::numerics::{erfc, normal_cdf};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::{jump_weights, JumpWeights, WeightConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateLabel {
    #[serde(rename = "00")]
    Ground,
    /// The eigenstate `|10bar⟩`.
    #[serde(rename = "10bar")]
    Excited,
    /// The bare state `|10⟩`, which collapses onto `|10bar⟩` with weight
    /// `cos²θ` and onto `|01bar⟩` with weight `sin²θ`.
    #[serde(rename = "10bare")]
    Bare10,
}

impl StateLabel {
    pub fn name(self) -> &'static str {
        match self {
            StateLabel::Ground => "00",
            StateLabel::Excited => "10bar",
            StateLabel::Bare10 => "10bare",
        }
    }
}

fn std_pdf(u: f64) -> f64 {
    (-0.5 * u * u).exp() / (2.0 * PI).sqrt()
}

/// Density `α + βz` on `[a, b]` convolved with `N(0, σ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedLinear {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
}

impl SmoothedLinear {
    pub fn mass(&self) -> f64 {
        let (a, b) = (self.a, self.b);
        self.alpha * (b - a) + 0.5 * self.beta * (b * b - a * a)
    }

    pub fn density(&self, x: f64) -> f64 {
        let s = self.sigma;
        let (ua, ub) = ((x - self.a) / s, (x - self.b) / s);
        (self.alpha + self.beta * x) * (normal_cdf(ua) - normal_cdf(ub)) + self.beta * s * (std_pdf(ua) - std_pdf(ub))
    }

    /// Mass at or below `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        // ∫Φ = uΦ + φ and ∫uΦ = [(u² − 1)Φ + uφ]/2 after z = x − σu.
        let s = self.sigma;
        let j0 = |u: f64| u * normal_cdf(u) + std_pdf(u);
        let j1 = |u: f64| 0.5 * ((u * u - 1.0) * normal_cdf(u) + u * std_pdf(u));
        let (ua, ub) = ((x - self.a) / s, (x - self.b) / s);
        s * (self.alpha + self.beta * x) * (j0(ua) - j0(ub)) - self.beta * s * s * (j1(ua) - j1(ub))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalyticOptions {
    pub convention: WeightConvention,
    /// Share of single jumps that are energy relaxation of the measured
    /// qubit: those spread uniformly over `[−1, cos 2θ]` instead of
    /// `[−cos 2θ, cos 2θ]`. Zero by default.
    pub relaxation_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticHistogram {
    pub label: StateLabel,
    pub t_over_tau: f64,
    pub theta: f64,
    pub cos2theta: f64,
    /// `Γ_sw⁻·t` and `Γ_sw⁺·t`.
    pub gamma_minus_t: f64,
    pub gamma_plus_t: f64,
    /// Weights for a start in `|10bar⟩`.
    pub weights: JumpWeights,
    /// Weights for a start in `|01bar⟩` (rates swapped); used by `Bare10`.
    pub weights_mirror: JumpWeights,
    pub options: AnalyticOptions,
}

/// Histogram at integration time `t` for readout time constant `tau`.
pub fn analytic_histogram(
    label: StateLabel,
    t: f64,
    tau: f64,
    theta: f64,
    gamma_sw_minus: f64,
    gamma_sw_plus: f64,
) -> Result<AnalyticHistogram> {
    analytic_histogram_with(label, t, tau, theta, gamma_sw_minus, gamma_sw_plus, AnalyticOptions::default())
}

pub fn analytic_histogram_with(
    label: StateLabel,
    t: f64,
    tau: f64,
    theta: f64,
    gamma_sw_minus: f64,
    gamma_sw_plus: f64,
    options: AnalyticOptions,
) -> Result<AnalyticHistogram> {
    if !(t > 0.0 && tau > 0.0 && t.is_finite() && tau.is_finite()) {
        return Err(Error::InvalidInput("t and tau must be positive and finite".into()));
    }
    let cos2theta = (2.0 * theta).cos();
    if !(cos2theta > 0.0) {
        return Err(Error::InvalidInput("cos 2theta must be positive".into()));
    }
    if !(0.0..=1.0).contains(&options.relaxation_fraction) {
        return Err(Error::InvalidInput("relaxation_fraction must be in [0, 1]".into()));
    }
    let (gm_t, gp_t) = (gamma_sw_minus * t, gamma_sw_plus * t);
    Ok(AnalyticHistogram {
        label,
        t_over_tau: t / tau,
        theta,
        cos2theta,
        gamma_minus_t: gm_t,
        gamma_plus_t: gp_t,
        weights: jump_weights(gm_t, gp_t, options.convention)?,
        weights_mirror: jump_weights(gp_t, gm_t, options.convention)?,
        options,
    })
}

impl AnalyticHistogram {
    /// Noise standard deviation `√(τ/t)`.
    pub fn sigma(&self) -> f64 {
        self.t_over_tau.recip().sqrt()
    }

    fn gaussian(&self, center: f64, x: f64) -> f64 {
        let s = self.sigma();
        std_pdf((x - center) / s) / s
    }

    fn gaussian_cdf(&self, center: f64, x: f64) -> f64 {
        0.5 * erfc((center - x) / (self.sigma() * std::f64::consts::SQRT_2))
    }

    /// One-jump pieces for a start in `|10bar⟩` with `(Γ⁻t, Γ⁺t)`:
    /// the tilted box and the relaxation box, with their shares.
    fn one_jump(&self, gm_t: f64, gp_t: f64, relax: f64) -> [(f64, SmoothedLinear); 2] {
        let c = self.cos2theta;
        let k = (gp_t - gm_t) / (2.0 * c);
        let sigma = self.sigma();
        let switch = SmoothedLinear { a: -c, b: c, alpha: 0.5 / c, beta: 0.5 * k / c, sigma };
        let relaxation = SmoothedLinear { a: -1.0, b: c, alpha: 1.0 / (1.0 + c), beta: 0.0, sigma };
        [(1.0 - relax, switch), (relax, relaxation)]
    }

    fn two_jump(&self) -> SmoothedLinear {
        let c = self.cos2theta;
        SmoothedLinear { a: -c, b: c, alpha: 0.5 / c, beta: 0.5 / (c * c), sigma: self.sigma() }
    }

    /// Unweighted `[P⁽⁰⁾, P⁽¹⁾, P⁽²⁾]` at `x` for a start in `|10bar⟩`.
    pub fn components(&self, x: f64) -> [f64; 3] {
        self.components_for(x, self.gamma_minus_t, self.gamma_plus_t, self.options.relaxation_fraction)
    }

    fn components_for(&self, x: f64, gm_t: f64, gp_t: f64, relax: f64) -> [f64; 3] {
        let p1: f64 = self.one_jump(gm_t, gp_t, relax).iter().map(|(w, c)| w * c.density(x)).sum();
        [self.gaussian(self.cos2theta, x), p1, self.two_jump().density(x)]
    }

    /// Unweighted partial masses at or below `x`, `[P_err⁽⁰⁾, P_err⁽¹⁾, P_err⁽²⁾]`
    /// for a start in `|10bar⟩`.
    pub fn partial_cdfs(&self, x: f64) -> [f64; 3] {
        self.partial_cdfs_for(x, self.gamma_minus_t, self.gamma_plus_t, self.options.relaxation_fraction)
    }

    fn partial_cdfs_for(&self, x: f64, gm_t: f64, gp_t: f64, relax: f64) -> [f64; 3] {
        let p1: f64 = self.one_jump(gm_t, gp_t, relax).iter().map(|(w, c)| w * c.cdf(x)).sum();
        [self.gaussian_cdf(self.cos2theta, x), p1, self.two_jump().cdf(x)]
    }

    fn excited_density(&self, x: f64) -> f64 {
        let w = self.weights;
        let [a, b, c] = self.components(x);
        w.p0 * a + w.p1 * b + w.p2 * c
    }

    fn excited_cdf(&self, x: f64) -> f64 {
        let w = self.weights;
        let [a, b, c] = self.partial_cdfs(x);
        w.p0 * a + w.p1 * b + w.p2 * c
    }

    // |01bar⟩ is the mirror image of |10bar⟩ with the rates swapped.
    fn mirror_density(&self, x: f64) -> f64 {
        let w = self.weights_mirror;
        let [a, b, c] = self.components_for(-x, self.gamma_plus_t, self.gamma_minus_t, 0.0);
        w.p0 * a + w.p1 * b + w.p2 * c
    }

    fn mirror_cdf(&self, x: f64) -> f64 {
        let w = self.weights_mirror;
        let [a, b, c] = self.partial_cdfs_for(-x, self.gamma_plus_t, self.gamma_minus_t, 0.0);
        w.sum() - (w.p0 * a + w.p1 * b + w.p2 * c)
    }

    pub fn density(&self, x: f64) -> f64 {
        match self.label {
            StateLabel::Ground => self.gaussian(-1.0, x),
            StateLabel::Excited => self.excited_density(x),
            StateLabel::Bare10 => {
                let c2 = self.theta.cos().powi(2);
                c2 * self.excited_density(x) + (1.0 - c2) * self.mirror_density(x)
            }
        }
    }

    /// Mass at or below `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self.label {
            StateLabel::Ground => self.gaussian_cdf(-1.0, x),
            StateLabel::Excited => self.excited_cdf(x),
            StateLabel::Bare10 => {
                let c2 = self.theta.cos().powi(2);
                c2 * self.excited_cdf(x) + (1.0 - c2) * self.mirror_cdf(x)
            }
        }
    }

    /// Mass above `x`, computed without cancellation for the ground state.
    pub fn tail_above(&self, x: f64) -> f64 {
        match self.label {
            StateLabel::Ground => 0.5 * erfc((1.0 + x) / (self.sigma() * std::f64::consts::SQRT_2)),
            _ => self.total_mass() - self.cdf(x),
        }
    }

    /// Closed-form total mass: the sum of the jump weights in use.
    pub fn total_mass(&self) -> f64 {
        match self.label {
            StateLabel::Ground => 1.0,
            StateLabel::Excited => self.weights.sum(),
            StateLabel::Bare10 => {
                let c2 = self.theta.cos().powi(2);
                c2 * self.weights.sum() + (1.0 - c2) * self.weights_mirror.sum()
            }
        }
    }
}
