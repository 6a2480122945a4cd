//! Trajectory histograms against the analytic jump expansion at
//! g/Δ = 1/10, Γ_m/Δ = 10⁻³, η = 1, t = 7τ.

use readout_stats::*;
use trajectory_sim::{ground_readouts, run_ensemble, InitialState, TrajectoryConfig};

const M: u64 = 100_000;

struct Binned {
    counts: Vec<u64>,
    expected: Vec<f64>,
    centers: Vec<f64>,
}

fn binned(emp: &EmpiricalHistogram, ana: &AnalyticHistogram) -> Binned {
    let n = emp.total as f64;
    let expected = (0..emp.counts.len())
        .map(|j| {
            let lo = emp.lower_edge(j);
            n * (ana.cdf(lo + emp.width) - ana.cdf(lo))
        })
        .collect();
    Binned { counts: emp.counts.clone(), expected, centers: emp.centers() }
}

#[test]
fn trajectory_histograms_match_the_jump_expansion() {
    let (g, gm) = (0.1, 1e-3);
    // |Ω|dt = 1.02·Δ·dt/τ/(2Γ_m) = 0.13.
    let cfg = TrajectoryConfig { g, gamma_m: gm, dt_over_tau: 2.5e-4, n_steps: 28_000, seed: 2024, ..Default::default() };
    let tau = cfg.tau();
    let t_over_tau = 7.0;
    let ens = run_ensemble(&cfg, M, InitialState::Excited, &[28_000]).unwrap();
    let ground = ground_readouts(&cfg, M, &[28_000]).unwrap();

    let gamma = dispersive_analytics::switching_rate_from_gamma_m(gm, g, 1.0, f64::INFINITY);
    assert!((gamma * tau - 9.6e-3).abs() < 1e-4);
    let theta = 0.5 * (2.0 * g).atan();
    let t = t_over_tau * tau;
    let ana_e = analytic_histogram(StateLabel::Excited, t, tau, theta, gamma, gamma).unwrap();
    let ana_g = analytic_histogram(StateLabel::Ground, t, tau, theta, gamma, gamma).unwrap();
    let emp_e = empirical_histogram(StateLabel::Excited, &ens.readouts[0], t_over_tau, None).unwrap();
    let emp_g = empirical_histogram(StateLabel::Ground, &ground[0], t_over_tau, None).unwrap();
    assert_eq!(emp_e.counts.iter().sum::<u64>(), M);

    // Bins expecting fewer than 5 counts are outside the Gaussian error model.
    for (name, emp, ana) in [("10bar", &emp_e, &ana_e), ("00", &emp_g, &ana_g)] {
        let b = binned(emp, ana);
        let mut worst = 0.0f64;
        for ((c, e), x) in b.counts.iter().zip(&b.expected).zip(&b.centers) {
            if *e < 5.0 {
                continue;
            }
            let sd = (e * (1.0 - e / M as f64)).sqrt();
            let z = (*c as f64 - e) / sd;
            worst = worst.max(z.abs());
            assert!(z.abs() < 5.0, "{name} bin at {x:.3}: {c} vs {e:.1}");
        }
        println!("{name}: largest deviation {worst:.2} standard errors");
    }

    // Near Ī = −1 the tail is a handful of jumped runs; both expansions
    // should be statistically consistent with it.
    let one = analytic_histogram_with(
        StateLabel::Excited,
        t,
        tau,
        theta,
        gamma,
        gamma,
        AnalyticOptions { convention: WeightConvention::OneJump, ..Default::default() },
    )
    .unwrap();
    let chi2 = |ana: &AnalyticHistogram| {
        let b = binned(&emp_e, ana);
        let terms: Vec<f64> = b
            .counts
            .iter()
            .zip(&b.expected)
            .zip(&b.centers)
            .filter(|(_, x)| **x > -1.3 && **x < -0.5)
            .map(|((c, e), _)| (*c as f64 - e).powi(2) / e)
            .collect();
        (terms.iter().sum::<f64>(), terms.len() as f64)
    };
    let ((two_jump, dof), (one_jump, _)) = (chi2(&ana_e), chi2(&one));
    println!("tail chi2 over {dof} bins: two-jump {two_jump:.2}, one-jump {one_jump:.2}");
    let bound = dof + 5.0 * (2.0 * dof).sqrt();
    assert!(two_jump < bound && one_jump < bound);
}
