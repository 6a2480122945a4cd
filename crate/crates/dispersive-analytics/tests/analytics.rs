use dispersive_analytics::budget::ErrorModel;
use dispersive_analytics::optimize::GAMMA_TAU_RANGE;
use dispersive_analytics::switching::lorentz_filter;
use dispersive_analytics::*;
use num_complex::Complex64;
use operators_core::SystemParams;
use proptest::prelude::*;

fn params(kappa: f64, chi: f64, eps: f64, delta_r: f64) -> SystemParams {
    SystemParams {
        g: 0.1,
        delta: 1.0,
        chi,
        kappa,
        drive_amp: Complex64::new(eps, 0.0),
        delta_r,
        eta: 1.0,
        gamma_e: 0.0,
        t1: None,
        n_cutoff: 10,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn resonant_field_without_pull() {
    let f = steady_state(&params(2.0, 0.0, 0.3, 0.0));
    let expect = Complex64::new(0.0, -2.0 * 0.3 / 2.0);
    assert!((f.alpha_plus - expect).norm() < 1e-15);
    assert!((f.alpha_minus - expect).norm() < 1e-15);
    assert!(rel(f.nbar_plus, f.nbar_max) < 1e-15);
}

#[test]
fn dispersive_pull_lowers_both_photon_numbers() {
    let f = steady_state(&params(1.0, 1.0 / 40.0, 0.7, 0.0));
    let expect = 1.0 / (1.0 + 4.0 / 1600.0);
    assert!(rel(f.nbar_plus / f.nbar_max, expect) < 1e-14);
    assert!(rel(f.nbar_minus / f.nbar_max, expect) < 1e-14);
    assert!((expect - 0.99751).abs() < 1e-5);
}

#[test]
fn drive_resonant_with_excited_branch() {
    let (kappa, chi) = (1.0, 0.2);
    let f = steady_state(&params(kappa, chi, 0.4, -chi));
    assert!(rel(f.nbar_plus, f.nbar_max) < 1e-15);
    assert!(rel(f.nbar_minus, f.nbar_max * kappa * kappa / (kappa * kappa + 16.0 * chi * chi)) < 1e-14);
}

#[test]
fn rates_match_photon_number_forms() {
    // Stark shift and dephasing written through n̄± and n̄_max.
    for &(kappa, chi, dr) in &[(1.0, 0.05, 0.0), (0.3, 0.02, 0.1), (5.0, 0.4, -0.7)] {
        let p = params(kappa, chi, 0.5, dr);
        let f = steady_state(&p);
        let (r, w) = dephasing_and_stark(&f, chi, 1.0);
        assert!(w.is_empty());
        let prod = f.nbar_plus * f.nbar_minus / f.nbar_max;
        let stark = 2.0 * chi * prod * (1.0 + 4.0 * (dr * dr - chi * chi) / (kappa * kappa));
        let gm = 8.0 * chi * chi / kappa * prod;
        assert!(rel(r.stark, stark) < 1e-12);
        assert!(rel(r.gamma_m, gm) < 1e-12);
        assert!(rel(r.tau * 2.0 * r.gamma_m, 1.0) < 1e-15);
        assert!(rel(r.stark, p.stark_shift()) < 1e-15);
    }
}

#[test]
fn weak_pull_reduces_to_textbook_rates() {
    let (kappa, chi) = (1.0, 1e-4);
    let p = params(kappa, chi, 0.5, 0.0);
    let f = steady_state(&p);
    let (r, _) = dephasing_and_stark(&f, chi, 1.0);
    assert!(rel(r.stark, 2.0 * chi * f.nbar_max) < 1e-6);
    assert!(rel(r.gamma_m, 8.0 * chi * chi * f.nbar_max / kappa) < 1e-6);
}

#[test]
fn measurement_rate_for_the_collapse_figure() {
    // κ = Δ, χ/κ = 1/40, n̄ = 2: Γ_m = κ/100.
    let (kappa, chi) = (1.0, 1.0 / 40.0);
    let eps = SystemParams::drive_for_nbar(kappa, chi, 0.0, 2.0);
    let d = derive(&params(kappa, chi, eps, 0.0), SwitchingVariant::Classical).unwrap();
    assert!(rel(d.gamma_m, kappa / 100.0) < 5e-3, "{}", d.gamma_m);
}

#[test]
fn no_drive_means_infinite_tau() {
    let d = derive(&params(1.0, 0.01, 0.0, 0.0), SwitchingVariant::Classical).unwrap();
    assert!(d.tau.is_infinite());
    assert!(d.warnings.contains(&Warning::NoMeasurement));
}

#[test]
fn bad_cavity_switching_times_tau() {
    // Γ_sw τ = (g/Ω)² at η = 1, κ → ∞.
    for &(g, expect) in &[(0.1, 9.6e-3), (0.05, 1.0 / 404.0)] {
        let gm = 1e-3;
        let gt = switching_rate_from_gamma_m(gm, g, 1.0, f64::INFINITY) / (2.0 * gm);
        assert!((gt - g * g / (1.0 + 4.0 * g * g)).abs() < 1e-17);
        if g == 0.05 {
            assert_eq!(gt, expect);
        } else {
            assert!((gt - expect).abs() < 0.05e-3);
        }
    }
}

#[test]
fn suppression_for_a_slow_resonator() {
    // κ⁻¹ = 20 ns, Δ/2π = 0.5 GHz: Γ_sw ≈ 10⁻⁴ Γ_m (g/Δ)².
    let kappa = 1.0 / 20e-9;
    let delta = 2.0 * std::f64::consts::PI * 0.5e9;
    let filter = lorentz_filter(kappa, delta);
    assert!(rel(filter, 6.33e-5) < 1e-3);
    let ratio = 2.0 * filter;
    assert!(rel(ratio, 1e-4) < 0.3, "{ratio}");
}

#[test]
fn variants_agree_where_they_should() {
    let p = params(0.7, 0.01, 0.3, 0.0);
    let cl = switching_rates(&p, SwitchingVariant::Classical).unwrap();
    let dr = switching_rates(&p, SwitchingVariant::DeltaRCorrected { chi: None }).unwrap();
    assert!(rel(cl.minus, dr.minus) < 1e-14 && rel(cl.plus, dr.plus) < 1e-14);
    let before = switching_rates(&p, SwitchingVariant::DeltaRCorrected { chi: Some(ChiShift::Before) }).unwrap();
    let after = switching_rates(&p, SwitchingVariant::DeltaRCorrected { chi: Some(ChiShift::After) }).unwrap();
    // Before: Γ⁻ filter at Ω − χ passes more noise than at Ω + χ.
    assert!(before.minus > cl.minus && after.minus < cl.minus);
    assert!(before.plus > cl.plus && after.plus < cl.plus);
}

#[test]
fn environment_adds_to_switching() {
    let mut p = params(0.7, 0.01, 0.3, 0.0);
    let base = switching_rates(&p, SwitchingVariant::Classical).unwrap();
    p.gamma_e = 1e-3;
    p.t1 = Some(2e4);
    let env = switching_rates(&p, SwitchingVariant::Classical).unwrap();
    let extra = 2.0 * 1e-3 * 0.01 / 1.04;
    assert!((env.plus - base.plus - extra).abs() < 1e-18);
    assert!((env.minus - base.minus - extra - 1.0 / 2e4).abs() < 1e-18);
}

#[test]
fn fast_switching_is_flagged() {
    let p = params(1.0, 0.3, 10.0, 0.0);
    let sw = switching_rates(&p, SwitchingVariant::Classical).unwrap();
    assert!(matches!(sw.warnings[..], [Warning::SwitchingNotSlow { .. }]));
}

#[test]
fn telegraph_closed_form() {
    assert_eq!(telegraph_population(0.3, 0.1, 0.0), 1.0);
    assert!((telegraph_population(0.4, 0.4, 1e3) - 0.5).abs() < 1e-15);
    assert!((telegraph_population(2.0, 1.0, 1e3) - 1.0 / 3.0).abs() < 1e-15);
    let h = 1e-7;
    let slope = (telegraph_population(2.0, 1.0, h) - 1.0) / h;
    assert!((slope + 2.0).abs() < 1e-6);
}

#[test]
fn telegraph_solves_rate_equation() {
    // dP/dt = −Γ⁻P + Γ⁺(1 − P) with the exact derivative −Γ⁻e^{−λt}.
    for &(gm, gp) in &[(1.0, 1.0), (2.0, 1.0), (0.3, 0.05), (1e-6, 3e-7)] {
        for k in 0..50 {
            let t = k as f64 * 0.37 / (gm + gp);
            let p = telegraph_population(gm, gp, t);
            let deriv = -gm * (-(gm + gp) * t).exp();
            let residual = deriv - (-gm * p + gp * (1.0 - p));
            assert!(residual.abs() <= 1e-12 * gm.max(1.0));
        }
    }
}

fn solve_separation(target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 50.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if separation_error(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn separation_error_table() {
    for &(target, t) in &[(1e-2, 5.4), (1e-3, 9.5), (1e-4, 13.8)] {
        let x = solve_separation(target);
        assert!(rel(x, t) < 0.02, "{target}: {x}");
    }
    let b = error_budget(0.0, 1.0, 0.0, &[5.4, 9.5, 13.8], ErrorModel::SIMPLE);
    // With no switching both errors are the separation error.
    assert!(rel(b.p_err[0], 1e-2) < 0.05);
}

#[test]
fn zero_integration_carries_no_information() {
    for model in [ErrorModel::SIMPLE, ErrorModel { refined: true, cos2theta: Some(0.98) }] {
        let b = error_budget(1e-3, 1.0, 0.0, &[0.0], model);
        assert!((b.p_err[0] - 0.5).abs() < 1e-15);
    }
}

#[test]
fn simple_budget_minimum() {
    let grid: Vec<f64> = (1..=400).map(|k| k as f64 * 0.1).collect();
    let b = error_budget(1e-3, 1.0, 0.0, &grid, ErrorModel::SIMPLE);
    assert!((b.p_err_min - 3.2e-3).abs() < 0.05e-3, "{}", b.p_err_min);
    assert!((b.t_opt - 11.0).abs() < 0.1, "{}", b.t_opt);
    assert!(b.warnings.is_empty());
    let long = error_budget(1e-3, 1.0, 0.0, &[400.0], ErrorModel::SIMPLE);
    assert!(matches!(long.warnings[..], [Warning::BeyondFewJumps { .. }]));
}

#[test]
fn fixed_threshold_optimum() {
    let o = optimize_measurement(1e-3, 1.0, OptimizeMode::FixedZeroThreshold, ErrorModel::SIMPLE).unwrap();
    assert!((o.t_opt - 10.97).abs() < 0.005, "{}", o.t_opt);
    assert!((o.p_err_min - 3.2e-3).abs() < 0.05e-3);
    assert_eq!(o.i_th_opt, 0.0);
    // The large-t form of C quoted alongside the fixed point.
    assert!((c_asymptotic(o.t_opt) - 0.65).abs() < 0.01);
    // C read back from the minimum itself.
    assert!((o.c_const - 0.6).abs() < 0.01);
}

#[test]
fn fixed_point_is_the_stationary_point() {
    // For the simple model dP/dt = 0 is exactly the recursion.
    for &gt in &[1e-8, 1e-6, 1e-4, 1e-2, 0.05] {
        let x = t_opt_fixed_point(gt);
        let f = |x: f64| ErrorModel::SIMPLE.p_err(x, 0.0, gt);
        let h = 1e-4 * x;
        let d = (f(x + h) - f(x - h)) / (2.0 * h);
        assert!(d.abs() < 1e-6 * gt, "{gt}: {d}");
    }
}

#[test]
fn out_of_range_gamma_tau_is_rejected() {
    for gt in [1e-9, 0.1] {
        assert!(matches!(
            optimize_measurement(gt, 1.0, OptimizeMode::Joint, ErrorModel::SIMPLE),
            Err(Error::OutOfRange { .. })
        ));
    }
}

fn log_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 10f64.powf(-6.0 + 4.0 * k as f64 / (n - 1) as f64)).collect()
}

#[test]
fn joint_optimization_constants() {
    let mut c_fixed = Vec::new();
    for gt in log_grid(9) {
        let f = optimize_measurement(gt, 1.0, OptimizeMode::FixedZeroThreshold, ErrorModel::SIMPLE).unwrap();
        let j = optimize_measurement(gt, 1.0, OptimizeMode::Joint, ErrorModel::SIMPLE).unwrap();
        assert!(j.p_err_min <= f.p_err_min);
        let gain = f.p_err_min - j.p_err_min;
        assert!(rel(gain, gt / 16.0) < 0.2, "{gt}: denominator {}", gt / gain);
        assert!(rel(j.c_const / f.c_const, 0.88) < 0.02 / 0.88);
        let factor = -j.i_th_opt * j.t_opt;
        assert!((0.55..=0.58).contains(&factor), "{gt}: {factor}");
        assert!(gain / f.p_err_min <= 0.032);
        c_fixed.push(f.c_const);
    }
    // C rises monotonically from about 0.43 to about 0.74 across the range.
    assert!(c_fixed.windows(2).all(|w| w[1] > w[0]));
    assert!((c_fixed[0] - 0.43).abs() < 0.01 && (c_fixed[8] - 0.74).abs() < 0.01);
}

#[test]
fn threshold_gain_near_three_percent_at_large_switching() {
    let f = optimize_measurement(1e-2, 1.0, OptimizeMode::FixedZeroThreshold, ErrorModel::SIMPLE).unwrap();
    let j = optimize_measurement(1e-2, 1.0, OptimizeMode::Joint, ErrorModel::SIMPLE).unwrap();
    let relative = (f.p_err_min - j.p_err_min) / f.p_err_min;
    assert!((relative - 0.03).abs() < 0.005, "{relative}");
}

#[test]
fn refined_model_lowers_c() {
    let simple = optimize_measurement(1e-2, 1.0, OptimizeMode::FixedZeroThreshold, ErrorModel::SIMPLE).unwrap();
    let refined = ErrorModel { refined: true, cos2theta: None };
    let r = optimize_measurement(1e-2, 1.0, OptimizeMode::FixedZeroThreshold, refined).unwrap();
    assert!(r.c_const < simple.c_const);
    assert!((r.c_const - 0.64).abs() < 0.01, "{}", r.c_const);
}

#[test]
fn neighbor_headline_numbers() {
    let mut p = params(1e6, 1e-3, 1.0, 0.0);
    p.eta = 0.2;
    let bad = neighbor_error_summary(&p, neighbor::C_SYMMETRIC).unwrap();
    assert!((bad.p_err_min_eigen - 0.06).abs() < 0.005, "{}", bad.p_err_min_eigen);
    assert!((bad.p_err_min_bare - bad.p_err_min_eigen - 0.005).abs() < 1e-12);

    let delta = 2.0 * std::f64::consts::PI * 0.5e9;
    let mut slow = params(1.0 / 20e-9, 1e-3 * delta, 1.0, 0.0);
    slow.delta = delta;
    slow.g = delta / 10.0;
    slow.eta = 0.2;
    let s = neighbor_error_summary(&slow, neighbor::C_SYMMETRIC).unwrap();
    let ratio = s.p_err_min_eigen / 2e-5;
    assert!((0.5..=2.0).contains(&ratio), "{}", s.p_err_min_eigen);
    assert!((s.p_err_min_bare - 0.005).abs() < 1e-4);
}

#[test]
fn neighbor_summary_rejects_hopeless_regime() {
    let mut p = params(1e6, 1e-3, 1.0, 0.0);
    p.g = 0.45;
    p.eta = 0.01;
    assert!(matches!(neighbor_error_summary(&p, 0.6), Err(Error::RegimeInvalid(_))));
}

#[test]
fn observable_switching_time() {
    // κ⁻¹ = 10 ns, g/2π = 30 MHz, Δ/2π = 100 MHz, Γ_m/2π = 20 MHz.
    let two_pi = 2.0 * std::f64::consts::PI;
    let rate = switching_rate_from_gamma_m(two_pi * 20e6, two_pi * 30e6, two_pi * 100e6, 1e8);
    let time = 1.0 / rate;
    let ratio = time / 10e-6;
    assert!((1.0 / 1.5..=1.5).contains(&ratio), "{time}");
}

proptest! {
    #[test]
    fn dephasing_forms_agree(kappa in 0.01f64..100.0, chi in 1e-4f64..1.0, eps in 0.0f64..5.0, dr in -2.0f64..2.0) {
        let p = params(kappa, chi, eps, dr);
        let f = steady_state(&p);
        let (r, _) = dephasing_and_stark(&f, chi, 1.0);
        let alt = fields::gamma_m_from_separation(&f, kappa);
        prop_assert!((r.gamma_m - alt).abs() <= 1e-12 * alt.max(1e-300).max(r.gamma_m.abs()));
        prop_assert!((f.nbar_plus - f.alpha_plus.norm_sqr()).abs() <= 1e-15 * f.nbar_plus);
    }

    #[test]
    fn classical_ratio_is_photon_ratio(kappa in 0.01f64..100.0, chi in 1e-4f64..0.5, dr in -1.0f64..1.0, g in 0.01f64..0.3) {
        let mut p = params(kappa, chi, 0.5, dr);
        p.g = g;
        let sw = switching_rates(&p, SwitchingVariant::Classical).unwrap();
        let f = steady_state(&p);
        prop_assert!(sw.minus >= 0.0 && sw.plus >= 0.0);
        prop_assert!(((sw.minus / sw.plus) / (f.nbar_plus / f.nbar_minus) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn derived_invariants(kappa in 0.01f64..100.0, chi in 1e-4f64..0.5, eps in 0.01f64..3.0, eta in 0.05f64..1.0) {
        let mut p = params(kappa, chi, eps, 0.0);
        p.eta = eta;
        let d = derive(&p, SwitchingVariant::Classical).unwrap();
        prop_assert!((d.tau * 2.0 * eta * d.gamma_m - 1.0).abs() < 1e-12);
        prop_assert!(d.gamma_sw_minus >= 0.0 && d.gamma_sw_plus >= 0.0);
        prop_assert!((d.nbar_plus - d.alpha_plus.norm_sqr()).abs() <= 1e-14 * d.nbar_plus);
    }

    #[test]
    fn simplified_rate_grows_with_kappa(k1 in 0.001f64..1e3, factor in 1.001f64..10.0, g in 0.01f64..0.3) {
        let gm = 1e-3;
        let rate = |kappa: f64| 2.0 * gm * g * g * lorentz_filter(kappa, 1.0);
        prop_assert!(rate(k1 * factor) > rate(k1));
    }

    #[test]
    fn error_budget_shape(lg in -6.0f64..(0.05f64).log10()) {
        let gt = 10f64.powf(lg);
        let grid: Vec<f64> = (1..=600).map(|k| k as f64 * 0.1).collect();
        let b = error_budget(gt, 1.0, 0.0, &grid, ErrorModel::SIMPLE);
        let sep: Vec<f64> = grid.iter().map(|&x| separation_error(x)).collect();
        prop_assert!(sep.windows(2).all(|w| w[1] < w[0]));
        let sw: Vec<f64> = grid.iter().map(|&x| gt * x / 4.0).collect();
        prop_assert!(sw.windows(2).all(|w| w[1] > w[0]));
        // One local minimum on the grid, and it is the global one.
        let interior_minima = (1..grid.len() - 1).filter(|&k| b.p_err[k] < b.p_err[k - 1] && b.p_err[k] < b.p_err[k + 1]).count();
        prop_assert_eq!(interior_minima, 1);
        prop_assert!(b.p_err.iter().all(|&v| v >= b.p_err_min - 1e-15));
        for k in 0..grid.len() {
            prop_assert!((b.p_err[k] - 0.5 * (b.p_err_0[k] + b.p_err_1[k])).abs() < 1e-16);
            prop_assert!((0.0..=0.5).contains(&b.p_err_0[k]));
        }
    }

    #[test]
    fn joint_never_worse(lg in GAMMA_TAU_RANGE.0.log10()..GAMMA_TAU_RANGE.1.log10()) {
        let gt = 10f64.powf(lg);
        let f = optimize_measurement(gt, 1.0, OptimizeMode::FixedZeroThreshold, ErrorModel::SIMPLE).unwrap();
        let j = optimize_measurement(gt, 1.0, OptimizeMode::Joint, ErrorModel::SIMPLE).unwrap();
        prop_assert!(j.p_err_min <= f.p_err_min);
    }

    #[test]
    fn simplified_rate_limits(g in 0.01f64..0.3) {
        let gm = 1e-3;
        let full = |kappa: f64| 2.0 * gm * g * g * lorentz_filter(kappa, 1.0);
        prop_assert!((full(1e6) / (2.0 * gm * g * g) - 1.0).abs() < 1e-11);
        let kappa = 1e-4;
        prop_assert!((full(kappa) / (2.0 * gm * g * g * (kappa / 2.0).powi(2)) - 1.0).abs() < 1e-8);
    }
}
