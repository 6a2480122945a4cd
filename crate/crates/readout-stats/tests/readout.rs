use operators_core::numerics::{gauss_legendre, normal_pdf};
use proptest::prelude::*;
use readout_stats::*;

/// `θ` for `g/Δ`.
fn theta(g_over_delta: f64) -> f64 {
    0.5 * (2.0 * g_over_delta).atan()
}

/// Composite Gauss–Legendre integral of `f` on `[a, b]`.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let (x, w) = gauss_legendre(32, a + k as f64 * h, a + (k + 1) as f64 * h);
            x.iter().zip(&w).map(|(x, w)| w * f(*x)).sum::<f64>()
        })
        .sum()
}

fn excited(t_over_tau: f64, th: f64, gm_tau: f64, gp_tau: f64) -> AnalyticHistogram {
    analytic_histogram(StateLabel::Excited, t_over_tau, 1.0, th, gm_tau, gp_tau).unwrap()
}

fn ground(t_over_tau: f64) -> AnalyticHistogram {
    analytic_histogram(StateLabel::Ground, t_over_tau, 1.0, 0.0, 0.0, 0.0).unwrap()
}

#[test]
fn no_switching_leaves_a_gaussian_at_cos_2theta() {
    let th = theta(0.1);
    let h = excited(7.0, th, 0.0, 0.0);
    assert_eq!(h.weights, JumpWeights { p0: 1.0, p1: 0.0, p2: 0.0 });
    for x in [-1.0, 0.0, 0.7, 0.98, 1.3] {
        let expect = normal_pdf(x, (2.0 * th).cos(), 1.0 / 7.0);
        assert!((h.density(x) - expect).abs() < 1e-14 * expect.max(1.0));
    }
}

#[test]
fn jump_weights_at_fig8_parameters() {
    let h = excited(7.0, theta(0.1), 1.0 / 104.0, 1.0 / 104.0);
    let w = h.weights;
    assert!((w.p0 - (-0.0673f64).exp()).abs() < 2e-4, "p0 {}", w.p0);
    assert!((w.p0 - 0.935).abs() < 1e-3);
    assert!((w.p2 / 2.1e-3 - 1.0).abs() < 0.05, "p2 {}", w.p2);
    assert!((w.p1 - 0.063).abs() < 1e-3, "p1 {}", w.p1);
    assert!((w.sum() - 1.0).abs() < 1e-15);
    // The one-jump piece is flat at p1/2c away from its edges.
    let c = h.cos2theta;
    let flat = w.p1 * h.components(0.0)[1];
    assert!((flat / (w.p1 / (2.0 * c)) - 1.0).abs() < 0.01);
}

#[test]
fn weight_conventions() {
    let x = 0.05;
    let p = jump_weights(x, x, WeightConvention::Poisson).unwrap();
    assert!((p.p2 - 0.5 * x * x * (-x).exp()).abs() < 1e-16);
    let q = jump_weights(x, 2.0 * x, WeightConvention::Poisson).unwrap();
    assert!((q.p2 - x * x).abs() < 1e-16 && (q.sum() - 1.0).abs() < 1e-15);
    let f = jump_weights(x, x, WeightConvention::FoldedTwoJump).unwrap();
    assert_eq!(f.p2, 0.0);
    assert!((f.p1 - x * (1.0 - 0.75 * x)).abs() < 1e-16);
    let o = jump_weights(x, x, WeightConvention::OneJump).unwrap();
    assert!((o.sum() - 1.0).abs() < 1e-15);
    assert!(matches!(jump_weights(0.6, 0.1, WeightConvention::Poisson), Err(Error::Weights(_))));
    assert!(analytic_histogram(StateLabel::Excited, 100.0, 1.0, 0.1, 0.006, 0.006).is_err());
}

#[test]
fn smoothed_components_match_direct_quadrature() {
    // P⁽²⁾ and the tilted box against a 128-node Gauss–Legendre convolution.
    let (c, sigma) = (0.95, 0.3);
    let ramp = SmoothedLinear { a: -c, b: c, alpha: 0.5 / c, beta: 0.5 / (c * c), sigma };
    let tilt = SmoothedLinear { a: -c, b: c, alpha: 0.5 / c, beta: 0.02, sigma };
    let (zs, ws) = gauss_legendre(128, -c, c);
    for shape in [ramp, tilt] {
        for x in [-1.6, -1.0, -0.3, 0.0, 0.5, 0.95, 1.4] {
            let direct: f64 = zs
                .iter()
                .zip(&ws)
                .map(|(z, w)| w * (shape.alpha + shape.beta * z) * normal_pdf(x, *z, sigma * sigma))
                .sum();
            assert!((shape.density(x) - direct).abs() < 1e-10, "x = {x}");
            let cdf = integrate(|u| shape.density(u), -c - 12.0 * sigma, x, 64);
            assert!((shape.cdf(x) - cdf).abs() < 1e-10, "x = {x}");
        }
        assert!((shape.cdf(10.0) - shape.mass()).abs() < 1e-12);
    }
}

#[test]
fn one_jump_piece_converges_to_the_box() {
    let h = excited(1e6, theta(0.1), 1e-8, 1e-8);
    let c = h.cos2theta;
    for x in [-0.8, -0.3, 0.0, 0.4, 0.9] {
        assert!((h.components(x)[1] - 0.5 / c).abs() < 1e-12);
    }
    assert!(h.components(1.0)[1] < 1e-12);
}

#[test]
fn symmetric_one_jump_error_is_one_half_at_zero_threshold() {
    for t in [2.0, 7.0, 20.0] {
        let h = excited(t, theta(0.05), 0.01, 0.01);
        assert!((h.partial_cdfs(0.0)[1] - 0.5).abs() < 1e-14);
    }
}

#[test]
fn extreme_thresholds_saturate() {
    let (g, e) = (ground(10.0).into(), excited(10.0, theta(0.05), 0.003, 0.003).into());
    let low = error_probability(&g, &e, -50.0);
    assert!(low.p_err_1 < 1e-15 && (low.p_err_0 - 1.0).abs() < 1e-15);
    let high = error_probability(&g, &e, 50.0);
    assert!(high.p_err_0 < 1e-15 && (high.p_err_1 - 1.0).abs() < 1e-12);
}

#[test]
fn closed_form_partial_errors_match_the_smoothed_pieces() {
    let th = theta(0.05);
    let (t, d) = (20.0, 0.004);
    let h = excited(t, th, 0.002, 0.002 + d / t);
    let c = h.cos2theta;
    for i_th in [-0.3, 0.0, 0.2] {
        let p1 = h.partial_cdfs(i_th)[1];
        assert!((p1 - one_jump_error_flat(i_th, c, d)).abs() < 1e-3, "one jump at {i_th}");
    }
    // Smoothing a quadratic CDF adds σ²F''/2 = (τ/t)/4c², which the
    // unsmoothed ramp leaves out. Far (≥ 6σ) from both ramp edges that
    // shift is the whole difference.
    let t2 = 100.0;
    let h2 = excited(t2, th, 0.002, 0.002);
    for i_th in [-0.3, 0.0, 0.3] {
        let p2 = h2.partial_cdfs(i_th)[2];
        let shifted = two_jump_error_flat(i_th, c) + 0.25 / (t2 * c * c);
        assert!((p2 - shifted).abs() < 1e-8, "two jumps at {i_th}: {p2} vs {shifted}");
    }
    let sym = excited(5.0, th, 0.002, 0.002);
    let i_th = 0.01;
    let near = one_jump_error_near_zero(i_th, c, 5.0);
    assert!((sym.partial_cdfs(i_th)[1] - near).abs() < 1e-6);
}

#[test]
fn bare_basis_penalty() {
    let r = DiscriminationResult { i_th: 0.0, p_err_0: 1e-3, p_err_1: 2e-3, p_err: 1.5e-3, p_err_1_bare: None, p_err_bare: None };
    let same = bare_basis_error(r, 0.0);
    assert_eq!(same.p_err_1_bare, Some(r.p_err_1));
    let th = theta(0.1);
    let b = bare_basis_error(r, th);
    let expect = (2.0 * th).cos() * r.p_err_1 + th.sin().powi(2);
    assert!((b.p_err_1_bare.unwrap() - expect).abs() <= 1e-12);
    assert!((b.p_err_bare.unwrap() - b.p_err - 0.005).abs() < 2e-4);
    let half = DiscriminationResult { p_err_1: 0.5, ..r };
    assert!((bare_basis_error(half, th).p_err_1_bare.unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn bare_histogram_agrees_with_the_collapse_formula_at_zero_threshold() {
    let th = theta(0.1);
    let (t, gt) = (10.0, 0.01);
    let bare = analytic_histogram(StateLabel::Bare10, t, 1.0, th, gt, gt).unwrap();
    let eig = excited(t, th, gt, gt);
    let g = ReadoutHistogram::from(ground(t));
    let r = bare_basis_error(error_probability(&g, &eig.into(), 0.0), th);
    let direct = error_probability(&g, &bare.into(), 0.0);
    assert!((direct.p_err_1 - r.p_err_1_bare.unwrap()).abs() < 1e-12);
}

#[test]
fn relaxation_piece_is_a_box_down_to_minus_one() {
    let opts = AnalyticOptions { relaxation_fraction: 1.0, ..Default::default() };
    let h = analytic_histogram_with(StateLabel::Excited, 1e6, 1.0, theta(0.1), 1e-8, 1e-8, opts).unwrap();
    let c = h.cos2theta;
    assert!((h.components(-0.99)[1] - 1.0 / (1.0 + c)).abs() < 1e-9);
    assert!((integrate(|x| h.density(x), -1.5, 1.5, 600) - 1.0).abs() < 1e-9);
}

#[test]
fn optimal_threshold_is_the_density_crossing() {
    for (t, gt) in [(7.0, 1.0 / 104.0), (12.0, 1e-3), (20.0, 1.0 / 404.0)] {
        let th = theta(0.05);
        let (gh, eh) = (ground(t), excited(t, th, gt, gt));
        let opt = optimal_threshold(&gh.clone().into(), &eh.clone().into());
        let (fg, fe) = (gh.density(opt.i_th), eh.density(opt.i_th));
        assert!((fg - fe).abs() < 1e-6 * fg, "t = {t}: {fg} vs {fe}");
        // Exactly one local minimum on a fine sweep.
        let (g, e) = (gh.into(), eh.into());
        let p: Vec<f64> = (0..=2000).map(|k| error_probability(&g, &e, -1.0 + k as f64 * 1e-3).p_err).collect();
        let minima = (1..p.len() - 1).filter(|&k| p[k] < p[k - 1] && p[k] <= p[k + 1]).count();
        assert_eq!(minima, 1);
    }
}

#[test]
fn default_bins_put_edges_on_minus_one_zero_and_one() {
    for t in [1.0, 5.0, 7.0, 20.0, 333.0] {
        let w = default_bin_width(t);
        let n = 1.0 / w;
        assert!((n - n.round()).abs() < 1e-9);
        assert!(w <= (1.0 / t).sqrt() / 5.0);
    }
    assert_eq!(default_bin_width(7.0), 1.0 / 14.0);
}

#[test]
fn empirical_bins_count_every_sample_once() {
    let samples = [-1.2, -1.0, -0.03, 0.0, 0.0, 0.01, 0.5, 1.0, 1.7];
    let h = empirical_histogram(StateLabel::Excited, &samples, 7.0, None).unwrap();
    assert_eq!(h.counts.iter().sum::<u64>(), samples.len() as u64);
    // Readouts on the threshold read as "0".
    assert_eq!(h.cdf(0.0), 5.0 / 9.0);
    assert_eq!(h.cdf(-1.0), 2.0 / 9.0);
    assert_eq!(h.cdf(5.0), 1.0);
    assert!(matches!(empirical_histogram(StateLabel::Ground, &[], 7.0, None), Err(Error::Empty)));
    assert!(empirical_histogram(StateLabel::Ground, &[f64::NAN], 7.0, None).is_err());
}

#[test]
fn ground_ensemble_histogram_has_noise_statistics() {
    let cfg = trajectory_sim::TrajectoryConfig { gamma_m: 5e-3, dt_over_tau: 1e-3, n_steps: 7000, ..Default::default() };
    let m = 100_000u64;
    let s = &trajectory_sim::ground_readouts(&cfg, m, &[7000]).unwrap()[0];
    let mean = s.iter().sum::<f64>() / m as f64;
    let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    let v0 = 1.0 / 7.0;
    assert!((mean + 1.0).abs() < 4.0 * (v0 / m as f64).sqrt());
    assert!((var / v0 - 1.0).abs() < 4.0 * (2.0 / m as f64).sqrt());
    let h = empirical_histogram(StateLabel::Ground, s, 7.0, None).unwrap();
    assert_eq!(h.total, m);
    let f: f64 = h.frequencies().iter().sum();
    assert!((f - 1.0).abs() < 1e-12);
}

fn linear_pieces() -> impl Strategy<Value = AnalyticHistogram> {
    (1.0..100.0f64, 0.0..0.2f64, 0.0..0.4f64, 0.0..0.4f64, 0.0..1.0f64, 0usize..3).prop_map(
        |(t, g, a, b, relax, label)| {
            let label = [StateLabel::Ground, StateLabel::Excited, StateLabel::Bare10][label];
            let opts = AnalyticOptions { relaxation_fraction: if label == StateLabel::Excited { relax } else { 0.0 }, ..Default::default() };
            analytic_histogram_with(label, t, 1.0, theta(g), a / t, b / t, opts).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analytic_histograms_are_normalized(h in linear_pieces()) {
        let s = h.sigma();
        let (lo, hi) = (-1.0 - 14.0 * s, 1.0 + 14.0 * s);
        let mass = integrate(|x| h.density(x), lo, hi, 400);
        prop_assert!((mass - 1.0).abs() <= 1e-9, "mass {}", mass);
        prop_assert!((h.cdf(hi) - 1.0).abs() <= 1e-9);
        prop_assert!(h.cdf(lo).abs() <= 1e-9);
    }

    #[test]
    fn densities_are_nonnegative_and_cdfs_monotone(h in linear_pieces(), x in -2.0..2.0f64, dx in 1e-6..0.5f64) {
        prop_assert!(h.density(x) >= -1e-15);
        prop_assert!(h.cdf(x + dx) >= h.cdf(x) - 1e-14);
    }

    #[test]
    fn error_is_continuous_in_the_threshold(h in linear_pieces(), x in -1.0..1.0f64) {
        let g = ReadoutHistogram::from(ground(h.t_over_tau));
        let e = ReadoutHistogram::from(h.clone());
        let (a, b) = (error_probability(&g, &e, x).p_err, error_probability(&g, &e, x + 1e-9).p_err);
        prop_assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn merging_is_associative(xs in proptest::collection::vec(-2.0..2.0f64, 1..40), ys in proptest::collection::vec(-2.0..2.0f64, 1..40), zs in proptest::collection::vec(-2.0..2.0f64, 1..40)) {
        let h = |v: &[f64]| empirical_histogram(StateLabel::Excited, v, 5.0, None).unwrap();
        let (a, b, c) = (h(&xs), h(&ys), h(&zs));
        let left = a.merge(&b).unwrap().merge(&c).unwrap();
        let right = a.merge(&b.merge(&c).unwrap()).unwrap();
        let all: Vec<f64> = xs.iter().chain(&ys).chain(&zs).copied().collect();
        let whole = h(&all);
        prop_assert_eq!(&left, &right);
        // Merging may keep empty bins at the ends; counts agree where they overlap.
        prop_assert_eq!(left.total, whole.total);
        for (j, &cnt) in whole.counts.iter().enumerate() {
            let k = (whole.first_bin - left.first_bin) as usize + j;
            prop_assert_eq!(left.counts[k], cnt);
        }
    }
}
