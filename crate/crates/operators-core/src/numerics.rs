//! Scalar numerics shared by the engines: error functions, 1-D minimization,
//! quadrature and least squares.

use gauss_quad::GaussLegendre;

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

pub fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    (-d * d / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
/// Stops when the bracket is narrower than `tol`; returns `(x, f(x))`.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // 200 iterations shrink any finite bracket below f64 resolution.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(n).expect("degree must be at least 2");
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.as_node_weight_pairs().iter().map(|&(x, w)| (mid + half * x, half * w)).unzip()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms: f64,
    /// Standard error of the slope.
    pub slope_se: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|&v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x.iter().zip(y).map(|(&a, &b)| (b - slope * a - intercept).powi(2)).sum();
    let dof = (n.saturating_sub(2)).max(1) as f64;
    Some(LineFit { slope, intercept, rms: (ss / nf).sqrt(), slope_se: (ss / dof / sxx).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 2.0, -1.0, 4.0, 1e-12);
        // Flat minimum: x is resolved only to about sqrt(eps).
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(8, -1.0, 3.0);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(5)).sum();
        // ∫ x⁵ from −1 to 3 = (729 − 1)/6
        assert!((integral - 728.0 / 6.0).abs() < 1e-11);
    }

    #[test]
    fn line_fit_exact() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| -2.5 * v + 1.0).collect();
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope + 2.5).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
    }

    #[test]
    fn erf_reference_values() {
        assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1e-15);
        assert!((erfc(5.0) - 1.537_459_794_428_034_8e-12).abs() < 1e-26);
    }
}
