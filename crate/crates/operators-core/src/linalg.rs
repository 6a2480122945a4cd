//! Dense complex linear algebra on column-major `nalgebra` matrices.

use matrixmultiply::CGemmOption;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
/// Dense operator on the composite space.
pub type OperatorMatrix = CMat;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// `c ← alpha·a·b + beta·c`.
pub fn gemm_into(alpha: Complex64, a: &CMat, b: &CMat, beta: Complex64, c: &mut CMat) {
    let (m, k) = a.shape();
    let (k2, n) = b.shape();
    assert_eq!(k, k2, "inner dimensions differ");
    assert_eq!(c.shape(), (m, n), "output shape mismatch");
    if m == 0 || n == 0 {
        return;
    }
    // Complex64 is repr(C) {re, im}, the layout matrixmultiply expects.
    unsafe {
        matrixmultiply::zgemm(
            CGemmOption::Standard,
            CGemmOption::Standard,
            m,
            k,
            n,
            [alpha.re, alpha.im],
            a.as_ptr().cast(),
            1,
            m as isize,
            b.as_ptr().cast(),
            1,
            k as isize,
            [beta.re, beta.im],
            c.as_mut_ptr().cast(),
            1,
            m as isize,
        );
    }
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let mut c = CMat::zeros(a.nrows(), b.ncols());
    gemm_into(C1, a, b, C0, &mut c);
    c
}

/// `out ← u·rho·u_adj`, using `scratch` for the intermediate product.
pub fn sandwich_into(u: &CMat, rho: &CMat, u_adj: &CMat, scratch: &mut CMat, out: &mut CMat) {
    gemm_into(C1, rho, u_adj, C0, scratch);
    gemm_into(C1, u, scratch, C0, out);
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues are real.
pub fn eigh(h: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(h.clone());
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `V·diag(f(λ))·V†` for Hermitian `h`.
pub fn hermitian_function(h: &CMat, f: impl Fn(f64) -> Complex64) -> CMat {
    let (vals, vecs) = eigh(h);
    let mut scaled = vecs.clone();
    for (j, &l) in vals.iter().enumerate() {
        let s = f(l);
        for x in scaled.column_mut(j).iter_mut() {
            *x *= s;
        }
    }
    matmul(&scaled, &vecs.adjoint())
}

/// `exp(−i·h·t)` for Hermitian `h`.
pub fn expm_hermitian(h: &CMat, t: f64) -> CMat {
    hermitian_function(h, |l| Complex64::from_polar(1.0, -l * t))
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Negative roundoff eigenvalues are clamped to zero.
pub fn sqrtm_psd(m: &CMat) -> CMat {
    hermitian_function(m, |l| Complex64::new(l.max(0.0).sqrt(), 0.0))
}

/// `max |m − m†|`.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64) -> CMat {
        let mut s = seed;
        CMat::from_fn(n, n, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((s >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((s >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
            Complex64::new(a, b)
        })
    }

    #[test]
    fn gemm_matches_nalgebra() {
        let a = sample(7, 1).columns(0, 5).into_owned();
        let b = sample(5, 2).rows(0, 5).into_owned();
        let c = matmul(&a, &b);
        let expected = &a * &b;
        assert!(max_abs(&(c - expected)) < 1e-14);
    }

    #[test]
    fn expm_is_unitary_and_exact_on_diagonal() {
        let x = sample(6, 3);
        let h = &x + x.adjoint();
        let u = expm_hermitian(&h, 0.7);
        let id = CMat::identity(6, 6);
        assert!(max_abs(&(matmul(&u, &u.adjoint()) - id)) < 1e-13);

        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.0),
        ]));
        let ud = expm_hermitian(&d, 0.3);
        assert!((ud[(0, 0)] - Complex64::from_polar(1.0, -0.3)).norm() < 1e-15);
        assert!((ud[(1, 1)] - Complex64::from_polar(1.0, 0.6)).norm() < 1e-15);
    }

    #[test]
    fn sqrtm_squares_back() {
        let x = sample(5, 4);
        let p = matmul(&x, &x.adjoint());
        let r = sqrtm_psd(&p);
        assert!(max_abs(&(matmul(&r, &r) - &p)) < 1e-13);
        assert!(hermiticity_defect(&r) < 1e-14);
    }
}
