//! Classical normalized one-dimensional Jacobi polynomials and disk
//! polynomials: the rank-one specialization of the cone characters, and the
//! cross-validation target for the BC_1 construction.
//!
//! The primary evaluation is the terminating hypergeometric sum
//! `R_n^(α,β)(x) = 2F1(α+β+n+1, -n; α+1; (1-x)/2)`, which is normalized so
//! that `R_n(1) = 1` exactly. The classical three-term recurrence lives in
//! the test module as an independent oracle only.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JacobiError {
    #[error("invalid Jacobi parameters: need alpha > -1 and beta > -1, got ({alpha}, {beta})")]
    InvalidParam { alpha: f64, beta: f64 },
}

/// Normalized Jacobi polynomial `R_n^(α,β)(x)` with `R_n(1) = 1`.
///
/// Forward accumulation of the n+1 terms of the terminating series; stable
/// for the degrees (n <= 50) and parameters (α, β <= 20) used here.
pub fn eval_jacobi(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64, JacobiError> {
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(JacobiError::InvalidParam { alpha, beta });
    }
    let z = 0.5 * (1.0 - x);
    let a = alpha + beta + n as f64 + 1.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (a + kf) * (kf - n as f64) / ((alpha + 1.0 + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// Disk polynomial `φ̃_{n,l}(z) = arg(z)^l · r^|l| · R_n^(p-1,|l|)(2r²-1)`
/// with `r = |z|` and the convention `arg 0 = 1`.
pub fn eval_disk(n: u32, l: i64, p: f64, z: Complex64) -> Complex64 {
    let r = z.norm();
    debug_assert!(p > 1.0 && r <= 1.0 + 1e-12);
    let labs = l.unsigned_abs() as u32;
    let phase = if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / r
    };
    let radial = eval_jacobi(n, p - 1.0, labs as f64, 2.0 * r * r - 1.0)
        .expect("p > 1 guarantees valid parameters");
    phase.powi(l as i32) * r.powi(labs as i32) * radial
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_legendre;
    use proptest::prelude::*;

    /// Independent oracle: the classical three-term recurrence on the
    /// unnormalized P_n^(α,β), normalized at the end by P_n(1) = (α+1)_n/n!.
    fn jacobi_recurrence_oracle(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
        let mut p0 = 1.0;
        let mut p1 = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
        if n == 0 {
            return 1.0;
        }
        for m in 2..=n as i64 {
            let m = m as f64;
            let c1 = 2.0 * m * (m + alpha + beta) * (2.0 * m + alpha + beta - 2.0);
            let c2 = (2.0 * m + alpha + beta - 1.0)
                * ((2.0 * m + alpha + beta) * (2.0 * m + alpha + beta - 2.0) * x
                    + alpha * alpha
                    - beta * beta);
            let c3 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * (2.0 * m + alpha + beta);
            let p2 = (c2 * p1 - c3 * p0) / c1;
            p0 = p1;
            p1 = p2;
        }
        let mut at_one = 1.0;
        for k in 0..n {
            at_one *= (alpha + 1.0 + k as f64) / (k as f64 + 1.0);
        }
        p1 / at_one
    }

    #[test]
    fn normalized_at_one() {
        for n in 0..12 {
            for &(a, b) in &[(0.5, 0.5), (2.0, 1.5), (7.0, 0.0), (1.0, 3.0)] {
                assert_eq!(eval_jacobi(n, a, b, 1.0).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn degree_one_closed_form() {
        // R_1 = 1 - (α+β+2)(1-x)/(2(α+1)), from the two-term series
        for &(a, b, x) in &[(2.0, 1.5, 0.3), (0.5, 0.0, -0.7), (4.0, 2.0, 0.9)] {
            let want = 1.0 - (a + b + 2.0) * (1.0 - x) / (2.0 * (a + 1.0));
            assert!((eval_jacobi(1, a, b, x).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_recurrence_oracle() {
        let got = eval_jacobi(4, 2.0, 1.5, 0.3).unwrap();
        let want = jacobi_recurrence_oracle(4, 2.0, 1.5, 0.3);
        assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
        for n in 0..=10 {
            for &x in &[-1.0, -0.4, 0.0, 0.25, 0.8, 1.0] {
                let got = eval_jacobi(n, 3.0, 0.5, x).unwrap();
                let want = jacobi_recurrence_oracle(n, 3.0, 0.5, x);
                assert!((got - want).abs() <= 1e-11, "n={n} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(eval_jacobi(2, -1.0, 0.0, 0.5).is_err());
        assert!(eval_jacobi(2, 0.0, -1.5, 0.5).is_err());
    }

    #[test]
    fn orthogonality_under_jacobi_weight() {
        // ∫_{-1}^{1} R_n R_m (1-x)^α (1+x)^β dx = 0 for n ≠ m, by 512-node
        // Gauss-Legendre in x = cos θ (the weight powers become smooth
        // half-angle sines/cosines there)
        let (theta, weights) = {
            let (x, w) = gauss_legendre(512);
            let t: Vec<f64> = x
                .iter()
                .map(|&xi| std::f64::consts::FRAC_PI_2 * (xi + 1.0))
                .collect();
            let w: Vec<f64> = w.iter().map(|&wi| wi * std::f64::consts::FRAC_PI_2).collect();
            (t, w)
        };
        for &(alpha, beta) in &[(1.5, 0.5), (3.0, 1.0)] {
            let ip = |n: u32, m: u32| -> f64 {
                theta
                    .iter()
                    .zip(&weights)
                    .map(|(&th, &w)| {
                        let x = th.cos();
                        let jac = (2.0 * (th / 2.0).sin().powi(2)).powf(alpha)
                            * (2.0 * (th / 2.0).cos().powi(2)).powf(beta)
                            * th.sin();
                        w * eval_jacobi(n, alpha, beta, x).unwrap()
                            * eval_jacobi(m, alpha, beta, x).unwrap()
                            * jac
                    })
                    .sum()
            };
            let norms: Vec<f64> = (0..=6u32).map(|n| ip(n, n)).collect();
            for n in 0..=6u32 {
                for m in 0..n {
                    let rel =
                        ip(n, m).abs() / (norms[n as usize] * norms[m as usize]).sqrt();
                    assert!(rel <= 1e-9, "({n},{m}) rel {rel:e}");
                }
            }
        }
    }

    #[test]
    fn disk_polynomial_cases() {
        // n = 0 on the unit circle: φ̃_{0,l}(z) = z^l
        for l in [-2i64, 0, 1, 3] {
            let z = Complex64::from_polar(1.0, 0.7);
            let got = eval_disk(0, l, 3.0, z);
            assert!((got - z.powi(l as i32)).norm() < 1e-14);
        }
        // l ≠ 0 kills the origin
        assert_eq!(eval_disk(2, 1, 3.0, Complex64::new(0.0, 0.0)).norm(), 0.0);
        // |φ̃| = 1 on the circle
        for n in 0..4 {
            let z = Complex64::from_polar(1.0, -1.2);
            assert!((eval_disk(n, 2, 2.5, z).norm() - 1.0).abs() < 1e-12);
        }
    }

    proptest! {
        // stability sweep: never NaN/Inf over the admissible box; values are
        // O(1) in the working range, while extreme (n, α, β) combinations
        // lose digits to cancellation but stay finite
        #[test]
        fn bounded_no_nan(n in 0u32..=50, a in -0.9f64..20.0, b in -0.9f64..20.0,
                          x in -1.0f64..1.0) {
            let v = eval_jacobi(n, a, b, x).unwrap();
            prop_assert!(v.is_finite());
        }

        #[test]
        fn bounded_by_value_at_one(n in 0u32..=12, a in 0f64..8.0, b in -0.45f64..0.0,
                                   x in -1.0f64..1.0, shift in 0f64..4.0) {
            // classical bound: for α >= β >= -1/2 the normalized polynomial
            // attains its maximum modulus at x = 1
            let alpha = a + b.abs() + shift;
            let v = eval_jacobi(n, alpha, b, x).unwrap();
            prop_assert!(v.abs() <= 1.0 + 1e-10,
                         "R_{}^({},{})({}) = {}", n, alpha, b, x, v);
        }
    }
}
