//! Product-formula checkers: the character product formula on the cone, the
//! real-exponent product formula for the Heckman-Opdam polynomials on the
//! alcove, and its kernel form over the positive-definite cone.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{params, principal_pow, CheckReport, VerifyError};
use crate::hopoly::{DominantWeight, PolyTable};
use crate::hypergroup::{
    convolve, disk_blocks, eval_character, sample_block, ConePoint, ConvEngine, EPS_AXIS,
};
use crate::matcore::{det, hermitian_eigen, sample_haar_unitary, CMat};
use crate::mc::{estimate_ratio, McConfig};

fn fmt_vec(t: &[f64]) -> String {
    let entries: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("[{}]", entries.join(" "))
}

fn fmt_point(x: &ConePoint) -> String {
    format!("t={} z={}+{}i", fmt_vec(x.t()), x.z().re, x.z().im)
}

/// Alcove point of a block: arccos of the clipped singular values, reversed
/// into nonincreasing order.
pub(crate) fn block_alcove_point(d: &CMat) -> Vec<f64> {
    let sigma = crate::matcore::singular_values(d);
    let q = d.dim();
    (0..q)
        .map(|j| sigma[q - 1 - j].clamp(0.0, 1.0).acos())
        .collect()
}

/// Character product formula on the cone:
/// `φ(x)·φ(y) = ∫ φ d(δ_x *_p δ_y)`, for integer l.
///
/// Tolerance is 4·SE, plus an absolute 1e-8 budget when the deterministic
/// rank-one quadrature engine is used.
pub fn check_product_cone(
    table: &PolyTable,
    lambda: &DominantWeight,
    l: i64,
    p: f64,
    x: &ConePoint,
    y: &ConePoint,
    mc: McConfig,
    engine: ConvEngine,
) -> Result<CheckReport, VerifyError> {
    let lhs = eval_character(table, lambda, l as f64, p, x)?
        * eval_character(table, lambda, l as f64, p, y)?;
    let measure = convolve(x, y, p, mc, engine)?;
    let est = measure.integrate(|pt| {
        eval_character(table, lambda, l as f64, p, pt).expect("integer-l characters are total")
    });
    let quad_budget = if matches!(engine, ConvEngine::Quadrature { .. }) {
        1e-8
    } else {
        0.0
    };
    let tolerance = 4.0 * est.stderr + quad_budget;
    Ok(CheckReport::new(
        "product_cone",
        params(&[
            ("lambda", lambda.to_string()),
            ("l", l.to_string()),
            ("p", p.to_string()),
            ("q", x.q().to_string()),
            ("x", fmt_point(x)),
            ("y", fmt_point(y)),
            ("stderr", est.stderr.to_string()),
        ]),
        lhs,
        est.value(),
        tolerance,
        est.n_samples,
        est.seed,
    ))
}

/// Real-exponent product formula for the polynomials themselves:
/// `R_λ(k;t) R_λ(k;t') = (1/κ_p) ∫∫ R_λ(k; arccos σ_sing(d)) ·
///  Re[(Δ(d)/(Δcos t · Δcos t'))^l] · det(I-w*w)^(p-2q) dv dw`,
/// with the complex power on the principal branch.
pub fn check_product_jacobi(
    table: &PolyTable,
    lambda: &DominantWeight,
    l: f64,
    p: f64,
    t: &[f64],
    t2: &[f64],
    mc: McConfig,
    engine: ConvEngine,
) -> Result<CheckReport, VerifyError> {
    if l < 0.0 {
        return Err(VerifyError::InvalidParam(format!("need l >= 0, got {l}")));
    }
    let top = std::f64::consts::FRAC_PI_2;
    if t[0] >= top - EPS_AXIS || t2[0] >= top - EPS_AXIS {
        return Err(VerifyError::DegenerateArgument(
            "t_1 and t'_1 must stay below π/2".into(),
        ));
    }
    if (table.k.p - p).abs() > 1e-12 || (table.k.l - l).abs() > 1e-12 {
        return Err(VerifyError::InvalidParam(
            "table was built for different (p, l)".into(),
        ));
    }
    let lhs = table.eval_r(lambda, t)? * table.eval_r(lambda, t2)?;
    let denom: f64 = t.iter().map(|v| v.cos()).product::<f64>()
        * t2.iter().map(|v| v.cos()).product::<f64>();
    let est = match engine {
        ConvEngine::MonteCarlo => {
            let (tv, tv2) = (t.to_vec(), t2.to_vec());
            estimate_ratio(mc.n_samples, mc.seed, mc.parallel, move |rng| {
                let (d, w) = sample_block(&tv, &tv2, p, mc.scheme, rng);
                let xi = det(&d) / denom;
                let tau = block_alcove_point(&d);
                let val = table.eval_by_index(
                    table.index_of(lambda).expect("λ checked above"),
                    &tau,
                ) * principal_pow(xi, l).re;
                (Complex64::new(val, 0.0), w)
            })
        }
        ConvEngine::Quadrature { level, n_phase } => {
            if t.len() != 1 {
                return Err(VerifyError::InvalidParam(
                    "quadrature engine is rank-one only".into(),
                ));
            }
            let blocks = disk_blocks(t[0], t2[0], p, level, n_phase);
            let mut num = 0.0;
            let mut den = 0.0;
            for (d, w) in &blocks {
                let tau = [d.norm().clamp(0.0, 1.0).acos()];
                num += w
                    * table.eval_r(lambda, &tau).expect("λ checked above")
                    * principal_pow(d / denom, l).re;
                den += w;
            }
            crate::mc::Estimate {
                value_re: num / den,
                value_im: 0.0,
                stderr: 0.0,
                n_samples: blocks.len() as u64,
                seed: mc.seed,
            }
        }
    };
    let quad_budget = if matches!(engine, ConvEngine::Quadrature { .. }) {
        1e-8
    } else {
        0.0
    };
    Ok(CheckReport::new(
        "product_jacobi",
        params(&[
            ("lambda", lambda.to_string()),
            ("l", l.to_string()),
            ("p", p.to_string()),
            ("q", t.len().to_string()),
            ("t", fmt_vec(t)),
            ("t2", fmt_vec(t2)),
            ("stderr", est.stderr.to_string()),
        ]),
        Complex64::new(lhs, 0.0),
        est.value(),
        4.0 * est.stderr + quad_budget,
        est.n_samples,
        est.seed,
    ))
}

/// Uniform draw from {r Hermitian : 0 < r < I}. Off-diagonal entries of any
/// such r satisfy |r_ij| < 1/2, so the proposal box is exhaustive.
fn sample_r_matrix<R: Rng + ?Sized>(q: usize, rng: &mut R) -> (Vec<f64>, CMat) {
    loop {
        let mut r = CMat::zeros(q);
        for i in 0..q {
            r[(i, i)] = Complex64::new(rng.random::<f64>(), 0.0);
            for j in i + 1..q {
                let re = rng.random::<f64>() - 0.5;
                let im = rng.random::<f64>() - 0.5;
                r[(i, j)] = Complex64::new(re, im);
                r[(j, i)] = Complex64::new(re, -im);
            }
        }
        let (evals, vecs) = hermitian_eigen(&r, true);
        if evals[0] < 1.0 && *evals.last().unwrap() > 0.0 {
            return (evals, vecs.expect("vectors requested"));
        }
    }
}

/// Kernel form of the product formula: the (v, w)-integral transformed to an
/// integral over the positive-definite matrices r with 0 < r < I via the
/// polar decomposition b - a_1 w a_2 = √r u,
///
/// `R_λ(t)R_λ(t') = const ∫ R_λ(arccos σ(√r)) ·
///   Δ(r)^(l/2) / (Δcos^l Δcos'^l Δsin^(2q) Δsin'^(2q)) ·
///   [∫∫ det(H)_+^(p-2q) Δ(u)^l dv du] dr`,
/// `H = I - a_2⁻¹(b* - u*√r) a_1⁻² (b - √r u) a_2⁻¹`.
///
/// The symbolic `const` is eliminated by calibrating with the λ = 0 instance
/// under the same uniform proposal for r; the reported value is the ratio
/// estimator, judged at 5·SE.
pub fn check_kernel_form(
    table: &PolyTable,
    lambda: &DominantWeight,
    l: f64,
    p: f64,
    t: &[f64],
    t2: &[f64],
    mc: McConfig,
) -> Result<CheckReport, VerifyError> {
    let q = t.len();
    let top = std::f64::consts::FRAC_PI_2;
    for &v in t.iter().chain(t2.iter()) {
        if !(v > EPS_AXIS && v < top - EPS_AXIS) {
            return Err(VerifyError::DegenerateArgument(
                "kernel form needs all coordinates strictly inside (0, π/2)".into(),
            ));
        }
    }
    if q > 3 {
        return Err(VerifyError::InvalidParam("kernel form supports q <= 3".into()));
    }
    let lhs = table.eval_r(lambda, t)? * table.eval_r(lambda, t2)?;
    let lam_idx = table
        .index_of(lambda)
        .ok_or_else(|| VerifyError::InvalidParam(format!("{lambda} not in table")))?;
    let cos_x: Vec<f64> = t.iter().map(|v| v.cos()).collect();
    let sin_x: Vec<f64> = t.iter().map(|v| v.sin()).collect();
    let cos_y: Vec<f64> = t2.iter().map(|v| v.cos()).collect();
    let sin_y: Vec<f64> = t2.iter().map(|v| v.sin()).collect();
    let den_cos = (cos_x.iter().product::<f64>() * cos_y.iter().product::<f64>()).powf(l);
    let den_sin = (sin_x.iter().product::<f64>() * sin_y.iter().product::<f64>())
        .powi(2 * q as i32);
    let expo = p - 2.0 * q as f64;

    let sampler = move |rng: &mut ChaCha8Rng| -> (Complex64, f64) {
        let (r_eigs, r_vecs) = sample_r_matrix(q, rng);
        let u = sample_haar_unitary(q, false, rng);
        let v = sample_haar_unitary(q, true, rng);
        // √r from the eigendecomposition of r
        let sqrt_diag: Vec<Complex64> = r_eigs
            .iter()
            .map(|&e| Complex64::new(e.max(0.0).sqrt(), 0.0))
            .collect();
        let sqrt_r = r_vecs.mul(&CMat::diag(&sqrt_diag)).mul(&r_vecs.adjoint());
        let sru = sqrt_r.mul(&u);
        let m = CMat::from_fn(q, |i, j| {
            (cos_x[i] * v[(i, j)] * cos_y[j] - sru[(i, j)]) / (sin_x[i] * sin_y[j])
        });
        let h = CMat::identity(q).sub(&m.adjoint().mul(&m));
        let (h_eigs, _) = hermitian_eigen(&h, false);
        let kernel = if *h_eigs.last().unwrap() <= 0.0 {
            0.0
        } else {
            h_eigs.iter().product::<f64>().powf(expo)
        };
        if kernel == 0.0 || !kernel.is_finite() {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let det_r: f64 = r_eigs.iter().product();
        let phase = principal_pow(det(&u), l).re;
        let g0 = det_r.powf(0.5 * l) * phase * kernel / (den_cos * den_sin);
        if g0 == 0.0 {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let tau: Vec<f64> = (0..q)
            .map(|j| r_eigs[q - 1 - j].clamp(0.0, 1.0).sqrt().acos())
            .collect();
        let r_val = table.eval_by_index(lam_idx, &tau);
        (Complex64::new(r_val, 0.0), g0)
    };
    let est = estimate_ratio(mc.n_samples, mc.seed, mc.parallel, sampler);
    Ok(CheckReport::new(
        "kernel_form",
        params(&[
            ("lambda", lambda.to_string()),
            ("l", l.to_string()),
            ("p", p.to_string()),
            ("q", q.to_string()),
            ("t", fmt_vec(t)),
            ("t2", fmt_vec(t2)),
            ("stderr", est.stderr.to_string()),
        ]),
        Complex64::new(lhs, 0.0),
        est.value(),
        5.0 * est.stderr,
        est.n_samples,
        est.seed,
    ))
}
