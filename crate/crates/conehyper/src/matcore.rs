//! Small dense complex matrix algebra for q×q blocks (q is 1..4 in practice),
//! Haar sampling on U(q)/SU(q), and sampling/weighting on the matrix ball
//! `B_q = {w : w*w <= I}` with density `det(I - w*w)^(p-2q)`.
//!
//! Everything is written for tiny fixed dimensions: LU with partial pivoting
//! for determinants and a cyclic Jacobi eigensolver on Hermitian matrices for
//! singular values and polar decompositions. No external linear algebra.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::quad::{integrate_ts, integrate_ts_unit};

/// Singularity threshold for `arg_det` / `polar_decompose`. The degenerate
/// set has measure zero under every sampler in this crate.
pub const EPS_SING: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatError {
    #[error("input is numerically singular (|det| <= {EPS_SING:e}); reject and resample")]
    SingularInput,
    #[error("matrix outside the ball B_q: min eigenvalue of I - w*w is {min_eig:e}")]
    OutOfBall { min_eig: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

/// Scheme used to realize the `B_q` integral as an expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallScheme {
    /// Uniform proposals in the entrywise complex box, accepted inside the
    /// ball, weighted by `det(I - w*w)^(p-2q)`. Weight variance blows up as
    /// p -> 2q-1; prefer `SvdParam` for p < 2q.
    Rejection,
    /// Exact sampling through the singular value decomposition
    /// `w = u diag(σ) v*`: σ from the density ∝ Πσ_i(1-σ_i²)^(p-2q)Π(σ_i²-σ_j²)²
    /// by rejection, u and v Haar on U(q). Weight is identically 1.
    SvdParam,
}

/// A square complex matrix, row-major, dimension q.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    a: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            a: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = CMat::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                for j in 0..n {
                    out.a[i * n + j] += aik * rhs.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMat {
        let n = self.n;
        CMat::from_fn(n, |i, j| self.a[j * n + i].conj())
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&rhs.a) {
            *x -= y;
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.a[i * self.n + j]
    }
}

/// A point of the matrix ball together with its importance weight.
#[derive(Debug, Clone)]
pub struct BallSample {
    pub w: CMat,
    pub weight: f64,
}

// ── determinant and argument ────────────────────────────────────────

/// Determinant by LU with partial pivoting. Singular input returns 0.
pub fn det(a: &CMat) -> Complex64 {
    debug_assert!(a.is_finite());
    let n = a.n;
    let mut lu = a.a.clone();
    let mut sign = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let mut piv = k;
        let mut best = lu[k * n + k].norm_sqr();
        for i in k + 1..n {
            let v = lu[i * n + k].norm_sqr();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != k {
            for j in 0..n {
                lu.swap(k * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let pivot = lu[k * n + k];
        for i in k + 1..n {
            let f = lu[i * n + k] / pivot;
            lu[i * n + k] = f;
            for j in k + 1..n {
                let sub = f * lu[k * n + j];
                lu[i * n + j] -= sub;
            }
        }
    }
    let mut d = sign;
    for k in 0..n {
        d *= lu[k * n + k];
    }
    d
}

/// `det(A)/|det(A)|`, with the convention `arg 0 := 1` below the
/// singularity threshold.
pub fn arg_det(a: &CMat) -> Complex64 {
    let d = det(a);
    let r = d.norm();
    if r <= EPS_SING {
        Complex64::new(1.0, 0.0)
    } else {
        d / r
    }
}

// ── Hermitian eigensolver (cyclic Jacobi) ───────────────────────────

/// Eigenvalues (descending) and optional eigenvector matrix of a Hermitian
/// matrix, by cyclic Jacobi with unitary 2×2 rotations.
pub fn hermitian_eigen(h: &CMat, with_vectors: bool) -> (Vec<f64>, Option<CMat>) {
    let n = h.n;
    let mut a = h.clone();
    let mut v = if with_vectors {
        Some(CMat::identity(n))
    } else {
        None
    };
    let scale = a.frobenius().max(1e-300);
    let tol = 1e-15 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a.a[i * n + j].norm_sqr();
                }
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let m = apq.norm();
                if m <= tol * 1e-2 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * m);
                let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sgn / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = apq / m;
                // A <- G* A G,  V <- V G  with
                // G[p,p]=c, G[p,q]=-s*phase, G[q,p]=s*conj(phase), G[q,q]=c.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip + s * phase.conj() * aiq;
                    a[(i, q)] = -s * phase * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = c * apj + s * phase * aqj;
                    a[(q, j)] = -s * phase.conj() * apj + c * aqj;
                }
                if let Some(vm) = v.as_mut() {
                    for i in 0..n {
                        let vip = vm[(i, p)];
                        let viq = vm[(i, q)];
                        vm[(i, p)] = c * vip + s * phase.conj() * viq;
                        vm[(i, q)] = -s * phase * vip + c * viq;
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let evals: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| evals[j].partial_cmp(&evals[i]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| evals[i]).collect();
    let vecs = v.map(|vm| CMat::from_fn(n, |i, j| vm[(i, order[j])]));
    (sorted, vecs)
}

/// Singular values of A, nonincreasing: sqrt of the spectrum of A*A.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let ata = a.adjoint().mul(a);
    let (evals, _) = hermitian_eigen(&ata, false);
    evals.iter().map(|&e| e.max(0.0).sqrt()).collect()
}

/// Polar decomposition A = R·U with R = (A A*)^(1/2) Hermitian positive
/// definite and U unitary. Fails on numerically singular input, which
/// callers treat as a measure-zero degenerate sample.
pub fn polar_decompose(a: &CMat) -> Result<(CMat, CMat), MatError> {
    if det(a).norm() <= EPS_SING {
        return Err(MatError::SingularInput);
    }
    let aat = a.mul(&a.adjoint());
    let (evals, vecs) = hermitian_eigen(&aat, true);
    let v = vecs.expect("vectors requested");
    let sqrt_d: Vec<Complex64> = evals
        .iter()
        .map(|&e| Complex64::new(e.max(0.0).sqrt(), 0.0))
        .collect();
    let inv_sqrt_d: Vec<Complex64> = sqrt_d
        .iter()
        .map(|s| Complex64::new(1.0 / s.re, 0.0))
        .collect();
    let r = v.mul(&CMat::diag(&sqrt_d)).mul(&v.adjoint());
    let u = v.mul(&CMat::diag(&inv_sqrt_d)).mul(&v.adjoint()).mul(a);
    Ok((r, u))
}

// ── Haar sampling ───────────────────────────────────────────────────

/// Haar-distributed unitary via Ginibre + modified Gram-Schmidt QR.
///
/// MGS produces the unique Q whose R has positive diagonal, which is exactly
/// the phase-corrected (Haar) factor. With `special` the last column is
/// multiplied by det^(-1), giving Haar measure on SU(q).
pub fn sample_haar_unitary<R: Rng + ?Sized>(q: usize, special: bool, rng: &mut R) -> CMat {
    assert!(q >= 1);
    let mut cols: Vec<Vec<Complex64>> = (0..q)
        .map(|_| {
            (0..q)
                .map(|_| {
                    Complex64::new(
                        rng.sample::<f64, _>(StandardNormal),
                        rng.sample::<f64, _>(StandardNormal),
                    ) * std::f64::consts::FRAC_1_SQRT_2
                })
                .collect()
        })
        .collect();
    for j in 0..q {
        // two projection passes: MGS with reorthogonalization
        for _pass in 0..2 {
            for i in 0..j {
                let proj: Complex64 = (0..q).map(|k| cols[i][k].conj() * cols[j][k]).sum();
                for k in 0..q {
                    let sub = proj * cols[i][k];
                    cols[j][k] -= sub;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = CMat::from_fn(q, |i, j| cols[j][i]);
    if special {
        let d = det(&u);
        // |d| = 1, so det^(-1) = conj(d)
        let corr = d.conj() / d.norm();
        for i in 0..q {
            u[(i, q - 1)] *= corr;
        }
    }
    u
}

// ── ball density and sampling ───────────────────────────────────────

/// `det(I - w*w)^(p-2q)`, the ball density of the product formula.
pub fn ball_density(w: &CMat, p: f64, q: usize) -> Result<f64, MatError> {
    debug_assert_eq!(w.dim(), q);
    let h = CMat::identity(q).sub(&w.adjoint().mul(w));
    let (evals, _) = hermitian_eigen(&h, false);
    let min_eig = *evals.last().unwrap();
    if min_eig < -1e-9 {
        return Err(MatError::OutOfBall { min_eig });
    }
    let e = p - 2.0 * q as f64;
    let d: f64 = evals.iter().map(|&x| x.max(0.0)).product();
    if d == 0.0 {
        return Ok(if e < 0.0 {
            f64::INFINITY
        } else if e == 0.0 {
            1.0
        } else {
            0.0
        });
    }
    Ok(d.powf(e))
}

/// Draw a ball point under the given scheme. `Rejection` returns the density
/// as importance weight; `SvdParam` samples the density exactly (weight 1).
pub fn sample_ball<R: Rng + ?Sized>(
    q: usize,
    p: f64,
    scheme: BallScheme,
    rng: &mut R,
) -> BallSample {
    debug_assert!(p > 2.0 * q as f64 - 1.0);
    match scheme {
        BallScheme::Rejection => loop {
            let w = CMat::from_fn(q, |_, _| {
                Complex64::new(
                    2.0 * rng.random::<f64>() - 1.0,
                    2.0 * rng.random::<f64>() - 1.0,
                )
            });
            let wtw = w.adjoint().mul(&w);
            let (evals, _) = hermitian_eigen(&wtw, false);
            if evals[0] <= 1.0 {
                let e = p - 2.0 * q as f64;
                let d: f64 = evals.iter().map(|&x| (1.0 - x).max(0.0)).product();
                let weight = if d == 0.0 {
                    if e < 0.0 {
                        continue; // measure-zero boundary hit with divergent weight
                    } else if e == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    d.powf(e)
                };
                return BallSample { w, weight };
            }
        },
        BallScheme::SvdParam => {
            let b = p - 2.0 * q as f64;
            let inv = 1.0 / (b + 1.0);
            let x: Vec<f64> = loop {
                let cand: Vec<f64> = (0..q)
                    .map(|_| 1.0 - rng.random::<f64>().powf(inv))
                    .collect();
                let mut accept = 1.0;
                for i in 0..q {
                    for j in i + 1..q {
                        accept *= (cand[i] - cand[j]) * (cand[i] - cand[j]);
                    }
                }
                if rng.random::<f64>() < accept {
                    break cand;
                }
            };
            let sigma: Vec<Complex64> = x
                .iter()
                .map(|&xi| Complex64::new(xi.sqrt(), 0.0))
                .collect();
            let u = sample_haar_unitary(q, false, rng);
            let v = sample_haar_unitary(q, false, rng);
            let w = u.mul(&CMat::diag(&sigma)).mul(&v.adjoint());
            BallSample { w, weight: 1.0 }
        }
    }
}

// ── the normalization integral κ_p ──────────────────────────────────

/// κ_p = ∫_{B_q} det(I - w*w)^(p-2q) dw.
///
/// q = 1 is a radial integral over the disk. For q >= 2 the integral is
/// reduced to singular-value coordinates, where the angular volume is fixed
/// by a Gaussian calibration: the entrywise Gaussian integral over all of
/// M_q(C) equals π^(q²) and, in the same coordinates, the calibration moment
/// N_q; the ratio eliminates the constant. All 1D moments are computed by
/// tanh-sinh quadrature, so no closed forms enter.
pub fn kappa(p: f64, q: usize) -> Result<f64, MatError> {
    if p <= 2.0 * q as f64 - 1.0 {
        return Err(MatError::InvalidParam(format!(
            "kappa requires p > 2q-1 (p = {p}, q = {q})"
        )));
    }
    if q == 1 {
        // 1 - r² = (1-r)(1+r): keep the endpoint distance exact
        let val = integrate_ts_unit(8, |r, omr| r * (omr * (1.0 + r)).powf(p - 2.0));
        return Ok(2.0 * std::f64::consts::PI * val);
    }
    let b = p - 2.0 * q as f64;
    let terms = vandermonde_sq_expansion(q);
    let max_deg = 2 * (q - 1);
    let mx: Vec<f64> = (0..=max_deg)
        .map(|m| integrate_ts_unit(8, |x, omx| x.powi(m as i32) * omx.powf(b)))
        .collect();
    let mg: Vec<f64> = (0..=max_deg)
        .map(|m| integrate_ts(8, 0.0, 1.0, |u| (-u.ln()).powi(m as i32)))
        .collect();
    let mut j_int = 0.0;
    let mut n_int = 0.0;
    for (expo, coeff) in &terms {
        j_int += coeff * expo.iter().map(|&e| mx[e as usize]).product::<f64>();
        n_int += coeff * expo.iter().map(|&e| mg[e as usize]).product::<f64>();
    }
    Ok(std::f64::consts::PI.powi((q * q) as i32) * j_int / n_int)
}

/// Expand Π_{i<j} (x_i - x_j)² into monomials: exponent vector -> coefficient.
fn vandermonde_sq_expansion(q: usize) -> BTreeMap<Vec<u32>, f64> {
    let mut poly: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    poly.insert(vec![0; q], 1.0);
    for i in 0..q {
        for j in i + 1..q {
            // factor (x_i - x_j)^2 = x_i^2 - 2 x_i x_j + x_j^2
            let mut next: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
            for (expo, coeff) in &poly {
                for (di, dj, c) in [(2u32, 0u32, 1.0), (1, 1, -2.0), (0, 2, 1.0)] {
                    let mut e = expo.clone();
                    e[i] += di;
                    e[j] += dj;
                    *next.entry(e).or_insert(0.0) += coeff * c;
                }
            }
            poly = next;
        }
    }
    poly
}
