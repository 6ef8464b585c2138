//! The cone `X_q`, its characters, the convolution `*_p` as a sampleable
//! probability measure, the Haar measure `ω_p`, and the quotient convolution
//! on the alcove.
//!
//! A point of the cone is written `[r, z] = [cos t, z]` with `t` in the
//! alcove and `z` on the torus; the phase is only meaningful while
//! `t_1 < π/2` (equivalently `r_1 > 0`), which the constructor canonicalizes.
//!
//! The convolution of two point masses is the pushforward of
//! `(1/κ_p) det(I - w*w)^(p-2q) dv dw` under
//! `(v, w) ↦ [σ_sing(d), z z' arg det d]` with
//! `d = -sin t · w · sin t' + cos t · v · cos t'`, sampled by Monte Carlo for
//! any rank and by deterministic (r, φ)-quadrature for q = 1.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hopoly::{self, DominantWeight, Multiplicity, PolyTable};
use crate::matcore::{arg_det, sample_ball, sample_haar_unitary, singular_values, CMat};
use crate::mc::{estimate_ratio, Estimate, McConfig};
use crate::quad::{tanh_sinh_on, trapezoid_circle};

/// Identification threshold for the degenerate axis t_1 = π/2: below
/// quadrature resolution, above floating noise.
pub const EPS_AXIS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperError {
    #[error("point outside the cone domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("phase power of non-integer order is ill-defined at t_1 = π/2")]
    Branch,
    #[error("table mismatch: table built for (p = {table_p}, |l| = {table_l}), requested (p = {p}, |l| = {l})")]
    MismatchedTable {
        table_p: f64,
        table_l: f64,
        p: f64,
        l: f64,
    },
    #[error(transparent)]
    Hopoly(#[from] hopoly::HopolyError),
}

// ── cone points ─────────────────────────────────────────────────────

/// Canonicalized point `[cos t, z]` of the cone X_q.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePoint {
    t: Vec<f64>,
    z: Complex64,
}

impl ConePoint {
    /// Canonicalize `(t, z)`: t must lie within 1e-9 of the alcove (then it
    /// is clamped; out-of-order input is an error, not silently sorted),
    /// z is normalized to the torus, and the phase is forced to 1 on the
    /// degenerate axis t_1 >= π/2 - ε.
    pub fn new(t: &[f64], z: Complex64) -> Result<ConePoint, HyperError> {
        hopoly::check_alcove(t, 1e-9).map_err(|e| HyperError::Domain(e.to_string()))?;
        if z.norm() == 0.0 {
            return Err(HyperError::Domain("phase z must be nonzero".into()));
        }
        let top = std::f64::consts::FRAC_PI_2;
        let mut tc = t.to_vec();
        for x in tc.iter_mut() {
            *x = x.clamp(0.0, top);
        }
        for i in 1..tc.len() {
            if tc[i] > tc[i - 1] {
                tc[i] = tc[i - 1];
            }
        }
        let z = if tc[0] >= top - EPS_AXIS {
            Complex64::new(1.0, 0.0)
        } else {
            z / z.norm()
        };
        Ok(ConePoint { t: tc, z })
    }

    /// The identity element e = [(1, ..., 1), 1].
    pub fn identity(q: usize) -> ConePoint {
        ConePoint {
            t: vec![0.0; q],
            z: Complex64::new(1.0, 0.0),
        }
    }

    pub fn q(&self) -> usize {
        self.t.len()
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// The involution [r, z] -> [r, z̄].
    pub fn involution(&self) -> ConePoint {
        ConePoint::new(&self.t, self.z.conj()).expect("involution preserves the domain")
    }

    pub fn is_axis_degenerate(&self) -> bool {
        self.t[0] >= std::f64::consts::FRAC_PI_2 - EPS_AXIS
    }

    /// Radii r_j = cos t_j, nondecreasing, as in the cone coordinates
    /// (z r_1, r_2, ..., r_q).
    pub fn radii(&self) -> Vec<f64> {
        self.t.iter().map(|&tj| tj.cos()).collect()
    }

    /// Real embedding (Re z r_1, Im z r_1, r_2, ..., r_q) used for
    /// point-mass variance diagnostics.
    pub fn embedding(&self) -> Vec<f64> {
        let r = self.radii();
        let mut out = vec![self.z.re * r[0], self.z.im * r[0]];
        out.extend_from_slice(&r[1..]);
        out
    }
}

/// The cone_point operation of the interface: see [`ConePoint::new`].
pub fn cone_point(t: &[f64], z: Complex64) -> Result<ConePoint, HyperError> {
    ConePoint::new(t, z)
}

// ── characters ──────────────────────────────────────────────────────

/// Character value
/// `φ^p_{λ,l}([cos t, z]) = z^l · Π_j cos^|l| t_j · R_λ(k(p,q,l); t)`.
///
/// Integer l is defined on all of X_q; for non-integer l the phase power is
/// taken on the principal branch and the degenerate axis is rejected.
pub fn eval_character(
    table: &PolyTable,
    lambda: &DominantWeight,
    l: f64,
    p: f64,
    x: &ConePoint,
) -> Result<Complex64, HyperError> {
    if (table.k.p - p).abs() > 1e-12 || (table.k.l - l.abs()).abs() > 1e-12 {
        return Err(HyperError::MismatchedTable {
            table_p: table.k.p,
            table_l: table.k.l,
            p,
            l: l.abs(),
        });
    }
    let integer_l = l.fract() == 0.0;
    if !integer_l && x.is_axis_degenerate() {
        return Err(HyperError::Branch);
    }
    let labs = l.abs();
    let phase = if integer_l {
        x.z.powi(l as i32)
    } else {
        // |z| = 1: principal branch is exp(i l Arg z)
        Complex64::from_polar(1.0, l * x.z.arg())
    };
    let mut cos_factor = 1.0;
    if labs > 0.0 {
        for &tj in x.t() {
            cos_factor *= tj.cos().powf(labs);
        }
    }
    let radial = table.eval_r(lambda, x.t())?;
    Ok(phase * cos_factor * radial)
}

// ── the convolution measure ─────────────────────────────────────────

/// Evaluation engine for convolution measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvEngine {
    MonteCarlo,
    /// Deterministic tensor quadrature over (r, φ) on the disk; q = 1 only.
    /// Absolute error is far below 1e-8 for the characters checked here.
    Quadrature { level: u32, n_phase: usize },
}

impl ConvEngine {
    pub fn default_quadrature() -> ConvEngine {
        ConvEngine::Quadrature {
            level: 6,
            n_phase: 256,
        }
    }
}

/// δ_x *_p δ_y as a sampleable/integrable probability measure on X_q.
#[derive(Debug, Clone)]
pub struct ConvMeasure {
    pub x: ConePoint,
    pub y: ConePoint,
    pub p: f64,
    pub cfg: McConfig,
    pub engine: ConvEngine,
}

/// Build the convolution measure; requires p > 2q - 1 and equal ranks.
pub fn convolve(
    x: &ConePoint,
    y: &ConePoint,
    p: f64,
    cfg: McConfig,
    engine: ConvEngine,
) -> Result<ConvMeasure, HyperError> {
    if x.q() != y.q() {
        return Err(HyperError::InvalidParam(format!(
            "rank mismatch: {} vs {}",
            x.q(),
            y.q()
        )));
    }
    let q = x.q();
    if !(p > 2.0 * q as f64 - 1.0) {
        return Err(HyperError::InvalidParam(format!(
            "p > 2q-1 required, got p = {p}, q = {q}"
        )));
    }
    if matches!(engine, ConvEngine::Quadrature { .. }) && q != 1 {
        return Err(HyperError::InvalidParam(
            "quadrature engine is rank-one only".into(),
        ));
    }
    Ok(ConvMeasure {
        x: x.clone(),
        y: y.clone(),
        p,
        cfg,
        engine,
    })
}

/// One draw of the block `d(t, t'; v, w) = -sin t · w · sin t' + cos t · v · cos t'`
/// (v Haar on SU(q), w from the ball scheme) together with the ball weight.
pub fn sample_block(
    tx: &[f64],
    ty: &[f64],
    p: f64,
    scheme: crate::matcore::BallScheme,
    rng: &mut ChaCha8Rng,
) -> (CMat, f64) {
    let q = tx.len();
    let v = sample_haar_unitary(q, true, rng);
    let ball = sample_ball(q, p, scheme, rng);
    let sin_x: Vec<f64> = tx.iter().map(|&t| t.sin()).collect();
    let cos_x: Vec<f64> = tx.iter().map(|&t| t.cos()).collect();
    let sin_y: Vec<f64> = ty.iter().map(|&t| t.sin()).collect();
    let cos_y: Vec<f64> = ty.iter().map(|&t| t.cos()).collect();
    let d = CMat::from_fn(q, |i, j| {
        -sin_x[i] * ball.w[(i, j)] * sin_y[j] + cos_x[i] * v[(i, j)] * cos_y[j]
    });
    (d, ball.weight)
}

/// One draw of the convolution target: the cone point and its importance
/// weight under the configured ball scheme.
fn draw_target(
    x: &ConePoint,
    y: &ConePoint,
    p: f64,
    scheme: crate::matcore::BallScheme,
    rng: &mut ChaCha8Rng,
) -> (ConePoint, f64) {
    let (d, weight) = sample_block(x.t(), y.t(), p, scheme, rng);
    (target_point(&d, x.z() * y.z()), weight)
}

/// Deterministic rank-one block grid: pairs (d, weight) over the tensor
/// (r, φ)-quadrature of the disk, weight already containing the ball
/// density. Self-normalize by the weight sum.
pub fn disk_blocks(
    theta_x: f64,
    theta_y: f64,
    p: f64,
    level: u32,
    n_phase: usize,
) -> Vec<(Complex64, f64)> {
    let (rs, rw) = tanh_sinh_on(level, 0.0, 1.0);
    let (phis, pw) = trapezoid_circle(n_phase);
    let (sx, cx) = theta_x.sin_cos();
    let (sy, cy) = theta_y.sin_cos();
    let mut out = Vec::with_capacity(rs.len() * n_phase);
    for (ri, wi) in rs.iter().zip(&rw) {
        let density = wi * ri * (1.0 - ri * ri).powf(p - 2.0);
        if !density.is_finite() || density == 0.0 {
            continue;
        }
        for &phi in &phis {
            let w = Complex64::from_polar(*ri, phi);
            let d = -sx * w * sy + Complex64::new(cx * cy, 0.0);
            out.push((d, density * pw));
        }
    }
    out
}

/// Map the block d to the cone: [σ_sing(d), z_xy · arg det d]. Singular
/// values may exceed 1 by eigensolver roundoff only; clip, then arccos.
fn target_point(d: &CMat, z_xy: Complex64) -> ConePoint {
    let q = d.dim();
    let sigma = singular_values(d);
    let mut t = vec![0.0; q];
    for j in 0..q {
        t[j] = sigma[q - 1 - j].clamp(0.0, 1.0).acos();
    }
    let z = z_xy * arg_det(d);
    ConePoint::new(&t, z).expect("convolution target lies in the cone")
}

impl ConvMeasure {
    /// Self-normalized estimate of ∫ f d(δ_x *_p δ_y) with standard error
    /// (jackknife for Monte Carlo, 0 for the deterministic engine).
    pub fn integrate<F>(&self, f: F) -> Estimate
    where
        F: Fn(&ConePoint) -> Complex64 + Sync,
    {
        match self.engine {
            ConvEngine::MonteCarlo => {
                let scheme = self.cfg.scheme;
                let (x, y, p) = (self.x.clone(), self.y.clone(), self.p);
                estimate_ratio(
                    self.cfg.n_samples,
                    self.cfg.seed,
                    self.cfg.parallel,
                    move |rng| {
                        let (target, w) = draw_target(&x, &y, p, scheme, rng);
                        (f(&target), w)
                    },
                )
            }
            ConvEngine::Quadrature { level, n_phase } => self.integrate_quadrature(level, n_phase, f),
        }
    }

    fn integrate_quadrature<F>(&self, level: u32, n_phase: usize, f: F) -> Estimate
    where
        F: Fn(&ConePoint) -> Complex64 + Sync,
    {
        let blocks = disk_blocks(self.x.t()[0], self.y.t()[0], self.p, level, n_phase);
        let z_xy = self.x.z() * self.y.z();
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for (d, weight) in &blocks {
            let target = scalar_target(*d, z_xy);
            num += weight * f(&target);
            den += weight;
        }
        Estimate {
            value_re: (num / den).re,
            value_im: (num / den).im,
            stderr: 0.0,
            n_samples: blocks.len() as u64,
            seed: self.cfg.seed,
        }
    }

    /// Draw n targets with weights; diagnostics helper (subgroup variance,
    /// support histograms). Deterministic in the configured seed.
    pub fn collect_targets(&self, n: u64) -> Vec<(ConePoint, f64)> {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(u64::MAX);
        (0..n)
            .map(|_| draw_target(&self.x, &self.y, self.p, self.cfg.scheme, &mut rng))
            .collect()
    }
}

fn scalar_target(d: Complex64, z_xy: Complex64) -> ConePoint {
    let r = d.norm();
    let phase = if r <= crate::matcore::EPS_SING {
        Complex64::new(1.0, 0.0)
    } else {
        d / r
    };
    let t = r.clamp(0.0, 1.0).acos();
    ConePoint::new(&[t], z_xy * phase).expect("disk target lies in the cone")
}

// ── Haar measure ────────────────────────────────────────────────────

/// Engine for integrals against the (unnormalized) Haar measure ω_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HaarEngine {
    /// Outer Gauss-Legendre on the alcove (q <= 2).
    Quadrature { order: usize },
    /// Monte Carlo over the ordered radii simplex.
    MonteCarlo,
}

/// Number of trapezoid points for the phase average; exact for phase
/// polynomials of degree < 128.
pub const HAAR_PHASE_POINTS: usize = 128;

/// ∫_{X_q} f dω_p, unnormalized (the display fixes no total mass). The
/// phase integral is an equispaced trapezoid average, exact for the integer
/// frequencies that arise; the radial part is Gauss-Legendre (against the
/// alcove density) or Monte Carlo over the ordered simplex.
pub fn haar_integrate<F>(
    p: f64,
    q: usize,
    f: F,
    engine: HaarEngine,
    cfg: McConfig,
) -> Result<Estimate, HyperError>
where
    F: Fn(&ConePoint) -> Complex64 + Sync,
{
    if !(p > 2.0 * q as f64 - 1.0) {
        return Err(HyperError::InvalidParam(format!(
            "p > 2q-1 required, got p = {p}, q = {q}"
        )));
    }
    let (phases, _) = trapezoid_circle(HAAR_PHASE_POINTS);
    let phase_avg = |t: &[f64]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &ph in &phases {
            let pt = ConePoint::new(t, Complex64::from_polar(1.0, ph))
                .expect("phase sweep stays in the cone");
            acc += f(&pt);
        }
        acc / phases.len() as f64
    };
    match engine {
        HaarEngine::Quadrature { order } => {
            if q > 2 {
                return Err(HyperError::InvalidParam(
                    "Haar quadrature supports q <= 2; use Monte Carlo".into(),
                ));
            }
            let k0 = Multiplicity::new(p, q, 0.0)?;
            let grid = hopoly::alcove_quadrature(q, order)?;
            let fact: f64 = (1..=q).map(|i| i as f64).product();
            // cos 2t_i - cos 2t_j = 2(r_i² - r_j²): rescale the alcove weight
            // so both engines integrate the same r-form density of ω_p
            let pair_scale = 0.25f64.powi((q * (q - 1) / 2) as i32);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..grid.len() {
                let node = grid.node(i);
                let dens = hopoly::weight_density_unchecked(node, &k0);
                if dens == 0.0 {
                    continue;
                }
                // symmetric continuation: evaluate at the sorted point
                let mut sorted = node.to_vec();
                sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
                acc += grid.weights[i] * dens * phase_avg(&sorted);
            }
            let v = acc * pair_scale / fact;
            Ok(Estimate {
                value_re: v.re,
                value_im: v.im,
                stderr: 0.0,
                n_samples: (grid.len() * HAAR_PHASE_POINTS) as u64,
                seed: cfg.seed,
            })
        }
        HaarEngine::MonteCarlo => {
            let fact: f64 = (1..=q).map(|i| i as f64).product();
            let est = estimate_ratio(cfg.n_samples, cfg.seed, cfg.parallel, |rng| {
                let mut r: Vec<f64> = (0..q).map(|_| rng.random::<f64>()).collect();
                r.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut dens = 1.0;
                for (i, &ri) in r.iter().enumerate() {
                    dens *= ri * (1.0 - ri * ri).powf(p - q as f64);
                    for &rj in &r[i + 1..] {
                        let d = ri * ri - rj * rj;
                        dens *= d * d;
                    }
                }
                let t: Vec<f64> = r.iter().map(|&ri| ri.clamp(0.0, 1.0).acos()).collect();
                (dens * phase_avg(&t), 1.0)
            });
            Ok(est.scaled(1.0 / fact))
        }
    }
}

// ── quotient convolution on the alcove ──────────────────────────────

/// The quotient convolution on A_q = X_q / T applied to f:
/// `(1/κ_p) ∫∫ f(arccos σ_sing(d(t, t'; v, w))) det(I-w*w)^(p-2q) dv dw`.
pub fn quotient_convolve<F>(
    t: &[f64],
    t2: &[f64],
    p: f64,
    f: F,
    cfg: McConfig,
    engine: ConvEngine,
) -> Result<Estimate, HyperError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let x = ConePoint::new(t, Complex64::new(1.0, 0.0))?;
    let y = ConePoint::new(t2, Complex64::new(1.0, 0.0))?;
    let m = convolve(&x, &y, p, cfg, engine)?;
    Ok(m.integrate(|pt| Complex64::new(f(pt.t()), 0.0)))
}
