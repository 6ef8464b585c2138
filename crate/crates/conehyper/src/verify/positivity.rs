//! Exploratory scan of the signed kernel behind the real-exponent product
//! formula. The positivity of that formula for l ≠ 0 is an open problem, so
//! this module only gathers evidence: it bins the signed contributions
//! `Re[(Δ(d)/(Δcos t Δcos t'))^l] · weight` over alcove cells and reports
//! the minimum cell value and the negative mass fraction, with a crude noise
//! floor for context. No pass/fail claim is made.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{principal_pow, VerifyError};
use crate::hypergroup::sample_block;
use crate::matcore::det;
use crate::mc::McConfig;

#[derive(Debug, Clone, serde::Serialize)]
pub struct PositivityReport {
    pub p: f64,
    pub q: usize,
    pub l: f64,
    pub t: Vec<f64>,
    pub t2: Vec<f64>,
    pub resolution: usize,
    /// smallest cell value of the signed density estimate
    pub min_cell: f64,
    /// Σ max(-cell, 0) / Σ |cell|
    pub neg_mass_fraction: f64,
    /// expected spurious negative mass from Monte Carlo noise alone:
    /// Σ_cells E|N(0, σ_cell)| with σ from within-cell second moments
    pub noise_floor: f64,
    pub histogram: Vec<f64>,
    pub n_samples: u64,
    pub seed: u64,
}

/// Accumulate the signed kernel over a resolution^q grid of alcove cells.
pub fn positivity_scan(
    p: f64,
    q: usize,
    l: f64,
    t: &[f64],
    t2: &[f64],
    resolution: usize,
    mc: McConfig,
) -> Result<PositivityReport, VerifyError> {
    if l < 0.0 {
        return Err(VerifyError::InvalidParam(format!("need l >= 0, got {l}")));
    }
    if resolution == 0 || resolution > 512 {
        return Err(VerifyError::InvalidParam(format!(
            "resolution must lie in 1..=512, got {resolution}"
        )));
    }
    let top = std::f64::consts::FRAC_PI_2;
    if t[0] >= top - 1e-9 || t2[0] >= top - 1e-9 {
        return Err(VerifyError::DegenerateArgument(
            "scan needs non-degenerate t, t'".into(),
        ));
    }
    let denom: f64 = t.iter().map(|v| v.cos()).product::<f64>()
        * t2.iter().map(|v| v.cos()).product::<f64>();
    let cells = resolution.pow(q as u32);
    let mut sums = vec![0.0f64; cells];
    let mut sums_sq = vec![0.0f64; cells];
    let mut total_w = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
    rng.set_stream(1);
    for _ in 0..mc.n_samples {
        let (d, w) = sample_block(t, t2, p, mc.scheme, &mut rng);
        let xi = det(&d) / denom;
        let contrib = principal_pow(xi, l).re * w;
        let tau = super::products::block_alcove_point(&d);
        let mut flat = 0usize;
        for &tj in &tau {
            let idx = ((tj / top) * resolution as f64).floor().min(resolution as f64 - 1.0);
            flat = flat * resolution + idx as usize;
        }
        sums[flat] += contrib;
        sums_sq[flat] += contrib * contrib;
        total_w += w;
    }
    let values: Vec<f64> = sums.iter().map(|s| s / total_w).collect();
    let min_cell = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let neg: f64 = values.iter().map(|v| (-v).max(0.0)).sum();
    let tot: f64 = values.iter().map(|v| v.abs()).sum();
    // E|N(0,σ)| = σ·√(2/π) ≈ 0.7979σ
    let noise_floor: f64 = sums_sq
        .iter()
        .map(|ss| 0.7979 * ss.sqrt() / total_w)
        .sum();
    Ok(PositivityReport {
        p,
        q,
        l,
        t: t.to_vec(),
        t2: t2.to_vec(),
        resolution,
        min_cell,
        neg_mass_fraction: neg / tot.max(1e-300),
        noise_floor,
        histogram: values,
        n_samples: mc.n_samples,
        seed: mc.seed,
    })
}

/// Convenience: does the scan see negative mass beyond its own noise floor?
pub fn negative_beyond_noise(report: &PositivityReport) -> bool {
    let neg: f64 = report.histogram.iter().map(|v| (-v).max(0.0)).sum();
    neg > report.noise_floor
}
