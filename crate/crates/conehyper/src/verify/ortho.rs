//! Orthogonality of the characters {φ_{λ,l}} in L²(X_q, ω_p).
//!
//! The phase integral separates: for l ≠ m the equispaced trapezoid average
//! of z^(l-m) vanishes exactly (integer frequency), so those Gram entries
//! are reported through the phase factor alone, bounded by Cauchy-Schwarz.
//! For l = m the phase drops out and the entry reduces to the radial
//! integral of `Π cos^(2|l|) t_j · R_λ R_μ` against the Haar density, i.e.
//! to orthogonality under the table weight δ_k — evaluated by alcove
//! quadrature (q <= 2) or Monte Carlo over the radii simplex.

use num_complex::Complex64;
use rand::Rng;

use super::{params, CheckReport, VerifyError};
use crate::hopoly::{
    alcove_quadrature, build_basis, enumerate_weights, weight_density_unchecked, Multiplicity,
    PolyTable,
};
use crate::hypergroup::HAAR_PHASE_POINTS;
use crate::mc::{estimate_ratio, McConfig};
use crate::quad::trapezoid_circle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrthoEngine {
    Quadrature { order: usize },
    MonteCarlo,
}

/// Gram matrix checks for {φ_{λ,l} : λ_1 <= max_deg, |l| <= l_max} under
/// ω_p. Off-diagonals relative to diagonals are judged at 1e-6 for
/// quadrature and 4·SE for Monte Carlo.
pub fn check_orthogonality(
    p: f64,
    q: usize,
    l_max: i64,
    max_deg: u32,
    engine: OrthoEngine,
    mc: McConfig,
) -> Result<Vec<CheckReport>, VerifyError> {
    if matches!(engine, OrthoEngine::Quadrature { .. }) && q > 2 {
        return Err(VerifyError::InvalidParam(
            "orthogonality quadrature supports q <= 2".into(),
        ));
    }
    let lambdas = enumerate_weights(q, max_deg);
    let table_order = match engine {
        OrthoEngine::Quadrature { order } => order,
        OrthoEngine::MonteCarlo => 48,
    };
    let mut tables: Vec<PolyTable> = Vec::new();
    for al in 0..=l_max.unsigned_abs() {
        let k = Multiplicity::new(p, q, al as f64)?;
        tables.push(build_basis(&k, max_deg, table_order)?);
    }
    let mut reports = Vec::new();

    // radial Gram blocks per |l|: same-l entries including diagonals
    let mut job = 0u64;
    for al in 0..=l_max.unsigned_abs() {
        let table = &tables[al as usize];
        let gram = radial_gram(p, q, al as f64, table, &engine, &mc, &mut job)?;
        let n = lambdas.len();
        for i in 0..n {
            let (dii, _) = gram[i * n + i];
            reports.push(CheckReport::new(
                "orthogonality_diagonal",
                params(&[
                    ("lambda", lambdas[i].to_string()),
                    ("l", al.to_string()),
                    ("p", p.to_string()),
                    ("q", q.to_string()),
                ]),
                Complex64::new(dii, 0.0),
                Complex64::new(dii.max(0.0), 0.0),
                f64::MIN_POSITIVE,
                mc.n_samples,
                mc.seed,
            ));
        }
        for i in 0..n {
            for j in 0..i {
                let (gij, se) = gram[i * n + j];
                let (dii, _) = gram[i * n + i];
                let (djj, _) = gram[j * n + j];
                let scale = (dii * djj).sqrt();
                let tolerance = match engine {
                    OrthoEngine::Quadrature { .. } => 1e-6,
                    OrthoEngine::MonteCarlo => 4.0 * se / scale,
                };
                reports.push(CheckReport::new(
                    "orthogonality_offdiag",
                    params(&[
                        ("lambda", lambdas[i].to_string()),
                        ("mu", lambdas[j].to_string()),
                        ("l", al.to_string()),
                        ("p", p.to_string()),
                        ("q", q.to_string()),
                    ]),
                    Complex64::new(gij / scale, 0.0),
                    Complex64::new(0.0, 0.0),
                    tolerance,
                    mc.n_samples,
                    mc.seed,
                ));
            }
        }
    }

    // l ≠ m: the trapezoid phase average of z^(l-m) is the whole story; the
    // radial factor is bounded by 1 after normalization (Cauchy-Schwarz)
    let (phases, _) = trapezoid_circle(HAAR_PHASE_POINTS);
    for l in -l_max..=l_max {
        for m in -l_max..l {
            let freq = (l - m) as f64;
            let avg: Complex64 = phases
                .iter()
                .map(|&th| Complex64::from_polar(1.0, freq * th))
                .sum::<Complex64>()
                / phases.len() as f64;
            reports.push(CheckReport::new(
                "orthogonality_phase",
                params(&[
                    ("l", l.to_string()),
                    ("m", m.to_string()),
                    ("p", p.to_string()),
                    ("q", q.to_string()),
                ]),
                avg,
                Complex64::new(0.0, 0.0),
                1e-6,
                HAAR_PHASE_POINTS as u64,
                mc.seed,
            ));
        }
    }
    Ok(reports)
}

/// Same-l radial Gram block: entries ⟨R_λ R_μ · Π r^(2|l|)⟩ against the Haar
/// radial density, with standard errors in Monte Carlo mode.
fn radial_gram(
    p: f64,
    q: usize,
    al: f64,
    table: &PolyTable,
    engine: &OrthoEngine,
    mc: &McConfig,
    job: &mut u64,
) -> Result<Vec<(f64, f64)>, VerifyError> {
    let n = table.lambdas().len();
    let mut out = vec![(0.0, 0.0); n * n];
    match engine {
        OrthoEngine::Quadrature { order } => {
            let grid = alcove_quadrature(q, *order)?;
            let k_l = Multiplicity::new(p, q, al)?;
            for i in 0..n {
                for j in 0..=i {
                    let val = grid.integrate_symmetric(|t| {
                        table.eval_by_index(i, t)
                            * table.eval_by_index(j, t)
                            * weight_density_unchecked(t, &k_l)
                    });
                    out[i * n + j] = (val, 0.0);
                    out[j * n + i] = (val, 0.0);
                }
            }
        }
        OrthoEngine::MonteCarlo => {
            for i in 0..n {
                for j in 0..=i {
                    let seed = crate::mc::split_seed(mc.seed, 0x0ffe_0000 + *job);
                    *job += 1;
                    let est = estimate_ratio(mc.n_samples, seed, mc.parallel, move |rng| {
                        let mut r: Vec<f64> = (0..q).map(|_| rng.random::<f64>()).collect();
                        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
                        let mut dens = 1.0;
                        for (a, &ra) in r.iter().enumerate() {
                            dens *= ra * (1.0 - ra * ra).powf(p - q as f64)
                                * ra.powf(2.0 * al);
                            for &rb in &r[a + 1..] {
                                let d = ra * ra - rb * rb;
                                dens *= d * d;
                            }
                        }
                        let t: Vec<f64> =
                            r.iter().map(|&ri| ri.clamp(0.0, 1.0).acos()).collect();
                        let v = dens * table.eval_by_index(i, &t) * table.eval_by_index(j, &t);
                        (Complex64::new(v, 0.0), 1.0)
                    });
                    out[i * n + j] = (est.value_re, est.stderr);
                    out[j * n + i] = (est.value_re, est.stderr);
                }
            }
        }
    }
    Ok(out)
}
