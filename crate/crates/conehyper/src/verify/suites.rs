//! Checker families over documented default parameter grids, used by the
//! CLI `verify` subcommand. Each job draws its own seed from the master seed
//! (splitmix step on the job index) and reports are merged in job order, so
//! a run is reproducible bit-identically.
//!
//! Default grids (chosen to exercise every identity at desk scale):
//!
//! * `cone`, q = 1: p ∈ {2, 3} × l ∈ {0, 1, 2} × λ ∈ {(0),(2),(4),(8)},
//!   five seeded point pairs each, deterministic disk quadrature.
//! * `cone`, q = 2: p ∈ {5, 3.5} × l ∈ {0, 1} × λ ∈ {(0,0),(2,0),(2,2)} at
//!   one fixed point pair, Monte Carlo with the configured sample count.
//! * `jacobi`, q = 1: l ∈ {0.5, 1.5}, p = 2.5, λ ∈ {(2),(4)}, Monte Carlo.
//! * `rank1`: twenty tuples spanning α ∈ {1.5, 2, 3}, β ∈ {0, 0.5, 1, 2}
//!   (with β < α), angles in {π/6, π/4, π/3} and t ∈ {0.2, 0.5, 0.8}.
//! * `disk`: degrees n ≤ 3, l ∈ {0, 1, 2}, p ∈ {2, 3, 4} at generic points.
//! * `koornwinder`: (α, β) ∈ {(3,1), (2,0.5), (1.5,0)}, n ≤ 3.
//! * `kernel`: q = 1 at (p, l) = (2.5, 1.5) and (3, 1); q = 2 at (5, 1).
//! * `ortho`: Gram of {φ_{λ,l} : λ_1 ≤ 4, |l| ≤ 2} (quadrature for q = 1,
//!   Monte Carlo for q = 2 at p = 5).
//! * `axioms`: identity, involution, commutativity, associativity, torus
//!   subgroup.

use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::axioms::{
    check_associativity, check_commutativity, check_identity_element, check_involution,
    check_subgroup,
};
use super::ortho::{check_orthogonality, OrthoEngine};
use super::products::{check_kernel_form, check_product_cone, check_product_jacobi};
use super::rank1::{check_disk_product, check_koornwinder, check_rank1_identity};
use super::{CheckReport, VerifyError};
use crate::hopoly::{build_basis, DominantWeight, Multiplicity, PolyTable};
use crate::hypergroup::{ConePoint, ConvEngine};
use crate::matcore::BallScheme;
use crate::mc::{split_seed, McConfig};

/// Configuration shared by the suite runners; grids are fixed per rank, the
/// config chooses rank, sampling effort, seed and scheme.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SuiteConfig {
    pub q: usize,
    pub p: f64,
    pub l: f64,
    pub max_deg: u32,
    pub quad_order: usize,
    pub n_samples: u64,
    pub seed: u64,
    pub scheme: BallScheme,
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            q: 1,
            p: 3.0,
            l: 0.0,
            max_deg: 8,
            quad_order: 64,
            n_samples: 2_000_000,
            seed: 0x5EED_CAFE,
            scheme: BallScheme::SvdParam,
            parallel: true,
        }
    }
}

impl SuiteConfig {
    fn mc(&self, job: u64) -> McConfig {
        McConfig {
            n_samples: self.n_samples,
            seed: split_seed(self.seed, job),
            scheme: self.scheme,
            parallel: self.parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Cone,
    Jacobi,
    Rank1,
    Disk,
    Koornwinder,
    Kernel,
    Ortho,
    Axioms,
    All,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cone" => Ok(Suite::Cone),
            "jacobi" => Ok(Suite::Jacobi),
            "rank1" => Ok(Suite::Rank1),
            "disk" => Ok(Suite::Disk),
            "koornwinder" => Ok(Suite::Koornwinder),
            "kernel" => Ok(Suite::Kernel),
            "ortho" => Ok(Suite::Ortho),
            "axioms" => Ok(Suite::Axioms),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite '{other}'; expected cone|jacobi|rank1|disk|koornwinder|kernel|ortho|axioms|all"
            )),
        }
    }
}

/// Run a checker family over its default grid.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    match suite {
        Suite::Cone => suite_cone(cfg),
        Suite::Jacobi => suite_jacobi(cfg),
        Suite::Rank1 => suite_rank1(cfg),
        Suite::Disk => suite_disk(cfg),
        Suite::Koornwinder => suite_koornwinder(cfg),
        Suite::Kernel => suite_kernel(cfg),
        Suite::Ortho => suite_ortho(cfg),
        Suite::Axioms => suite_axioms(cfg),
        Suite::All => {
            let mut out = Vec::new();
            for s in [
                Suite::Cone,
                Suite::Jacobi,
                Suite::Rank1,
                Suite::Disk,
                Suite::Koornwinder,
                Suite::Kernel,
                Suite::Ortho,
                Suite::Axioms,
            ] {
                out.extend(run_suite(s, cfg)?);
            }
            Ok(out)
        }
    }
}

fn table_for(p: f64, q: usize, l: f64, max_deg: u32, order: usize) -> Result<PolyTable, VerifyError> {
    let k = Multiplicity::new(p, q, l)?;
    Ok(build_basis(&k, max_deg, order)?)
}

fn dw(v: &[u32]) -> DominantWeight {
    DominantWeight::new(v.to_vec()).expect("static weights are valid")
}

/// Five seeded rank-one point pairs in the open alcove with generic phases.
fn rank_one_pairs(seed: u64) -> Vec<(ConePoint, ConePoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, 0xA11CE));
    (0..5)
        .map(|_| {
            let t1 = 0.15 + 1.2 * rng.random::<f64>();
            let t2 = 0.15 + 1.2 * rng.random::<f64>();
            let ph1 = std::f64::consts::PI * (2.0 * rng.random::<f64>() - 1.0);
            let ph2 = std::f64::consts::PI * (2.0 * rng.random::<f64>() - 1.0);
            (
                ConePoint::new(&[t1], Complex64::from_polar(1.0, ph1)).unwrap(),
                ConePoint::new(&[t2], Complex64::from_polar(1.0, ph2)).unwrap(),
            )
        })
        .collect()
}

fn suite_cone(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    let mut reports = Vec::new();
    let mut job = 0u64;
    match cfg.q {
        1 => {
            let pairs = rank_one_pairs(cfg.seed);
            for &p in &[2.0, 3.0] {
                for l in 0..=2i64 {
                    let table = table_for(p, 1, l as f64, cfg.max_deg.max(8), cfg.quad_order)?;
                    for lam in [dw(&[0]), dw(&[2]), dw(&[4]), dw(&[8])] {
                        for (x, y) in &pairs {
                            reports.push(check_product_cone(
                                &table,
                                &lam,
                                l,
                                p,
                                x,
                                y,
                                cfg.mc(job),
                                ConvEngine::default_quadrature(),
                            )?);
                            job += 1;
                        }
                    }
                }
            }
        }
        2 => {
            let x = ConePoint::new(&[1.1, 0.5], Complex64::from_polar(1.0, 0.7)).unwrap();
            let y = ConePoint::new(&[0.9, 0.3], Complex64::from_polar(1.0, -1.1)).unwrap();
            for &p in &[5.0, 3.5] {
                for l in 0..=1i64 {
                    let table = table_for(p, 2, l as f64, 4, 48)?;
                    for lam in [dw(&[0, 0]), dw(&[2, 0]), dw(&[2, 2])] {
                        reports.push(check_product_cone(
                            &table,
                            &lam,
                            l,
                            p,
                            &x,
                            &y,
                            cfg.mc(job),
                            ConvEngine::MonteCarlo,
                        )?);
                        job += 1;
                    }
                }
            }
        }
        other => {
            return Err(VerifyError::InvalidParam(format!(
                "cone suite covers q ∈ {{1, 2}}, got {other}"
            )))
        }
    }
    Ok(reports)
}

fn suite_jacobi(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    let mut reports = Vec::new();
    let mut job = 0x100u64;
    match cfg.q {
        1 => {
            let p = 2.5;
            // l = 0 sanity row by deterministic quadrature
            let t0 = table_for(p, 1, 0.0, 4, cfg.quad_order)?;
            reports.push(check_product_jacobi(
                &t0,
                &dw(&[2]),
                0.0,
                p,
                &[1.0],
                &[0.55],
                cfg.mc(job),
                ConvEngine::default_quadrature(),
            )?);
            job += 1;
            for &l in &[0.5, 1.5] {
                let table = table_for(p, 1, l, 4, cfg.quad_order)?;
                for lam in [dw(&[2]), dw(&[4])] {
                    reports.push(check_product_jacobi(
                        &table,
                        &lam,
                        l,
                        p,
                        &[1.0],
                        &[0.55],
                        cfg.mc(job),
                        ConvEngine::MonteCarlo,
                    )?);
                    job += 1;
                }
            }
        }
        2 => {
            let p = cfg.p.max(3.5);
            for &l in &[0.5] {
                let table = table_for(p, 2, l, 4, 48)?;
                for lam in [dw(&[2, 0]), dw(&[2, 2])] {
                    reports.push(check_product_jacobi(
                        &table,
                        &lam,
                        l,
                        p,
                        &[1.1, 0.5],
                        &[0.9, 0.3],
                        cfg.mc(job),
                        ConvEngine::MonteCarlo,
                    )?);
                    job += 1;
                }
            }
        }
        other => {
            return Err(VerifyError::InvalidParam(format!(
                "jacobi suite covers q ∈ {{1, 2}}, got {other}"
            )))
        }
    }
    Ok(reports)
}

/// The documented twenty-tuple grid: valid (α, β) pairs in row order, the
/// angle/t triple cycling through three combinations.
pub fn rank1_default_grid() -> Vec<(f64, f64, f64, f64, f64)> {
    let pairs = [
        (1.5, 0.0),
        (1.5, 0.5),
        (1.5, 1.0),
        (2.0, 0.0),
        (2.0, 0.5),
        (2.0, 1.0),
        (3.0, 0.0),
        (3.0, 0.5),
        (3.0, 1.0),
        (3.0, 2.0),
    ];
    let triples = [
        (std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_4, 0.2),
        (std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_3, 0.5),
        (std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_3, 0.8),
    ];
    (0..20)
        .map(|i| {
            let (alpha, beta) = pairs[i % pairs.len()];
            let (th, th2, t) = triples[i % triples.len()];
            (alpha, beta, th, th2, t)
        })
        .collect()
}

fn suite_rank1(_cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    rank1_default_grid()
        .into_iter()
        .map(|(alpha, beta, th, th2, t)| {
            let a = th.sin() * th2.sin();
            let b = th.cos() * th2.cos();
            check_rank1_identity(alpha, beta, a, b, t)
        })
        .collect()
}

fn suite_disk(_cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    let x1 = Complex64::from_polar(0.8, 0.9);
    let x2 = Complex64::from_polar(0.55, -1.3);
    let mut reports = Vec::new();
    for (n, l, p) in [
        (0, 0, 2.0),
        (1, 1, 2.0),
        (2, 1, 4.0),
        (3, 2, 4.0),
        (2, 0, 3.0),
        (1, 2, 3.0),
    ] {
        reports.push(check_disk_product(n, l, p, x1, x2)?);
    }
    Ok(reports)
}

fn suite_koornwinder(_cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    let mut reports = Vec::new();
    for &(alpha, beta) in &[(3.0, 1.0), (2.0, 0.5), (1.5, 0.0)] {
        for n in 0..=3u32 {
            let (prod, rewrite) = check_koornwinder(
                n,
                alpha,
                beta,
                std::f64::consts::FRAC_PI_4,
                std::f64::consts::FRAC_PI_3,
            )?;
            reports.push(prod);
            reports.push(rewrite);
        }
    }
    Ok(reports)
}

fn suite_kernel(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    let mut reports = Vec::new();
    let n = cfg.n_samples.clamp(100_000, 500_000);
    match cfg.q {
        1 => {
            for (job, (p, l, lam)) in
                [(2.5, 1.5, dw(&[2])), (3.0, 1.0, dw(&[4]))].into_iter().enumerate()
            {
                let table = table_for(p, 1, l, cfg.max_deg.max(4), cfg.quad_order)?;
                let mut mc = cfg.mc(0x200 + job as u64);
                mc.n_samples = n;
                reports.push(check_kernel_form(&table, &lam, l, p, &[0.85], &[0.6], mc)?);
            }
        }
        2 => {
            let (p, l) = (5.0, 1.0);
            let table = table_for(p, 2, l, 4, 48)?;
            let mut mc = cfg.mc(0x210);
            mc.n_samples = n;
            reports.push(check_kernel_form(
                &table,
                &dw(&[2, 0]),
                l,
                p,
                &[1.0, 0.6],
                &[0.8, 0.45],
                mc,
            )?);
        }
        other => {
            return Err(VerifyError::InvalidParam(format!(
                "kernel suite covers q ∈ {{1, 2}}, got {other}"
            )))
        }
    }
    Ok(reports)
}

fn suite_ortho(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    match cfg.q {
        1 => check_orthogonality(
            cfg.p,
            1,
            2,
            4,
            OrthoEngine::Quadrature { order: cfg.quad_order },
            cfg.mc(0x300),
        ),
        2 => {
            let mut mc = cfg.mc(0x301);
            mc.n_samples = cfg.n_samples.clamp(50_000, 400_000);
            check_orthogonality(5.0, 2, 2, 4, OrthoEngine::MonteCarlo, mc)
        }
        other => Err(VerifyError::InvalidParam(format!(
            "ortho suite covers q ∈ {{1, 2}}, got {other}"
        ))),
    }
}

fn suite_axioms(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, VerifyError> {
    let mut reports = Vec::new();
    match cfg.q {
        1 => {
            let p = cfg.p;
            let l = 1i64;
            let table = table_for(p, 1, l as f64, 4, cfg.quad_order)?;
            let lam = dw(&[2]);
            let x = ConePoint::new(&[1.0], Complex64::from_polar(1.0, 0.9)).unwrap();
            let y = ConePoint::new(&[0.5], Complex64::from_polar(1.0, -1.7)).unwrap();
            let w = ConePoint::new(&[0.8], Complex64::from_polar(1.0, 2.4)).unwrap();
            let engine = ConvEngine::default_quadrature();
            reports.push(check_identity_element(&table, &lam, l, p, &x, cfg.mc(0x400), engine)?);
            reports.push(check_involution(&table, &lam, l, p, &x, &y, cfg.mc(0x401), engine)?);
            reports.push(check_commutativity(&table, &lam, l, p, &x, &y, cfg.mc(0x402), engine)?);
            let mut mc = cfg.mc(0x403);
            mc.n_samples = 2_000;
            reports.push(check_associativity(&table, &lam, l, p, &x, &y, &w, 1_000, 1_000, mc)?);
            reports.push(check_subgroup(
                p,
                1,
                Complex64::from_polar(1.0, 0.4),
                Complex64::from_polar(1.0, -2.2),
                10_000,
                cfg.mc(0x404),
            )?);
        }
        2 => {
            let p = 5.0;
            let l = 1i64;
            let table = table_for(p, 2, l as f64, 4, 48)?;
            let lam = dw(&[2, 0]);
            let x = ConePoint::new(&[1.1, 0.5], Complex64::from_polar(1.0, 0.7)).unwrap();
            let y = ConePoint::new(&[0.9, 0.3], Complex64::from_polar(1.0, -1.1)).unwrap();
            let w = ConePoint::new(&[0.6, 0.2], Complex64::from_polar(1.0, 2.0)).unwrap();
            let mc_n = McConfig {
                n_samples: cfg.n_samples.clamp(100_000, 1_000_000),
                ..cfg.mc(0x410)
            };
            reports.push(check_identity_element(
                &table,
                &lam,
                l,
                p,
                &x,
                mc_n,
                ConvEngine::MonteCarlo,
            )?);
            reports.push(check_involution(
                &table,
                &lam,
                l,
                p,
                &x,
                &y,
                McConfig { seed: split_seed(cfg.seed, 0x411), ..mc_n },
                ConvEngine::MonteCarlo,
            )?);
            reports.push(check_commutativity(
                &table,
                &lam,
                l,
                p,
                &x,
                &y,
                McConfig { seed: split_seed(cfg.seed, 0x412), ..mc_n },
                ConvEngine::MonteCarlo,
            )?);
            reports.push(check_associativity(
                &table,
                &lam,
                l,
                p,
                &x,
                &y,
                &w,
                1_000,
                1_000,
                McConfig { seed: split_seed(cfg.seed, 0x413), ..mc_n },
            )?);
            reports.push(check_subgroup(
                p,
                2,
                Complex64::from_polar(1.0, 0.4),
                Complex64::from_polar(1.0, -2.2),
                10_000,
                cfg.mc(0x414),
            )?);
        }
        other => {
            return Err(VerifyError::InvalidParam(format!(
                "axioms suite covers q ∈ {{1, 2}}, got {other}"
            )))
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        assert_eq!("cone".parse::<Suite>().unwrap(), Suite::Cone);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn rank1_grid_has_twenty_tuples_spanning_all_values() {
        let grid = rank1_default_grid();
        assert_eq!(grid.len(), 20);
        for &(alpha, beta, ..) in &grid {
            assert!(alpha > beta && beta >= 0.0);
        }
        for v in [1.5, 2.0, 3.0] {
            assert!(grid.iter().any(|g| g.0 == v));
        }
        for v in [0.0, 0.5, 1.0, 2.0] {
            assert!(grid.iter().any(|g| g.1 == v));
        }
        for v in [0.2, 0.5, 0.8] {
            assert!(grid.iter().any(|g| g.4 == v));
        }
    }

    #[test]
    fn rank1_suite_all_pass() {
        let cfg = SuiteConfig::default();
        let reports = run_suite(Suite::Rank1, &cfg).unwrap();
        assert_eq!(reports.len(), 20);
        assert!(reports.iter().all(|r| r.passed));
    }

    #[test]
    fn disk_and_koornwinder_suites_pass() {
        let cfg = SuiteConfig::default();
        for suite in [Suite::Disk, Suite::Koornwinder] {
            let reports = run_suite(suite, &cfg).unwrap();
            let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
            assert!(failed.is_empty(), "{suite:?}: {failed:#?}");
        }
    }
}
