//! Statistical checks of the hypergroup axioms through characters: identity
//! element, involution consistency, commutativity, associativity (double
//! convolutions under both bracketings), and the torus subgroup.

use num_complex::Complex64;

use super::{params, CheckReport, VerifyError};
use crate::hopoly::{DominantWeight, PolyTable};
use crate::hypergroup::{convolve, eval_character, ConePoint, ConvEngine};
use crate::mc::{indexed_map, split_seed, McConfig};

fn character_closure<'a>(
    table: &'a PolyTable,
    lambda: &'a DominantWeight,
    l: i64,
    p: f64,
) -> impl Fn(&ConePoint) -> Complex64 + Sync + 'a {
    move |pt: &ConePoint| {
        eval_character(table, lambda, l as f64, p, pt).expect("integer-l characters are total")
    }
}

/// δ_x * δ_e = δ_x, observed through a character: ∫φ d(δ_x*δ_e) = φ(x).
pub fn check_identity_element(
    table: &PolyTable,
    lambda: &DominantWeight,
    l: i64,
    p: f64,
    x: &ConePoint,
    mc: McConfig,
    engine: ConvEngine,
) -> Result<CheckReport, VerifyError> {
    let phi = character_closure(table, lambda, l, p);
    let lhs = phi(x);
    let e = ConePoint::identity(x.q());
    let est = convolve(x, &e, p, mc, engine)?.integrate(&phi);
    let quad = if matches!(engine, ConvEngine::Quadrature { .. }) { 1e-8 } else { 0.0 };
    Ok(CheckReport::new(
        "axiom_identity",
        params(&[
            ("lambda", lambda.to_string()),
            ("l", l.to_string()),
            ("p", p.to_string()),
            ("q", x.q().to_string()),
        ]),
        lhs,
        est.value(),
        4.0 * est.stderr + quad,
        est.n_samples,
        est.seed,
    ))
}

/// (δ_x * δ_y)^- = δ_ȳ * δ_x̄: applied to a character φ this reads
/// ∫ φ(m̄) d(δ_x*δ_y)(m) = conj(φ(x) φ(y)).
pub fn check_involution(
    table: &PolyTable,
    lambda: &DominantWeight,
    l: i64,
    p: f64,
    x: &ConePoint,
    y: &ConePoint,
    mc: McConfig,
    engine: ConvEngine,
) -> Result<CheckReport, VerifyError> {
    let phi = character_closure(table, lambda, l, p);
    let lhs = (phi(x) * phi(y)).conj();
    let est = convolve(x, y, p, mc, engine)?.integrate(|pt| phi(&pt.involution()));
    let quad = if matches!(engine, ConvEngine::Quadrature { .. }) { 1e-8 } else { 0.0 };
    Ok(CheckReport::new(
        "axiom_involution",
        params(&[
            ("lambda", lambda.to_string()),
            ("l", l.to_string()),
            ("p", p.to_string()),
            ("q", x.q().to_string()),
        ]),
        lhs,
        est.value(),
        4.0 * est.stderr + quad,
        est.n_samples,
        est.seed,
    ))
}

/// ∫φ d(δ_x*δ_y) = ∫φ d(δ_y*δ_x), estimated with independent seeds and
/// judged at 4 combined standard errors.
pub fn check_commutativity(
    table: &PolyTable,
    lambda: &DominantWeight,
    l: i64,
    p: f64,
    x: &ConePoint,
    y: &ConePoint,
    mc: McConfig,
    engine: ConvEngine,
) -> Result<CheckReport, VerifyError> {
    let phi = character_closure(table, lambda, l, p);
    let mc1 = McConfig { seed: split_seed(mc.seed, 1), ..mc };
    let mc2 = McConfig { seed: split_seed(mc.seed, 2), ..mc };
    let e1 = convolve(x, y, p, mc1, engine)?.integrate(&phi);
    let e2 = convolve(y, x, p, mc2, engine)?.integrate(&phi);
    let quad = if matches!(engine, ConvEngine::Quadrature { .. }) { 1e-8 } else { 0.0 };
    let tol = 4.0 * (e1.stderr * e1.stderr + e2.stderr * e2.stderr).sqrt() + quad;
    Ok(CheckReport::new(
        "axiom_commutativity",
        params(&[
            ("lambda", lambda.to_string()),
            ("l", l.to_string()),
            ("p", p.to_string()),
            ("q", x.q().to_string()),
        ]),
        e1.value(),
        e2.value(),
        tol,
        e1.n_samples + e2.n_samples,
        mc.seed,
    ))
}

/// One bracketing of the double convolution at character level:
/// outer sample m from pair.0 * pair.1, then ∫φ d(δ_a * δ_b) with (a, b) =
/// (m, other) or (other, m). Returns the weighted estimate and its SE.
fn bracket(
    pair: (&ConePoint, &ConePoint),
    other: &ConePoint,
    other_on_left: bool,
    table: &PolyTable,
    lambda: &DominantWeight,
    l: i64,
    p: f64,
    n_outer: u64,
    n_inner: u64,
    seed: u64,
    mc: McConfig,
) -> Result<(Complex64, f64), VerifyError> {
    let outer = convolve(
        pair.0,
        pair.1,
        p,
        McConfig { seed, ..mc },
        ConvEngine::MonteCarlo,
    )?;
    let targets = outer.collect_targets(n_outer);
    let phi = character_closure(table, lambda, l, p);
    let vals: Vec<(Complex64, f64)> = indexed_map(n_outer, mc.parallel, |i| {
        let (m, w) = &targets[i as usize];
        let inner_cfg = McConfig {
            n_samples: n_inner,
            seed: split_seed(seed, 0x5000_0000 + i),
            parallel: false,
            ..mc
        };
        let inner = if other_on_left {
            convolve(other, m, p, inner_cfg, ConvEngine::MonteCarlo)
        } else {
            convolve(m, other, p, inner_cfg, ConvEngine::MonteCarlo)
        }
        .expect("inner convolution parameters were validated");
        (inner.integrate(&phi).value(), *w)
    });
    let sum_w: f64 = vals.iter().map(|(_, w)| w).sum();
    let mean: Complex64 = vals.iter().map(|(v, w)| v * *w).sum::<Complex64>() / sum_w;
    let var: f64 = vals
        .iter()
        .map(|(v, w)| (w / sum_w).powi(2) * (v - mean).norm_sqr())
        .sum();
    Ok((mean, var.sqrt()))
}

/// Associativity at character level: both bracketings of the double
/// convolution reproduce φ(x)φ(y)φ(w) and must agree within combined SE.
#[allow(clippy::too_many_arguments)]
pub fn check_associativity(
    table: &PolyTable,
    lambda: &DominantWeight,
    l: i64,
    p: f64,
    x: &ConePoint,
    y: &ConePoint,
    w: &ConePoint,
    n_outer: u64,
    n_inner: u64,
    mc: McConfig,
) -> Result<CheckReport, VerifyError> {
    let phi = character_closure(table, lambda, l, p);
    let product = phi(x) * phi(y) * phi(w);
    let (a, se_a) = bracket(
        (x, y),
        w,
        false,
        table,
        lambda,
        l,
        p,
        n_outer,
        n_inner,
        split_seed(mc.seed, 11),
        mc,
    )?;
    let (b, se_b) = bracket(
        (y, w),
        x,
        true,
        table,
        lambda,
        l,
        p,
        n_outer,
        n_inner,
        split_seed(mc.seed, 12),
        mc,
    )?;
    Ok(CheckReport::new(
        "axiom_associativity",
        params(&[
            ("lambda", lambda.to_string()),
            ("l", l.to_string()),
            ("p", p.to_string()),
            ("q", x.q().to_string()),
            ("character_product", format!("{}+{}i", product.re, product.im)),
        ]),
        a,
        b,
        4.0 * (se_a * se_a + se_b * se_b).sqrt(),
        n_outer * n_inner * 2,
        mc.seed,
    ))
}

/// The torus subgroup H = {[1, z]}: the convolution of two of its points is
/// a point mass at [1, z z']; the report carries the sample variance of the
/// target in the cone embedding against a 1e-20 budget.
pub fn check_subgroup(
    p: f64,
    q: usize,
    z1: Complex64,
    z2: Complex64,
    n: u64,
    mc: McConfig,
) -> Result<CheckReport, VerifyError> {
    let x = ConePoint::new(&vec![0.0; q], z1)?;
    let y = ConePoint::new(&vec![0.0; q], z2)?;
    let m = convolve(&x, &y, p, mc, ConvEngine::MonteCarlo)?;
    let targets = m.collect_targets(n);
    let dim = targets[0].0.embedding().len();
    let mut mean = vec![0.0; dim];
    for (pt, _) in &targets {
        for (acc, v) in mean.iter_mut().zip(pt.embedding()) {
            *acc += v;
        }
    }
    for acc in mean.iter_mut() {
        *acc /= targets.len() as f64;
    }
    let mut var = 0.0;
    for (pt, _) in &targets {
        for (acc, v) in mean.iter().zip(pt.embedding()) {
            var += (v - acc) * (v - acc);
        }
    }
    var /= targets.len() as f64;
    let want = z1 * z2;
    let mean_err = ((mean[0] - want.re).powi(2) + (mean[1] - want.im).powi(2)).sqrt();
    Ok(CheckReport::new(
        "axiom_subgroup",
        params(&[
            ("p", p.to_string()),
            ("q", q.to_string()),
            ("z1", format!("{}+{}i", z1.re, z1.im)),
            ("z2", format!("{}+{}i", z2.re, z2.im)),
            ("mean_error", mean_err.to_string()),
        ]),
        Complex64::new(var, 0.0),
        Complex64::new(0.0, 0.0),
        1e-20,
        n,
        mc.seed,
    ))
}
