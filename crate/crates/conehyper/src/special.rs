//! Gamma function via the Lanczos approximation.
//!
//! The c-function of `hopoly` needs gamma ratios at arbitrary real arguments
//! (negative multiplicities push arguments below zero), so everything is done
//! through a signed log-gamma: `gamma(x) = sign * exp(ln_abs)`.

use thiserror::Error;

/// A gamma argument landed on a pole (a nonpositive integer).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("gamma pole at x = {arg}")]
pub struct PoleError {
    pub arg: f64,
}

// Lanczos coefficients, g = 7, n = 9 (Godfrey / Boost / CPython set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut sum = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS[1..].iter().enumerate() {
        sum += c / (x + (i + 1) as f64);
    }
    sum
}

/// ln Γ(x) for x > 0. Relative error below 1e-13 over the range we use.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Reflection keeps the Lanczos series in its accurate regime.
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Signed log-gamma: returns `(ln |Γ(x)|, sign)` for any real x off the poles.
pub fn signed_ln_gamma(x: f64) -> Result<(f64, f64), PoleError> {
    if is_pole(x) {
        return Err(PoleError { arg: x });
    }
    if x > 0.0 {
        return Ok((ln_gamma(x), 1.0));
    }
    // Γ(x) = π / (sin(πx) Γ(1-x)); with 1-x > 1 the sign is that of sin(πx).
    let s = (std::f64::consts::PI * x).sin();
    let ln_abs = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    Ok((ln_abs, s.signum()))
}

/// Whether x sits on a gamma pole (0, -1, -2, ...) within floating tolerance.
pub fn is_pole(x: f64) -> bool {
    x <= 1e-12 && (x - x.round()).abs() < 1e-9 * x.abs().max(1.0)
}

/// Γ(x) with sign, via [`signed_ln_gamma`].
pub fn gamma(x: f64) -> Result<f64, PoleError> {
    let (ln_abs, sign) = signed_ln_gamma(x)?;
    Ok(sign * ln_abs.exp())
}
