//! Cross-cutting hypergroup properties that need several modules at once.

use num_complex::Complex64;

use conehyper::hopoly::{build_basis, DominantWeight, Multiplicity};
use conehyper::hypergroup::{
    convolve, eval_character, haar_integrate, ConePoint, ConvEngine, HaarEngine,
};
use conehyper::McConfig;

/// ω_p(f_x) = ω_p(f) for the hypergroup translate f_x(y) = (δ_y *_p δ_x)(f):
/// nested deterministic quadrature at rank one, f a finite character
/// combination (the constant picks up the total mass, the character part
/// must wash out).
#[test]
fn haar_measure_is_translation_invariant() {
    let p = 2.5;
    let k = Multiplicity::new(p, 1, 1.0).unwrap();
    let table = build_basis(&k, 4, 48).unwrap();
    let lam = DominantWeight::new(vec![2]).unwrap();
    let f = |pt: &ConePoint| {
        0.7 * Complex64::new(1.0, 0.0) + eval_character(&table, &lam, 1.0, p, pt).unwrap()
    };
    let x = ConePoint::new(&[0.8], Complex64::from_polar(1.0, 1.3)).unwrap();
    // inner convolution: small deterministic grid; the integrand's phase
    // degree is tiny, so 16 trapezoid points are exact
    let engine = ConvEngine::Quadrature {
        level: 3,
        n_phase: 16,
    };
    let translate = |y: &ConePoint| -> Complex64 {
        convolve(y, &x, p, McConfig::new(0, 1), engine)
            .unwrap()
            .integrate(&f)
            .value()
    };
    let quad = HaarEngine::Quadrature { order: 24 };
    let lhs = haar_integrate(p, 1, translate, quad, McConfig::new(0, 1)).unwrap();
    let rhs = haar_integrate(p, 1, f, quad, McConfig::new(0, 1)).unwrap();
    assert!(
        (lhs.value() - rhs.value()).norm() <= 1e-8,
        "ω(f_x) = {} vs ω(f) = {}",
        lhs.value(),
        rhs.value()
    );
    // and the common value is the constant part times the total mass 1/(2p)
    let want = 0.7 / (2.0 * p);
    assert!((rhs.value_re - want).abs() <= 1e-8);
    assert!(rhs.value_im.abs() <= 1e-10);
}

/// The identity element, the involution and commutativity seen through a
/// second, Monte Carlo route at rank two (the quadrature route is covered by
/// unit tests).
#[test]
fn rank_two_convolution_agrees_with_character_factorization() {
    let p = 3.5;
    let k = Multiplicity::new(p, 2, 1.0).unwrap();
    let table = build_basis(&k, 4, 48).unwrap();
    let lam = DominantWeight::new(vec![2, 2]).unwrap();
    let x = ConePoint::new(&[1.2, 0.4], Complex64::from_polar(1.0, 0.5)).unwrap();
    let y = ConePoint::new(&[0.7, 0.25], Complex64::from_polar(1.0, -2.3)).unwrap();
    let phi = |pt: &ConePoint| eval_character(&table, &lam, 1.0, p, pt).unwrap();
    let want = phi(&x) * phi(&y);
    let est = convolve(&x, &y, p, McConfig::new(400_000, 99), ConvEngine::MonteCarlo)
        .unwrap()
        .integrate(phi);
    assert!(
        (est.value() - want).norm() <= 4.0 * est.stderr,
        "{} vs {} ± {:e}",
        est.value(),
        want,
        est.stderr
    );
}
