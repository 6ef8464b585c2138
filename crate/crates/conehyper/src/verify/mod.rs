//! One checker per displayed identity: product formulas on the cone and the
//! alcove, the rank-one integral identities, orthogonality, hypergroup
//! axioms, and the exploratory positivity scan.
//!
//! Every checker returns a [`CheckReport`] carrying both sides, the absolute
//! discrepancy, the tolerance it was judged against (deterministic quadrature
//! budget and/or k·SE), and the seed that reproduces it bit-identically.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

pub mod axioms;
pub mod ortho;
pub mod positivity;
pub mod products;
pub mod rank1;
pub mod suites;

pub use axioms::{
    check_associativity, check_commutativity, check_identity_element, check_involution,
    check_subgroup,
};
pub use ortho::check_orthogonality;
pub use positivity::{positivity_scan, PositivityReport};
pub use products::{check_kernel_form, check_product_cone, check_product_jacobi};
pub use rank1::{check_disk_product, check_koornwinder, check_rank1_identity};
pub use suites::{run_suite, Suite, SuiteConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("degenerate argument: {0}")]
    DegenerateArgument(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Hypergroup(#[from] crate::hypergroup::HyperError),
    #[error(transparent)]
    Hopoly(#[from] crate::hopoly::HopolyError),
    #[error(transparent)]
    Mat(#[from] crate::matcore::MatError),
}

/// Structured outcome of one identity check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub abs_err: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub n_samples: u64,
    pub seed: u64,
}

impl CheckReport {
    pub fn new(
        name: &str,
        params: BTreeMap<String, String>,
        lhs: Complex64,
        rhs: Complex64,
        tolerance: f64,
        n_samples: u64,
        seed: u64,
    ) -> CheckReport {
        let abs_err = (lhs - rhs).norm();
        CheckReport {
            name: name.to_string(),
            params,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            abs_err,
            tolerance,
            passed: abs_err <= tolerance,
            n_samples,
            seed,
        }
    }

    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs_re, self.lhs_im)
    }

    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs_re, self.rhs_im)
    }
}

/// Ordered parameter map from (key, value) pairs.
pub fn params(list: &[(&str, String)]) -> BTreeMap<String, String> {
    list.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Principal-branch complex power: ξ^l = exp(l(ln|ξ| + i Arg ξ)) with
/// Arg ∈ (-π, π]; 0^l = 0 for l > 0, and ξ^0 = 1.
pub fn principal_pow(xi: Complex64, l: f64) -> Complex64 {
    if l == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let r = xi.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(r.powf(l), l * xi.arg())
}

/// JSON array of reports (deterministic field and key order).
pub fn reports_to_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("report serialization is infallible")
}

/// Flat CSV: name, params, lhs_re, lhs_im, rhs_re, rhs_im, abs_err,
/// tolerance, passed, n_samples, seed.
pub fn reports_to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from(
        "name,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,tolerance,passed,n_samples,seed\n",
    );
    for r in reports {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.name,
            params.join(";"),
            r.lhs_re,
            r.lhs_im,
            r.rhs_re,
            r.rhs_im,
            r.abs_err,
            r.tolerance,
            r.passed,
            r.n_samples,
            r.seed
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_power_extends_integer_powers() {
        let xi = Complex64::new(-0.3, 0.7);
        for l in 0..5i32 {
            let a = principal_pow(xi, l as f64);
            let b = xi.powi(l);
            assert!((a - b).norm() < 1e-12, "l={l}");
        }
        assert_eq!(principal_pow(Complex64::new(0.0, 0.0), 1.5).norm(), 0.0);
    }

    #[test]
    fn report_pass_fail_logic() {
        let r = CheckReport::new(
            "demo",
            params(&[("p", "2".into())]),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1e-9),
            1e-8,
            10,
            7,
        );
        assert!(r.passed);
        assert!(r.abs_err > 0.0 && r.abs_err <= r.tolerance);
        let csv = reports_to_csv(std::slice::from_ref(&r));
        assert!(csv.lines().count() == 2);
        assert!(csv.contains("demo,p=2,1,0,1,"));
        let json = reports_to_json(&[r]);
        assert!(json.contains("\"abs_err\""));
    }
}
