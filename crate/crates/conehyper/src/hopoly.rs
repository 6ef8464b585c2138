//! Renormalized Heckman-Opdam Jacobi polynomials `R_λ(k; ·)` of type BC_q on
//! the alcove `A_q = {π/2 >= t_1 >= ... >= t_q >= 0}`.
//!
//! The polynomials are constructed, not expanded from hypergeometric series:
//! Gram-Schmidt in the Weyl-orbit-sum basis against the explicit weight
//! `δ_k(t) = Π_j sin^(2p-2q+1) t_j cos^(2|l|+1) t_j · Π_{i<j} (cos 2t_i - cos 2t_j)²`,
//! followed by the renormalization `R_λ(0) = 1`. Distinct dominant weights
//! give orthogonal polynomials, so any total order refining dominance yields
//! the same table; we use graded order with lexicographic tie-break.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::quad::gauss_legendre_on;
use crate::special::{is_pole, signed_ln_gamma};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HopolyError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("c-function pole: Γ({arg}) in the factor for root {root}")]
    Pole { root: String, arg: f64 },
    #[error("point outside the alcove A_q: {0}")]
    Domain(String),
    #[error("ill-conditioned Gram-Schmidt at λ = {lambda}: squared norm {norm2:e}; increase the quadrature order")]
    IllConditioned { lambda: String, norm2: f64 },
    #[error("weight {0} not present in the table")]
    MissingWeight(String),
    #[error("table deserialization failed: {0}")]
    BadTable(String),
}

// ── dominant weights ────────────────────────────────────────────────

/// λ ∈ P_+: a nonincreasing tuple of q nonnegative even integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DominantWeight(pub Vec<u32>);

impl DominantWeight {
    pub fn new(entries: Vec<u32>) -> Result<Self, HopolyError> {
        if entries.is_empty() {
            return Err(HopolyError::InvalidParam("empty weight".into()));
        }
        if entries.iter().any(|&x| x % 2 != 0) {
            return Err(HopolyError::InvalidParam(format!(
                "weight entries must be even: {entries:?}"
            )));
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(HopolyError::InvalidParam(format!(
                "weight entries must be nonincreasing: {entries:?}"
            )));
        }
        Ok(DominantWeight(entries))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// BC dominance: μ <= λ iff every prefix sum of μ is bounded by the one
    /// of λ (the difference then lies in the positive root cone).
    pub fn dominates(&self, other: &DominantWeight) -> bool {
        let mut acc_self = 0i64;
        let mut acc_other = 0i64;
        for (a, b) in self.0.iter().zip(&other.0) {
            acc_self += *a as i64;
            acc_other += *b as i64;
            if acc_other > acc_self {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// All λ ∈ P_+ with λ_1 <= max_deg, in graded order (|λ| ascending,
/// lexicographic tie-break). This refines dominance.
pub fn enumerate_weights(q: usize, max_deg: u32) -> Vec<DominantWeight> {
    fn rec(q: usize, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<DominantWeight>) {
        if prefix.len() == q {
            out.push(DominantWeight(prefix.clone()));
            return;
        }
        let mut v = 0;
        while v <= cap {
            prefix.push(v);
            rec(q, v, prefix, out);
            prefix.pop();
            v += 2;
        }
    }
    let mut out = Vec::new();
    rec(q, max_deg, &mut Vec::new(), &mut out);
    out.sort_by_key(|w| (w.degree(), w.0.clone()));
    out
}

// ── multiplicities and the ρ vector ─────────────────────────────────

/// Multiplicity triple attached to the short/long/middle BC_q roots,
/// derived from (p, q, l) as k = (p-q-|l|, 1/2+|l|, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplicity {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub p: f64,
    pub q: usize,
    pub l: f64,
}

impl Multiplicity {
    /// k(p, q, l); requires p > 2q - 1, l is used through |l|.
    pub fn new(p: f64, q: usize, l: f64) -> Result<Self, HopolyError> {
        if q == 0 {
            return Err(HopolyError::InvalidParam("q must be >= 1".into()));
        }
        if !(p > 2.0 * q as f64 - 1.0) {
            return Err(HopolyError::InvalidParam(format!(
                "p > 2q-1 required, got p = {p}, q = {q}"
            )));
        }
        let l = l.abs();
        Ok(Multiplicity {
            k1: p - q as f64 - l,
            k2: 0.5 + l,
            k3: 1.0,
            p,
            q,
            l,
        })
    }

    /// ρ(k) = ½ Σ_{α ∈ R_+} k_α α, componentwise
    /// ρ_j = (k1 + 2 k2) + 2 k3 (q - j).
    pub fn rho(&self) -> Vec<f64> {
        (0..self.q)
            .map(|i| self.k1 + 2.0 * self.k2 + 2.0 * self.k3 * (self.q - 1 - i) as f64)
            .collect()
    }
}

/// ρ(k(p,q,l)): component j equals (p - q + |l| + 1) + 2(q - j).
pub fn rho(p: f64, q: usize, l: f64) -> Vec<f64> {
    (0..q)
        .map(|i| (p - q as f64 + l.abs() + 1.0) + 2.0 * (q - 1 - i) as f64)
        .collect()
}

// ── the c-function ──────────────────────────────────────────────────

/// Positive roots of R = 2BC_q with the data the c-function needs:
/// (label, pairing with a vector, k_(α/2) selector, k_α selector).
fn c_function_factors(
    lambda: &[f64],
    k: &Multiplicity,
) -> Vec<(String, f64, f64, f64)> {
    let q = k.q;
    let mut factors = Vec::new();
    for i in 0..q {
        // short root 2e_i: <λ, α^∨> = λ_i, α/2 ∉ R
        factors.push((format!("2e_{}", i + 1), lambda[i], 0.0, k.k1));
        // long root 4e_i: <λ, α^∨> = λ_i/2, α/2 = 2e_i carries k1
        factors.push((format!("4e_{}", i + 1), lambda[i] / 2.0, k.k1, k.k2));
    }
    for i in 0..q {
        for j in i + 1..q {
            factors.push((
                format!("2e_{}-2e_{}", i + 1, j + 1),
                (lambda[i] - lambda[j]) / 2.0,
                0.0,
                k.k3,
            ));
            factors.push((
                format!("2e_{}+2e_{}", i + 1, j + 1),
                (lambda[i] + lambda[j]) / 2.0,
                0.0,
                k.k3,
            ));
        }
    }
    factors
}

/// The generalized c-function: the double product of gamma ratios over the
/// positive roots, evaluated at λ and at ρ(k).
pub fn c_function(lambda: &[f64], k: &Multiplicity) -> Result<f64, HopolyError> {
    if lambda.len() != k.q {
        return Err(HopolyError::InvalidParam(format!(
            "λ has length {}, expected q = {}",
            lambda.len(),
            k.q
        )));
    }
    let rho_k = k.rho();
    let mut ln_sum = 0.0;
    let mut sign = 1.0;
    let mut ratio = |root: &str, num: f64, den: f64| -> Result<(), HopolyError> {
        for (arg, s) in [(num, 1.0), (den, -1.0)] {
            if is_pole(arg) {
                return Err(HopolyError::Pole {
                    root: root.to_string(),
                    arg,
                });
            }
            let (ln_abs, sg) = signed_ln_gamma(arg).map_err(|e| HopolyError::Pole {
                root: root.to_string(),
                arg: e.arg,
            })?;
            ln_sum += s * ln_abs;
            if sg < 0.0 {
                sign = -sign;
            }
        }
        Ok(())
    };
    for (root, x, khalf, kalpha) in c_function_factors(lambda, k) {
        if kalpha.abs() < 1e-15 {
            continue; // Γ(x)/Γ(x) ≡ 1, also across poles
        }
        ratio(&root, x + 0.5 * khalf, x + 0.5 * khalf + kalpha)?;
    }
    for (root, y, khalf, kalpha) in c_function_factors(&rho_k, k) {
        if kalpha.abs() < 1e-15 {
            continue;
        }
        ratio(&root, y + 0.5 * khalf + kalpha, y + 0.5 * khalf)?;
    }
    Ok(sign * ln_sum.exp())
}

// ── the orthogonality weight δ_k on the alcove ──────────────────────

/// δ_k in expanded form, no domain check; symmetric under permutations and
/// sign flips of t, which the box quadrature relies on.
pub(crate) fn weight_density_unchecked(t: &[f64], k: &Multiplicity) -> f64 {
    let sin_pow = 2.0 * k.p - 2.0 * k.q as f64 + 1.0;
    let cos_pow = 2.0 * k.l + 1.0;
    let mut val = 1.0;
    for &tj in t {
        val *= tj.sin().abs().powf(sin_pow) * tj.cos().abs().powf(cos_pow);
    }
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let d = (2.0 * t[i]).cos() - (2.0 * t[j]).cos();
            val *= d * d;
        }
    }
    val
}

/// The weight δ_k(t) on the alcove (the free constant of the display is
/// fixed to 1; every downstream use is a ratio).
pub fn weight_density(t: &[f64], k: &Multiplicity) -> Result<f64, HopolyError> {
    check_alcove(t, 1e-12)?;
    Ok(weight_density_unchecked(t, k))
}

pub(crate) fn check_alcove(t: &[f64], tol: f64) -> Result<(), HopolyError> {
    let top = std::f64::consts::FRAC_PI_2;
    if t.is_empty() {
        return Err(HopolyError::Domain("empty point".into()));
    }
    if t[0] > top + tol || t[t.len() - 1] < -tol {
        return Err(HopolyError::Domain(format!("{t:?} outside [0, π/2]")));
    }
    if t.windows(2).any(|w| w[0] < w[1] - tol) {
        return Err(HopolyError::Domain(format!("{t:?} not nonincreasing")));
    }
    Ok(())
}

// ── quadrature on the alcove ────────────────────────────────────────

/// Tensor Gauss-Legendre grid on the box [0, π/2]^q. Weyl-invariant
/// integrands are integrated over the box and divided by q!, which equals
/// the alcove integral.
pub struct AlcoveGrid {
    pub q: usize,
    pub order: usize,
    /// flattened nodes, q coordinates each
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AlcoveGrid {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.q..(i + 1) * self.q]
    }

    /// ∫_{A_q} f dt for a Weyl-invariant (symmetric) integrand.
    pub fn integrate_symmetric(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let fact: f64 = (1..=self.q).map(|i| i as f64).product();
        let sum: f64 = (0..self.len())
            .map(|i| self.weights[i] * f(self.node(i)))
            .sum();
        sum / fact
    }
}

/// Build the tensor grid. q > 3 is a cost guard; use
/// [`alcove_quadrature_with`] to override.
pub fn alcove_quadrature(q: usize, order: usize) -> Result<AlcoveGrid, HopolyError> {
    alcove_quadrature_with(q, order, false)
}

pub fn alcove_quadrature_with(
    q: usize,
    order: usize,
    allow_large: bool,
) -> Result<AlcoveGrid, HopolyError> {
    if q == 0 || (q > 3 && !allow_large) {
        return Err(HopolyError::InvalidParam(format!(
            "alcove quadrature supports q in 1..=3 (got q = {q}); pass allow_large to override"
        )));
    }
    if order < 8 {
        return Err(HopolyError::InvalidParam(format!(
            "quadrature order must be >= 8, got {order}"
        )));
    }
    let (x1, w1) = gauss_legendre_on(order, 0.0, std::f64::consts::FRAC_PI_2);
    let total = order.pow(q as u32);
    let mut nodes = Vec::with_capacity(total * q);
    let mut weights = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut w = 1.0;
        for _ in 0..q {
            let idx = rem % order;
            rem /= order;
            nodes.push(x1[idx]);
            w *= w1[idx];
        }
        weights.push(w);
    }
    Ok(AlcoveGrid {
        q,
        order,
        nodes,
        weights,
    })
}

// ── orbit sums ──────────────────────────────────────────────────────

/// Distinct permutations of the entries of λ.
fn distinct_permutations(lambda: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted: Vec<u32> = lambda.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(lambda.len());
    fn rec(pool: &mut Vec<u32>, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pool.is_empty() {
            out.push(current.clone());
            return;
        }
        let mut last: Option<u32> = None;
        for i in 0..pool.len() {
            if last == Some(pool[i]) {
                continue;
            }
            last = Some(pool[i]);
            let v = pool.remove(i);
            current.push(v);
            rec(pool, current, out);
            current.pop();
            pool.insert(i, v);
        }
    }
    rec(&mut sorted, &mut current, &mut out);
    out
}

/// The Weyl orbit sum m_λ(t) = Σ_{μ ∈ W·λ} e^{i<μ,t>} in real cosine form:
/// summing distinct signed permutations collapses the sign choices into a
/// product of 2cos factors over the nonzero entries.
#[derive(Debug, Clone)]
pub struct OrbitSum {
    perms: Vec<Vec<u32>>,
}

impl OrbitSum {
    pub fn new(lambda: &DominantWeight) -> Self {
        OrbitSum {
            perms: distinct_permutations(&lambda.0),
        }
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        self.perms
            .iter()
            .map(|perm| {
                perm.iter()
                    .zip(t)
                    .map(|(&m, &tj)| {
                        if m == 0 {
                            1.0
                        } else {
                            2.0 * (m as f64 * tj).cos()
                        }
                    })
                    .product::<f64>()
            })
            .sum()
    }

    /// Value at t = 0, i.e. the number of elements in the Weyl orbit.
    pub fn at_zero(&self) -> f64 {
        self.perms
            .iter()
            .map(|perm| 2f64.powi(perm.iter().filter(|&&m| m != 0).count() as i32))
            .sum()
    }
}

// ── the polynomial table ────────────────────────────────────────────

/// Orthogonalized coefficient table: each R_λ expressed over the orbit sums
/// m_μ with μ earlier in the graded order.
pub struct PolyTable {
    pub k: Multiplicity,
    pub max_deg: u32,
    pub quad_order: usize,
    weights_list: Vec<DominantWeight>,
    orbits: Vec<OrbitSum>,
    /// coeffs[i] has length i+1: R_{λ_i} = Σ_j coeffs[i][j] m_{λ_j}
    coeffs: Vec<Vec<f64>>,
    index: BTreeMap<DominantWeight, usize>,
}

impl PolyTable {
    pub fn q(&self) -> usize {
        self.k.q
    }

    pub fn lambdas(&self) -> &[DominantWeight] {
        &self.weights_list
    }

    pub fn index_of(&self, lambda: &DominantWeight) -> Option<usize> {
        self.index.get(lambda).copied()
    }

    /// Coefficient of m_λ in R_λ; equals c(λ+ρ(k), k) up to quadrature error.
    pub fn leading_coefficient(&self, lambda: &DominantWeight) -> Result<f64, HopolyError> {
        let i = self
            .index_of(lambda)
            .ok_or_else(|| HopolyError::MissingWeight(lambda.to_string()))?;
        Ok(self.coeffs[i][i])
    }

    /// R_λ(k; t) = Σ_μ coeff_μ m_μ(t).
    pub fn eval_r(&self, lambda: &DominantWeight, t: &[f64]) -> Result<f64, HopolyError> {
        let i = self
            .index_of(lambda)
            .ok_or_else(|| HopolyError::MissingWeight(lambda.to_string()))?;
        Ok(self.eval_by_index(i, t))
    }

    pub fn eval_by_index(&self, i: usize, t: &[f64]) -> f64 {
        self.coeffs[i]
            .iter()
            .enumerate()
            .map(|(j, &c)| c * self.orbits[j].eval(t))
            .sum()
    }
}

/// Build the table by modified Gram-Schmidt (one reorthogonalization pass)
/// against the δ_k-weighted quadrature inner product, then rescale so every
/// polynomial equals 1 at t = 0.
pub fn build_basis(
    k: &Multiplicity,
    max_deg: u32,
    quad_order: usize,
) -> Result<PolyTable, HopolyError> {
    let q = k.q;
    if q > 3 {
        return Err(HopolyError::InvalidParam(format!(
            "build_basis supports q <= 3, got {q}"
        )));
    }
    if max_deg > 12 {
        return Err(HopolyError::InvalidParam(format!(
            "max_deg <= 12 required, got {max_deg}"
        )));
    }
    if max_deg % 2 != 0 {
        return Err(HopolyError::InvalidParam(format!(
            "max_deg must be even, got {max_deg}"
        )));
    }
    let grid = alcove_quadrature(q, quad_order)?;
    let node_weights: Vec<f64> = (0..grid.len())
        .map(|i| grid.weights[i] * weight_density_unchecked(grid.node(i), k))
        .collect();
    let lambdas = enumerate_weights(q, max_deg);
    let orbits: Vec<OrbitSum> = lambdas.iter().map(OrbitSum::new).collect();

    let dot = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .zip(&node_weights)
            .map(|((x, y), w)| w * x * y)
            .sum()
    };

    let mut basis_vals: Vec<Vec<f64>> = Vec::with_capacity(lambdas.len());
    let mut norms2: Vec<f64> = Vec::with_capacity(lambdas.len());
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(lambdas.len());

    for (i, lambda) in lambdas.iter().enumerate() {
        let mut vals: Vec<f64> = (0..grid.len()).map(|g| orbits[i].eval(grid.node(g))).collect();
        let mut coef = vec![0.0; i + 1];
        coef[i] = 1.0;
        for _pass in 0..2 {
            for j in 0..i {
                let proj = dot(&vals, &basis_vals[j]) / norms2[j];
                for (v, b) in vals.iter_mut().zip(&basis_vals[j]) {
                    *v -= proj * b;
                }
                for (c, pc) in coef.iter_mut().zip(&coeffs[j]) {
                    *c -= proj * pc;
                }
            }
        }
        let norm2 = dot(&vals, &vals);
        // leading coefficient is 1 by construction at this point
        if norm2 < 1e-20 {
            return Err(HopolyError::IllConditioned {
                lambda: lambda.to_string(),
                norm2,
            });
        }
        let at_zero: f64 = coef
            .iter()
            .enumerate()
            .map(|(j, &c)| c * orbits[j].at_zero())
            .sum();
        let scale = 1.0 / at_zero;
        for c in coef.iter_mut() {
            *c *= scale;
        }
        for v in vals.iter_mut() {
            *v *= scale;
        }
        norms2.push(norm2 * scale * scale);
        basis_vals.push(vals);
        coeffs.push(coef);
    }

    let index = lambdas
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    Ok(PolyTable {
        k: k.clone(),
        max_deg,
        quad_order,
        weights_list: lambdas,
        orbits,
        coeffs,
        index,
    })
}

// ── serialization ───────────────────────────────────────────────────

#[derive(Deserialize)]
struct TableDoc {
    q: usize,
    p: f64,
    l: f64,
    max_deg: u32,
    quad_order: usize,
    coeffs: Vec<CoeffDoc>,
}

#[derive(Deserialize)]
struct CoeffDoc {
    lambda: Vec<u32>,
    mus: Vec<Vec<u32>>,
    values: Vec<f64>,
}

fn fmt_f64(x: f64) -> String {
    // 17 significant digits: round-trips every f64 bit-exactly
    format!("{x:.16e}")
}

impl PolyTable {
    /// Serialize to the JSON document `{q, p, l, max_deg, quad_order,
    /// coeffs: [{lambda, mus, values}]}`. Floats carry 17 significant
    /// digits, so load/save round-trips byte-identically.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        s.push_str(&format!("  \"q\": {},\n", self.k.q));
        s.push_str(&format!("  \"p\": {},\n", fmt_f64(self.k.p)));
        s.push_str(&format!("  \"l\": {},\n", fmt_f64(self.k.l)));
        s.push_str(&format!("  \"max_deg\": {},\n", self.max_deg));
        s.push_str(&format!("  \"quad_order\": {},\n", self.quad_order));
        s.push_str("  \"coeffs\": [\n");
        for (i, lambda) in self.weights_list.iter().enumerate() {
            let mus: Vec<String> = (0..=i)
                .map(|j| {
                    let entries: Vec<String> =
                        self.weights_list[j].0.iter().map(|x| x.to_string()).collect();
                    format!("[{}]", entries.join(","))
                })
                .collect();
            let values: Vec<String> = self.coeffs[i].iter().map(|&c| fmt_f64(c)).collect();
            let entries: Vec<String> = lambda.0.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!(
                "    {{\"lambda\": [{}], \"mus\": [{}], \"values\": [{}]}}{}\n",
                entries.join(","),
                mus.join(","),
                values.join(","),
                if i + 1 < self.weights_list.len() { "," } else { "" }
            ));
        }
        s.push_str("  ]\n}\n");
        s
    }

    pub fn from_json(text: &str) -> Result<PolyTable, HopolyError> {
        let doc: TableDoc =
            serde_json::from_str(text).map_err(|e| HopolyError::BadTable(e.to_string()))?;
        let k = Multiplicity::new(doc.p, doc.q, doc.l)?;
        let lambdas = enumerate_weights(doc.q, doc.max_deg);
        if lambdas.len() != doc.coeffs.len() {
            return Err(HopolyError::BadTable(format!(
                "expected {} weights, found {}",
                lambdas.len(),
                doc.coeffs.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(lambdas.len());
        for (i, (lambda, cd)) in lambdas.iter().zip(&doc.coeffs).enumerate() {
            if cd.lambda != lambda.0 {
                return Err(HopolyError::BadTable(format!(
                    "weight order mismatch at index {i}: {:?} vs {:?}",
                    cd.lambda, lambda.0
                )));
            }
            if cd.values.len() != i + 1 || cd.mus.len() != i + 1 {
                return Err(HopolyError::BadTable(format!(
                    "coefficient row {i} has wrong length"
                )));
            }
            for (j, mu) in cd.mus.iter().enumerate() {
                if *mu != lambdas[j].0 {
                    return Err(HopolyError::BadTable(format!(
                        "mu order mismatch at ({i},{j})"
                    )));
                }
            }
            coeffs.push(cd.values.clone());
        }
        let orbits: Vec<OrbitSum> = lambdas.iter().map(OrbitSum::new).collect();
        let index = lambdas
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        Ok(PolyTable {
            k,
            max_deg: doc.max_deg,
            quad_order: doc.quad_order,
            weights_list: lambdas,
            orbits,
            coeffs,
            index,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi1d::eval_jacobi;

    fn dw(v: &[u32]) -> DominantWeight {
        DominantWeight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn enumerate_rank_one_and_two() {
        let w1 = enumerate_weights(1, 4);
        assert_eq!(w1, vec![dw(&[0]), dw(&[2]), dw(&[4])]);
        let w2 = enumerate_weights(2, 4);
        assert_eq!(
            w2,
            vec![
                dw(&[0, 0]),
                dw(&[2, 0]),
                dw(&[2, 2]),
                dw(&[4, 0]),
                dw(&[4, 2]),
                dw(&[4, 4]),
            ]
        );
    }

    #[test]
    fn enumeration_refines_dominance() {
        for q in 1..=3usize {
            let ws = enumerate_weights(q, 8);
            for i in 0..ws.len() {
                for j in 0..ws.len() {
                    if ws[i].dominates(&ws[j]) && ws[i] != ws[j] {
                        assert!(j < i, "{} should precede {}", ws[j], ws[i]);
                    }
                }
            }
        }
    }

    #[test]
    fn rho_closed_form_and_root_sum_agree() {
        // q=1: ρ = p + |l|
        let r = rho(3.0, 1, 2.0);
        assert!((r[0] - 5.0).abs() < 1e-14);
        // q=2, p=4, l=0 -> (5, 3)
        let r = rho(4.0, 2, 0.0);
        assert!((r[0] - 5.0).abs() < 1e-14 && (r[1] - 3.0).abs() < 1e-14);
        // independent summation over the 2q² positive roots
        for &(p, q, l) in &[(3.0, 1usize, 0.5), (4.5, 2, 1.0), (6.0, 3, 2.0)] {
            let k = Multiplicity::new(p, q, l).unwrap();
            let mut acc = vec![0.0; q];
            for i in 0..q {
                acc[i] += 0.5 * k.k1 * 2.0; // short 2e_i
                acc[i] += 0.5 * k.k2 * 4.0; // long 4e_i
            }
            for i in 0..q {
                for j in i + 1..q {
                    // 2e_i - 2e_j and 2e_i + 2e_j
                    acc[i] += 0.5 * k.k3 * 2.0 + 0.5 * k.k3 * 2.0;
                    acc[j] += -0.5 * k.k3 * 2.0 + 0.5 * k.k3 * 2.0;
                }
            }
            let direct = rho(p, q, l);
            for (a, b) in acc.iter().zip(&direct) {
                assert!((a - b).abs() < 1e-12, "{acc:?} vs {direct:?}");
            }
            let via_k = k.rho();
            for (a, b) in via_k.iter().zip(&direct) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn c_function_at_rho_is_one() {
        for &(p, q, l) in &[(3.0, 1usize, 0.0), (4.0, 2, 1.0), (7.5, 3, 0.5)] {
            let k = Multiplicity::new(p, q, l).unwrap();
            let c = c_function(&k.rho(), &k).unwrap();
            assert!((c - 1.0).abs() < 1e-12, "c(ρ) = {c}");
        }
    }

    #[test]
    fn c_function_smooth_in_p() {
        let lam = [6.0, 4.0];
        let k1 = Multiplicity::new(5.0, 2, 1.0).unwrap();
        let k2 = Multiplicity::new(5.0 + 1e-6, 2, 1.0).unwrap();
        let c1 = c_function(&lam, &k1).unwrap();
        let c2 = c_function(&lam, &k2).unwrap();
        assert!((c1 - c2).abs() <= 1e-4, "jump {:e}", (c1 - c2).abs());
    }

    #[test]
    fn c_function_reports_poles() {
        let k = Multiplicity::new(4.0, 2, 0.0).unwrap();
        // λ with equal entries hits Γ(0) in the 2e_1 - 2e_2 factor
        let err = c_function(&[2.0, 2.0], &k).unwrap_err();
        match err {
            HopolyError::Pole { root, arg } => {
                assert_eq!(root, "2e_1-2e_2");
                assert_eq!(arg, 0.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn weight_density_values_and_domain() {
        // q=1, p=2, l=0 at t = π/4: sin³ cos = 2^(-3/2) · 2^(-1/2) = 1/4
        let k = Multiplicity::new(2.0, 1, 0.0).unwrap();
        let v = weight_density(&[std::f64::consts::FRAC_PI_4], &k).unwrap();
        assert!((v - 0.25).abs() < 1e-14);
        // Vandermonde zero at coinciding coordinates
        let k2 = Multiplicity::new(5.0, 2, 0.0).unwrap();
        let v = weight_density(&[0.7, 0.7], &k2).unwrap();
        assert!(v.abs() < 1e-30);
        // sin factor kills t_q = 0
        let v = weight_density(&[0.7, 0.0], &k2).unwrap();
        assert_eq!(v, 0.0);
        // domain enforcement
        assert!(weight_density(&[0.2, 0.5], &k2).is_err());
    }

    #[test]
    fn alcove_quadrature_rank_one_beta_integral() {
        let grid = alcove_quadrature(1, 32).unwrap();
        // ∫_0^{π/2} sin t cos t dt = 1/2
        let got = grid.integrate_symmetric(|t| t[0].sin() * t[0].cos());
        assert!((got - 0.5).abs() < 1e-12);
        // ∫ δ_k for q=1, p=2, l=0: ∫ sin³ t cos t dt = 1/4
        let k = Multiplicity::new(2.0, 1, 0.0).unwrap();
        let got = grid.integrate_symmetric(|t| weight_density_unchecked(t, &k));
        assert!((got - 0.25).abs() < 1e-12);
    }

    #[test]
    fn alcove_quadrature_exactness_in_cos2t() {
        // polynomials in cos 2t_j of total degree <= order, at order 64
        let grid = alcove_quadrature(1, 64).unwrap();
        for deg in [0usize, 5, 17, 40, 64] {
            let got = grid.integrate_symmetric(|t| (2.0 * t[0]).cos().powi(deg as i32));
            // reference by high-order rule
            let fine = alcove_quadrature(1, 128).unwrap();
            let want = fine.integrate_symmetric(|t| (2.0 * t[0]).cos().powi(deg as i32));
            let denom = want.abs().max(1.0);
            assert!(((got - want) / denom).abs() <= 1e-10, "deg {deg}");
        }
        assert!(alcove_quadrature(4, 16).is_err());
        assert!(alcove_quadrature_with(4, 8, true).is_ok());
        assert!(alcove_quadrature(1, 4).is_err());
    }

    #[test]
    fn orbit_sums_basic() {
        let m0 = OrbitSum::new(&dw(&[0, 0]));
        assert_eq!(m0.eval(&[0.3, 0.1]), 1.0);
        assert_eq!(m0.at_zero(), 1.0);
        let m = OrbitSum::new(&dw(&[2]));
        let t = 0.37;
        assert!((m.eval(&[t]) - 2.0 * (2.0 * t).cos()).abs() < 1e-15);
        // orbit of (2,0) has 4 elements, of (2,2) has 4, of (4,2) has 8
        assert_eq!(OrbitSum::new(&dw(&[2, 0])).at_zero(), 4.0);
        assert_eq!(OrbitSum::new(&dw(&[2, 2])).at_zero(), 4.0);
        assert_eq!(OrbitSum::new(&dw(&[4, 2])).at_zero(), 8.0);
    }

    #[test]
    fn build_basis_rank_one_matches_classical_jacobi() {
        // R_(2n)(k;θ) = R_n^(α,β)(cos 2θ), α = k1+k2-1/2, β = k2-1/2
        for &(p, l) in &[(2.0, 0.0), (3.0, 1.0), (4.5, 2.0)] {
            let k = Multiplicity::new(p, 1, l).unwrap();
            let table = build_basis(&k, 8, 64).unwrap();
            let alpha = k.k1 + k.k2 - 0.5;
            let beta = k.k2 - 0.5;
            let mut max_err = 0.0f64;
            for n in 0..=4u32 {
                let lam = dw(&[2 * n]);
                for g in 0..=100 {
                    let theta = std::f64::consts::FRAC_PI_2 * g as f64 / 100.0;
                    let ours = table.eval_r(&lam, &[theta]).unwrap();
                    let classical =
                        eval_jacobi(n, alpha, beta, (2.0 * theta).cos()).unwrap();
                    max_err = max_err.max((ours - classical).abs());
                }
            }
            assert!(max_err <= 1e-8, "p={p} l={l}: max err {max_err:e}");
        }
    }

    #[test]
    fn build_basis_constant_and_normalization() {
        let k = Multiplicity::new(5.0, 2, 1.0).unwrap();
        let table = build_basis(&k, 4, 64).unwrap();
        // λ = 0 is the constant polynomial 1
        for t in [[0.3, 0.1], [1.2, 0.7]] {
            assert!((table.eval_r(&dw(&[0, 0]), &t).unwrap() - 1.0).abs() < 1e-14);
        }
        // R_λ(0) = 1 for every λ
        for lam in table.lambdas() {
            let v = table.eval_r(lam, &[0.0, 0.0]).unwrap();
            assert!((v - 1.0).abs() <= 1e-10, "{lam}: {v}");
        }
    }

    #[test]
    fn gram_matrix_is_diagonal() {
        let k = Multiplicity::new(3.5, 2, 1.0).unwrap();
        let table = build_basis(&k, 4, 64).unwrap();
        let grid = alcove_quadrature(2, 64).unwrap();
        let n = table.lambdas().len();
        let mut gram = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                gram[i][j] = grid.integrate_symmetric(|t| {
                    table.eval_by_index(i, t)
                        * table.eval_by_index(j, t)
                        * weight_density_unchecked(t, &k)
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                let rel = gram[i][j].abs() / (gram[i][i] * gram[j][j]).sqrt();
                assert!(rel <= 1e-8, "({i},{j}): rel {rel:e}");
            }
        }
    }

    #[test]
    fn leading_coefficient_matches_c_function() {
        for &(p, q, l) in &[(3.0, 1usize, 0.0), (3.0, 1, 1.0), (5.0, 2, 0.0), (5.0, 2, 2.0)] {
            let k = Multiplicity::new(p, q, l).unwrap();
            let table = build_basis(&k, 4, 64).unwrap();
            let rho_k = k.rho();
            for lam in table.lambdas() {
                let shifted: Vec<f64> = lam
                    .0
                    .iter()
                    .zip(&rho_k)
                    .map(|(&a, &r)| a as f64 + r)
                    .collect();
                let c = c_function(&shifted, &k).unwrap();
                let lc = table.leading_coefficient(lam).unwrap();
                let rel = ((lc - c) / c).abs();
                assert!(rel <= 1e-6, "p={p} q={q} l={l} λ={lam}: lc {lc} vs c {c}");
            }
        }
    }

    #[test]
    fn rank_one_leading_coefficient_against_series_expansion() {
        // independent route: expand the terminating series into x-powers,
        // convert to the orbit-sum normalization by 2^(-n)
        let (p, l) = (3.0, 1.0);
        let k = Multiplicity::new(p, 1, l).unwrap();
        let table = build_basis(&k, 8, 64).unwrap();
        let alpha = k.k1 + k.k2 - 0.5;
        let beta = k.k2 - 0.5;
        for n in 1..=4u32 {
            // leading x-coefficient of R_n^(α,β): Π_k (α+β+n+1+k)(n-k)/((α+1+k)(k+1)) · 2^(-n)
            let mut lc_x = 1.0;
            for kk in 0..n {
                let kf = kk as f64;
                lc_x *= (alpha + beta + n as f64 + 1.0 + kf) * (n as f64 - kf)
                    / ((alpha + 1.0 + kf) * (kf + 1.0));
            }
            lc_x /= 2f64.powi(n as i32);
            let lc_m = lc_x / 2f64.powi(n as i32);
            let got = table.leading_coefficient(&dw(&[2 * n])).unwrap();
            assert!(
                ((got - lc_m) / lc_m).abs() < 1e-9,
                "n={n}: {got} vs {lc_m}"
            );
        }
    }

    #[test]
    fn doubling_quadrature_order_is_stable() {
        let k = Multiplicity::new(5.0, 2, 1.0).unwrap();
        let t32 = build_basis(&k, 4, 32).unwrap();
        let t64 = build_basis(&k, 4, 64).unwrap();
        for lam in t32.lambdas() {
            for t in [[0.9, 0.4], [1.3, 0.2], [0.6, 0.55]] {
                let a = t32.eval_r(lam, &t).unwrap();
                let b = t64.eval_r(lam, &t).unwrap();
                assert!((a - b).abs() <= 1e-9, "{lam}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn finer_grid_redo_matches() {
        let k = Multiplicity::new(5.0, 2, 1.0).unwrap();
        let coarse = build_basis(&k, 4, 64).unwrap();
        let fine = build_basis(&k, 4, 96).unwrap();
        let lam = dw(&[2, 0]);
        for t in [[1.0, 0.3], [0.8, 0.77], [1.5, 0.1]] {
            let a = coarse.eval_r(&lam, &t).unwrap();
            let b = fine.eval_r(&lam, &t).unwrap();
            assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn eval_r_weyl_invariance() {
        let k = Multiplicity::new(5.0, 2, 0.0).unwrap();
        let table = build_basis(&k, 4, 64).unwrap();
        let lam = dw(&[4, 2]);
        let t = [1.1, 0.4];
        let base = table.eval_r(&lam, &t).unwrap();
        // permutations and sign flips of the argument
        for alt in [[0.4, 1.1], [-1.1, 0.4], [1.1, -0.4], [-0.4, -1.1]] {
            let v = table.eval_r(&lam, &alt).unwrap();
            assert!((v - base).abs() <= 1e-12);
        }
    }

    #[test]
    fn multiplicity_continuity_smoke() {
        // second difference quotient in p stays bounded (rational dependence)
        let lam = dw(&[4, 2]);
        let t = [1.0, 0.5];
        let h = 1e-3;
        let f = |p: f64| {
            let k = Multiplicity::new(p, 2, 1.0).unwrap();
            build_basis(&k, 4, 48).unwrap().eval_r(&lam, &t).unwrap()
        };
        let d2 = (f(5.0 + h) - 2.0 * f(5.0) + f(5.0 - h)) / (h * h);
        assert!(d2.abs() <= 10.0, "second difference {d2}");
    }

    #[test]
    fn boundedness_report_at_origin() {
        // The paper does not state |R_λ| <= 1 on the alcove; report (not
        // assert) whether the 50-point grid maximum sits at t = 0.
        let k = Multiplicity::new(5.0, 2, 1.0).unwrap();
        let table = build_basis(&k, 4, 48).unwrap();
        let mut violations = Vec::new();
        for lam in table.lambdas() {
            let mut max_val = 0.0f64;
            for a in 0..50 {
                let t1 = std::f64::consts::FRAC_PI_2 * (a as f64 + 0.5) / 50.0;
                let t2 = t1 * (a as f64 / 50.0);
                let v = table.eval_r(lam, &[t1, t2.min(t1)]).unwrap().abs();
                max_val = max_val.max(v);
            }
            if max_val > 1.0 + 1e-9 {
                violations.push((lam.clone(), max_val));
            }
        }
        for (lam, v) in &violations {
            eprintln!("note: |R_{lam}| reaches {v} > 1 away from the origin");
        }
    }

    #[test]
    fn serialization_round_trip_is_byte_exact() {
        let k = Multiplicity::new(3.5, 2, 1.0).unwrap();
        let table = build_basis(&k, 4, 32).unwrap();
        let json1 = table.to_json();
        let loaded = PolyTable::from_json(&json1).unwrap();
        let json2 = loaded.to_json();
        assert_eq!(json1, json2);
        // evaluations agree exactly
        let lam = dw(&[2, 2]);
        let t = [0.9, 0.2];
        assert_eq!(
            table.eval_r(&lam, &t).unwrap(),
            loaded.eval_r(&lam, &t).unwrap()
        );
    }

    #[test]
    fn missing_weight_is_reported() {
        let k = Multiplicity::new(3.0, 1, 0.0).unwrap();
        let table = build_basis(&k, 4, 32).unwrap();
        assert!(matches!(
            table.eval_r(&dw(&[8]), &[0.3]),
            Err(HopolyError::MissingWeight(_))
        ));
    }
}
