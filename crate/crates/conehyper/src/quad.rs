//! One-dimensional quadrature building blocks.
//!
//! Three rules cover everything the crate integrates:
//!
//! * Gauss-Legendre for smooth (trigonometric-)polynomial integrands,
//! * tanh-sinh (double exponential) for integrands with integrable algebraic
//!   or logarithmic endpoint singularities, e.g. `(1-r^2)^(p-2)` with p < 2,
//! * the equispaced trapezoid rule on the circle, which is exact for
//!   trigonometric polynomials of degree below the node count.

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Newton iteration on the Legendre recurrence; nodes are accurate to a few
/// ulps for the orders used here (n <= 128).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|&xi| mid + half * xi).collect(),
        w.iter().map(|&wi| wi * half).collect(),
    )
}

/// tanh-sinh rule mapped to `(a, b)`; endpoints are never evaluated.
///
/// `level` sets the step h = 2^-level; level 6 (~770 nodes) integrates the
/// endpoint-singular densities in this crate to ~1e-13. Nodes close to an
/// endpoint are placed by their distance `1 - |tanh(u)| = 2/(e^(2u)+1)` to
/// avoid cancellation, so algebraic singularities keep full accuracy.
pub fn tanh_sinh_on(level: u32, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let h = 0.5f64.powi(level as i32);
    let half_pi = 0.5 * std::f64::consts::PI;
    // sinh(t_max) ~ 212 keeps endpoint distances and weights above underflow.
    let t_max = 6.056f64;
    let k_max = (t_max / h).floor() as i64;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut nodes = Vec::with_capacity((2 * k_max + 1) as usize);
    let mut weights = Vec::with_capacity((2 * k_max + 1) as usize);
    nodes.push(mid);
    weights.push(h * half_pi * half);
    for k in 1..=k_max {
        let t = k as f64 * h;
        let u = half_pi * t.sinh();
        // distance of tanh(u) from 1, computed without cancellation
        let d = 2.0 / ((2.0 * u).exp() + 1.0);
        let w = half * h * half_pi * t.cosh() / u.cosh().powi(2);
        if !(w.is_finite() && w > 0.0 && d > 0.0) {
            continue;
        }
        nodes.push(a + half * d);
        weights.push(w);
        nodes.push(b - half * d);
        weights.push(w);
    }
    (nodes, weights)
}

/// ∫_a^b f dx by tanh-sinh at a fixed level.
pub fn integrate_ts<F: FnMut(f64) -> f64>(level: u32, a: f64, b: f64, mut f: F) -> f64 {
    let (x, w) = tanh_sinh_on(level, a, b);
    let mut sum = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let v = f(*xi);
        if v.is_finite() {
            sum += wi * v;
        }
    }
    sum
}

/// ∫_0^1 f(x, 1-x) dx by tanh-sinh; the second argument carries the exact
/// distance to the right endpoint, so factors like (1-x)^γ with γ < 0 keep
/// full precision where 1.0 - x would cancel.
pub fn integrate_ts_unit<F: FnMut(f64, f64) -> f64>(level: u32, mut f: F) -> f64 {
    let h = 0.5f64.powi(level as i32);
    let half_pi = 0.5 * std::f64::consts::PI;
    let t_max = 6.056f64;
    let k_max = (t_max / h).floor() as i64;
    let mut sum = 0.0;
    let mut add = |x: f64, omx: f64, w: f64| {
        let v = f(x, omx);
        if v.is_finite() {
            sum += w * v;
        }
    };
    add(0.5, 0.5, h * half_pi * 0.5);
    for k in 1..=k_max {
        let t = k as f64 * h;
        let u = half_pi * t.sinh();
        let d = 1.0 / ((2.0 * u).exp() + 1.0);
        let w = 0.5 * h * half_pi * t.cosh() / u.cosh().powi(2);
        if !(w.is_finite() && w > 0.0 && d > 0.0) {
            continue;
        }
        add(d, 1.0 - d, w);
        add(1.0 - d, d, w);
    }
    sum
}

/// A tanh-sinh node carrying its exact distances to both interval ends.
#[derive(Debug, Clone, Copy)]
pub struct TsNode {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
    pub w: f64,
}

/// tanh-sinh nodes on `(a, b)` with endpoint distances, for integrands whose
/// singular factors must be evaluated from the distance rather than from x.
pub fn tanh_sinh_nodes_dist(level: u32, a: f64, b: f64) -> Vec<TsNode> {
    let h = 0.5f64.powi(level as i32);
    let half_pi = 0.5 * std::f64::consts::PI;
    let t_max = 6.056f64;
    let k_max = (t_max / h).floor() as i64;
    let len = b - a;
    let half = 0.5 * len;
    let mut out = Vec::with_capacity((2 * k_max + 1) as usize);
    out.push(TsNode {
        x: a + half,
        from_a: half,
        from_b: half,
        w: h * half_pi * half,
    });
    for k in 1..=k_max {
        let t = k as f64 * h;
        let u = half_pi * t.sinh();
        let d = len / ((2.0 * u).exp() + 1.0);
        let w = half * h * half_pi * t.cosh() / u.cosh().powi(2);
        if !(w.is_finite() && w > 0.0 && d > 0.0) {
            continue;
        }
        out.push(TsNode {
            x: a + d,
            from_a: d,
            from_b: len - d,
            w,
        });
        out.push(TsNode {
            x: b - d,
            from_a: len - d,
            from_b: d,
            w,
        });
    }
    out
}

/// Equispaced angles and the common weight for ∫_{-π}^{π} f(θ) dθ.
///
/// Exact for trigonometric polynomials of degree < n.
pub fn trapezoid_circle(n: usize) -> (Vec<f64>, f64) {
    let w = 2.0 * std::f64::consts::PI / n as f64;
    (
        (0..n)
            .map(|j| -std::f64::consts::PI + w * j as f64)
            .collect(),
        w,
    )
}
