//! Deterministic, optionally data-parallel Monte Carlo driver.
//!
//! A run of n samples is split into fixed chunks; chunk c draws from its own
//! counter-based stream (`ChaCha8`, stream id = c) of the master seed, and
//! partial sums are reduced in chunk order. The result is bit-identical no
//! matter how many workers execute the chunks — the `parallel` feature and
//! the runtime flag only change who computes them.
//!
//! Standard errors come from a delete-one-chunk jackknife of the
//! self-normalized ratio Σwf / Σw.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use crate::matcore::BallScheme;

/// Sampling configuration shared by every Monte Carlo estimator.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct McConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub scheme: BallScheme,
    /// Runtime switch; only effective when compiled with the `parallel`
    /// feature. Results do not depend on it.
    pub parallel: bool,
}

impl McConfig {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        McConfig {
            n_samples,
            seed,
            scheme: BallScheme::SvdParam,
            parallel: true,
        }
    }

    pub fn with_scheme(mut self, scheme: BallScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_stream_offset(mut self, offset: u64) -> Self {
        self.seed = split_seed(self.seed, offset);
        self
    }
}

/// Derive an independent 64-bit seed for a sub-job (splitmix64 step).
pub fn split_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A weighted estimate with jackknife standard error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub value_re: f64,
    pub value_im: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl Estimate {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }

    pub fn scaled(mut self, s: f64) -> Estimate {
        self.value_re *= s;
        self.value_im *= s;
        self.stderr *= s.abs();
        self
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkAccum {
    sum_wf: Complex64,
    sum_w: f64,
}

fn chunk_layout(n: u64) -> (u64, u64) {
    let chunk_size = (n.div_ceil(128)).max(64);
    let chunks = n.div_ceil(chunk_size);
    (chunk_size, chunks)
}

fn run_chunk<F>(seed: u64, chunk: u64, count: u64, sampler: &F) -> ChunkAccum
where
    F: Fn(&mut ChaCha8Rng) -> (Complex64, f64),
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk + 1);
    let mut acc = ChunkAccum::default();
    for _ in 0..count {
        let (f, w) = sampler(&mut rng);
        acc.sum_wf += w * f;
        acc.sum_w += w;
    }
    acc
}

fn collect_chunks<F>(n: u64, seed: u64, parallel: bool, sampler: &F) -> Vec<ChunkAccum>
where
    F: Fn(&mut ChaCha8Rng) -> (Complex64, f64) + Sync,
{
    let (chunk_size, chunks) = chunk_layout(n);
    let count_of = |c: u64| -> u64 {
        let start = c * chunk_size;
        (n - start).min(chunk_size)
    };
    #[cfg(feature = "parallel")]
    {
        if parallel {
            use rayon::prelude::*;
            return (0..chunks)
                .into_par_iter()
                .map(|c| run_chunk(seed, c, count_of(c), sampler))
                .collect();
        }
    }
    let _ = parallel;
    (0..chunks)
        .map(|c| run_chunk(seed, c, count_of(c), sampler))
        .collect()
}

/// Self-normalized importance-sampling estimate Σwf / Σw with jackknife
/// standard error over chunks.
pub fn estimate_ratio<F>(n: u64, seed: u64, parallel: bool, sampler: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> (Complex64, f64) + Sync,
{
    let chunks = collect_chunks(n, seed, parallel, &sampler);
    let total_wf: Complex64 = chunks.iter().map(|c| c.sum_wf).sum();
    let total_w: f64 = chunks.iter().map(|c| c.sum_w).sum();
    let value = total_wf / total_w;
    let m = chunks.len();
    let stderr = if m < 2 {
        0.0
    } else {
        let leave_outs: Vec<Complex64> = chunks
            .iter()
            .map(|c| {
                let w = total_w - c.sum_w;
                if w == 0.0 {
                    value
                } else {
                    (total_wf - c.sum_wf) / w
                }
            })
            .collect();
        let mean: Complex64 = leave_outs.iter().sum::<Complex64>() / m as f64;
        let var: f64 = leave_outs
            .iter()
            .map(|r| (r - mean).norm_sqr())
            .sum::<f64>()
            * (m as f64 - 1.0)
            / m as f64;
        var.sqrt()
    };
    Estimate {
        value_re: value.re,
        value_im: value.im,
        stderr,
        n_samples: n,
        seed,
    }
}

/// Plain-mean estimate of a (possibly density-weighted) integrand: the
/// sampler returns the full sample value, weight 1 is implied.
pub fn estimate_mean<F>(n: u64, seed: u64, parallel: bool, sampler: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> Complex64 + Sync,
{
    estimate_ratio(n, seed, parallel, |rng| (sampler(rng), 1.0))
}

/// Ordered, optionally parallel map over an index range; the output order is
/// the index order regardless of scheduling.
pub fn indexed_map<T, F>(n: u64, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    (0..n).map(f).collect()
}
