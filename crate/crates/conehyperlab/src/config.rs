//! Run configuration: a JSON config file mirrored by command-line flags,
//! with flags taking precedence and CONEHYPERLAB_SEED as the seed fallback.

use std::path::PathBuf;

use conehyper::BallScheme;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub q: usize,
    pub p: f64,
    pub l: f64,
    pub max_deg: u32,
    pub quad_order: usize,
    pub n_samples: u64,
    pub seed: Option<u64>,
    pub scheme: BallScheme,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    /// 0 = available parallelism
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 1,
            p: 3.0,
            l: 0.0,
            max_deg: 8,
            quad_order: 64,
            n_samples: 2_000_000,
            seed: None,
            scheme: BallScheme::SvdParam,
            out_dir: PathBuf::from("out"),
            format: OutputFormat::Json,
            workers: 0,
        }
    }
}

impl RunConfig {
    /// Resolve the seed: explicit value, else CONEHYPERLAB_SEED, else a
    /// fixed documented default.
    pub fn resolved_seed(&self) -> u64 {
        if let Some(s) = self.seed {
            return s;
        }
        if let Ok(env) = std::env::var("CONEHYPERLAB_SEED") {
            if let Ok(v) = env.trim().parse::<u64>() {
                return v;
            }
        }
        0x5EED_CAFE
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.q == 0 || self.q > 3 {
            return Err(format!("q must lie in 1..=3, got {}", self.q));
        }
        if !(self.p > 2.0 * self.q as f64 - 1.0) {
            return Err(format!(
                "the construction requires p > 2q-1; got p = {}, q = {} (need p > {})",
                self.p,
                self.q,
                2.0 * self.q as f64 - 1.0
            ));
        }
        if self.n_samples < 1_000 {
            return Err(format!(
                "n_samples must be at least 10^3, got {}",
                self.n_samples
            ));
        }
        if self.quad_order < 8 {
            return Err(format!("quad_order must be >= 8, got {}", self.quad_order));
        }
        Ok(())
    }
}
