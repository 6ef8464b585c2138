//! conehyperlab: build Heckman-Opdam polynomial tables for the disk
//! hypergroups on the cone X_q, run the identity checker suites, and scan
//! the signed product-formula kernel.
//!
//! Exit codes: 0 success, 1 invalid configuration or usage, 2 table
//! construction is ill-conditioned, 3 at least one check failed.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conehyper::hopoly::{build_basis, c_function, HopolyError, Multiplicity};
use conehyper::verify::{
    positivity_scan, reports_to_csv, reports_to_json, run_suite, CheckReport, PositivityReport,
    Suite, SuiteConfig,
};
use conehyper::{BallScheme, McConfig};
use config::{OutputFormat, RunConfig};

const VERSION: &str = concat!("conehyperlab ", env!("CARGO_PKG_VERSION"));

#[derive(Parser)]
#[command(name = "conehyperlab", version, about = "Disk-hypergroup tables and identity checkers on the cone X_q")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build and serialize a polynomial table; print leading coefficients
    /// and c-function cross-check residuals.
    Build(CommonArgs),
    /// Run a checker family over its documented default grid.
    Verify(VerifyArgs),
    /// Scan the signed kernel of the real-exponent product formula over a
    /// (p, l) grid; exploratory output, always exits 0 on valid config.
    ScanPositivity(ScanArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON config file mirroring the flags; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    l: Option<f64>,
    #[arg(long)]
    max_deg: Option<u32>,
    #[arg(long)]
    quad_order: Option<usize>,
    /// Monte Carlo sample count per estimate
    #[arg(long)]
    samples: Option<u64>,
    /// Master seed (fallback: CONEHYPERLAB_SEED, then a fixed default)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    scheme: Option<BallSchemeArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads (0 = available parallelism)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// cone | jacobi | rank1 | disk | koornwinder | kernel | ortho | axioms | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// comma-separated p values (default: the configured p)
    #[arg(long)]
    grid_p: Option<String>,
    /// comma-separated l values (default: 0, 0.5, 1, 1.5, 2)
    #[arg(long)]
    grid_l: Option<String>,
    /// alcove cells per coordinate
    #[arg(long, default_value_t = 32)]
    resolution: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum BallSchemeArg {
    Rejection,
    SvdParam,
}

impl From<BallSchemeArg> for BallScheme {
    fn from(v: BallSchemeArg) -> BallScheme {
        match v {
            BallSchemeArg::Rejection => BallScheme::Rejection,
            BallSchemeArg::SvdParam => BallScheme::SvdParam,
        }
    }
}

fn load_config(args: &CommonArgs) -> Result<RunConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| format!("bad config {}: {e}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(q) = args.q {
        cfg.q = q;
    }
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(l) = args.l {
        cfg.l = l;
    }
    if let Some(d) = args.max_deg {
        cfg.max_deg = d;
    }
    if let Some(o) = args.quad_order {
        cfg.quad_order = o;
    }
    if let Some(n) = args.samples {
        cfg.n_samples = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = Some(s);
    }
    if let Some(s) = args.scheme {
        cfg.scheme = s.into();
    }
    if let Some(o) = &args.out {
        cfg.out_dir = o.clone();
    }
    if let Some(f) = args.format {
        cfg.format = f;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    if cfg.workers > 0 {
        // best effort: the global pool can only be sized once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build_global();
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Build(args) => cmd_build(&args),
        Cmd::Verify(args) => cmd_verify(&args),
        Cmd::ScanPositivity(args) => cmd_scan(&args),
    }
}

fn config_banner(cfg: &RunConfig, seed: u64) {
    println!(
        "{VERSION} | seed {seed} | config {}",
        serde_json::to_string(cfg).expect("config serializes")
    );
}

fn write_file(path: &Path, content: &str) -> Result<(), String> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    }
    std::fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

// ── build ───────────────────────────────────────────────────────────

fn cmd_build(args: &CommonArgs) -> ExitCode {
    let cfg = match load_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let seed = cfg.resolved_seed();
    config_banner(&cfg, seed);
    let k = match Multiplicity::new(cfg.p, cfg.q, cfg.l) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let table = match build_basis(&k, cfg.max_deg, cfg.quad_order) {
        Ok(t) => t,
        Err(e @ HopolyError::IllConditioned { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let rho = k.rho();
    println!("lambda        leading coeff      c(λ+ρ,k)           rel residual");
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for lam in table.lambdas() {
        let lc = table.leading_coefficient(lam).expect("λ from the table");
        let shifted: Vec<f64> = lam
            .0
            .iter()
            .zip(&rho)
            .map(|(&a, &r)| a as f64 + r)
            .collect();
        let c = c_function(&shifted, &k).expect("regular multiplicities");
        let rel = ((lc - c) / c).abs();
        worst = worst.max(rel);
        println!("{:<12}  {:<17.10e}  {:<17.10e}  {rel:.3e}", lam.to_string(), lc, c);
        rows.push(serde_json::json!({
            "lambda": lam.0,
            "leading_coefficient": lc,
            "c_function": c,
            "rel_residual": rel,
        }));
    }
    println!("worst c-function residual: {worst:.3e}");
    let table_path = cfg
        .out_dir
        .join(format!("table_q{}_p{}_l{}.json", cfg.q, cfg.p, cfg.l));
    if let Err(e) = write_file(&table_path, &table.to_json()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let report = serde_json::json!({
        "version": VERSION,
        "config": &cfg,
        "seed": seed,
        "table_file": table_path,
        "rows": rows,
        "worst_rel_residual": worst,
    });
    let report_path = cfg.out_dir.join("build_report.json");
    if let Err(e) = write_file(
        &report_path,
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    ) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    println!("table written to {}", table_path.display());
    ExitCode::SUCCESS
}

// ── verify ──────────────────────────────────────────────────────────

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("usage: conehyperlab verify --suite cone|jacobi|rank1|disk|koornwinder|kernel|ortho|axioms|all [flags]");
            return ExitCode::from(1);
        }
    };
    let cfg = match load_config(&args.common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let seed = cfg.resolved_seed();
    config_banner(&cfg, seed);
    let suite_cfg = SuiteConfig {
        q: cfg.q,
        p: cfg.p,
        l: cfg.l,
        max_deg: cfg.max_deg,
        quad_order: cfg.quad_order,
        n_samples: cfg.n_samples,
        seed,
        scheme: cfg.scheme,
        parallel: true,
    };
    let reports = match run_suite(suite, &suite_cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<28} err {:.3e}  tol {:.3e}",
            r.name, r.abs_err, r.tolerance
        );
    }
    let n_failed = reports.iter().filter(|r| !r.passed).count();
    println!(
        "{} checks, {} failed (suite {})",
        reports.len(),
        n_failed,
        args.suite
    );
    if let Err(e) = write_reports(&cfg, seed, &args.suite, &reports) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if n_failed > 0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn write_reports(
    cfg: &RunConfig,
    seed: u64,
    suite: &str,
    reports: &[CheckReport],
) -> Result<(), String> {
    match cfg.format {
        OutputFormat::Json => {
            let doc = format!(
                "{{\n\"version\": {},\n\"config\": {},\n\"seed\": {},\n\"reports\": {}\n}}\n",
                serde_json::to_string(VERSION).unwrap(),
                serde_json::to_string(cfg).unwrap(),
                seed,
                reports_to_json(reports)
            );
            write_file(&cfg.out_dir.join(format!("reports_{suite}.json")), &doc)
        }
        OutputFormat::Csv => {
            let doc = format!(
                "# {} seed={} config={}\n{}",
                VERSION,
                seed,
                serde_json::to_string(cfg).unwrap(),
                reports_to_csv(reports)
            );
            write_file(&cfg.out_dir.join(format!("reports_{suite}.csv")), &doc)
        }
    }
}

// ── scan-positivity ─────────────────────────────────────────────────

fn parse_grid(text: &Option<String>, default: &[f64]) -> Result<Vec<f64>, String> {
    match text {
        None => Ok(default.to_vec()),
        Some(t) => t
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad grid value '{s}': {e}"))
            })
            .collect(),
    }
}

fn cmd_scan(args: &ScanArgs) -> ExitCode {
    let cfg = match load_config(&args.common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let seed = cfg.resolved_seed();
    config_banner(&cfg, seed);
    let grid_p = match parse_grid(&args.grid_p, &[cfg.p]) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let grid_l = match parse_grid(&args.grid_l, &[0.0, 0.5, 1.0, 1.5, 2.0]) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let (t, t2): (Vec<f64>, Vec<f64>) = match cfg.q {
        1 => (vec![1.0], vec![0.6]),
        2 => (vec![1.1, 0.5], vec![0.9, 0.3]),
        _ => (vec![1.2, 0.8, 0.4], vec![1.0, 0.6, 0.2]),
    };
    let mut csv = String::from("p,l,t,t2,min_kernel,neg_mass_fraction,noise_floor,n_samples,seed\n");
    let mut hists: Vec<PositivityReport> = Vec::new();
    for (row, (&p, &l)) in grid_p
        .iter()
        .flat_map(|p| grid_l.iter().map(move |l| (p, l)))
        .enumerate()
    {
        if !(p > 2.0 * cfg.q as f64 - 1.0) {
            eprintln!("skipping p = {p}: requires p > 2q-1");
            continue;
        }
        let mc = McConfig {
            n_samples: cfg.n_samples.min(500_000),
            seed: conehyper::mc::split_seed(seed, row as u64),
            scheme: cfg.scheme,
            parallel: true,
        };
        let rep = match positivity_scan(p, cfg.q, l, &t, &t2, args.resolution, mc) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        };
        println!(
            "p={p} l={l}: min cell {:+.3e}, negative mass fraction {:.3e} (noise floor {:.3e})",
            rep.min_cell, rep.neg_mass_fraction, rep.noise_floor
        );
        let fmt_t = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            p,
            l,
            fmt_t(&t),
            fmt_t(&t2),
            rep.min_cell,
            rep.neg_mass_fraction,
            rep.noise_floor,
            rep.n_samples,
            rep.seed
        ));
        hists.push(rep);
    }
    let csv_doc = format!(
        "# {} seed={} config={}\n{csv}",
        VERSION,
        seed,
        serde_json::to_string(&cfg).unwrap()
    );
    if let Err(e) = write_file(&cfg.out_dir.join("positivity.csv"), &csv_doc) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    // plot-ready cell histograms
    let plot = serde_json::json!({
        "version": VERSION,
        "config": &cfg,
        "seed": seed,
        "scans": hists,
    });
    if let Err(e) = write_file(
        &cfg.out_dir.join("positivity_hist.json"),
        &serde_json::to_string_pretty(&plot).expect("scan serializes"),
    ) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    println!("scan written to {}", cfg.out_dir.join("positivity.csv").display());
    ExitCode::SUCCESS
}
