//! Data-parallel vs sequential Monte Carlo throughput.
//!
//! The estimators are deterministic in the seed, so both paths produce the
//! same numbers; this suite measures what the rayon fan-out buys on the
//! convolution sampler and on the Haar radial integral.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

use conehyper::hopoly::{build_basis, DominantWeight, Multiplicity};
use conehyper::hypergroup::{convolve, eval_character, ConePoint, ConvEngine, HaarEngine};
use conehyper::McConfig;

fn bench_convolution(c: &mut Criterion) {
    let p = 5.0;
    let k = Multiplicity::new(p, 2, 1.0).unwrap();
    let table = build_basis(&k, 4, 48).unwrap();
    let lam = DominantWeight::new(vec![2, 0]).unwrap();
    let x = ConePoint::new(&[1.1, 0.5], Complex64::from_polar(1.0, 0.7)).unwrap();
    let y = ConePoint::new(&[0.9, 0.3], Complex64::from_polar(1.0, -1.1)).unwrap();
    let mut group = c.benchmark_group("convolve_integrate_q2");
    group.sample_size(10);
    for (label, parallel) in [("sequential", false), ("parallel", true)] {
        group.bench_function(BenchmarkId::new(label, 100_000u64), |b| {
            b.iter(|| {
                let mut cfg = McConfig::new(100_000, 17);
                cfg.parallel = parallel;
                let m = convolve(&x, &y, p, cfg, ConvEngine::MonteCarlo).unwrap();
                let est =
                    m.integrate(|pt| eval_character(&table, &lam, 1.0, p, pt).unwrap());
                black_box(est.value_re)
            })
        });
    }
    group.finish();
}

fn bench_haar_radial(c: &mut Criterion) {
    let p = 5.0;
    let mut group = c.benchmark_group("haar_integrate_q2");
    group.sample_size(10);
    for (label, parallel) in [("sequential", false), ("parallel", true)] {
        group.bench_function(BenchmarkId::new(label, 20_000u64), |b| {
            b.iter(|| {
                let mut cfg = McConfig::new(20_000, 23);
                cfg.parallel = parallel;
                let est = conehyper::hypergroup::haar_integrate(
                    p,
                    2,
                    |pt| Complex64::new(pt.radii().iter().product::<f64>(), 0.0),
                    HaarEngine::MonteCarlo,
                    cfg,
                )
                .unwrap();
                black_box(est.value_re)
            })
        });
    }
    group.finish();
}

fn bench_table_build(c: &mut Criterion) {
    c.bench_function("build_basis_q2_deg4_order48", |b| {
        b.iter(|| {
            let k = Multiplicity::new(3.5, 2, 1.0).unwrap();
            black_box(build_basis(&k, 4, 48).unwrap())
        })
    });
}

criterion_group!(benches, bench_convolution, bench_haar_radial, bench_table_build);
criterion_main!(benches);
