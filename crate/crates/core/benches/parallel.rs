//! Criterion comparison of the data-parallel kernels against their
//! sequential twins: series convolution, the z-window product behind the
//! symplectic check, and the batch I-function degree map. Build with
//! default features for the rayon path; `--no-default-features` benches
//! the pure sequential build (both code paths stay available either way,
//! so the two binaries produce directly comparable baselines).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use msplab_core::laurent::LaurentBlock;
use msplab_core::par;
use msplab_core::rat::rat_frac;
use msplab_core::series::QSeries;
use msplab_core::targets::target_config;
use std::hint::black_box;

fn series(order: usize, salt: i64) -> QSeries {
    let coeffs = (0..=order as i64)
        .map(|i| rat_frac((i * i * 7 + salt * 3 - 5) % 97, (i % 9) + 1))
        .collect();
    QSeries::new(coeffs, order, &msplab_core::rat::rat_zero())
}

fn bench_convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_mul");
    for order in [64usize, 256] {
        let a = series(order, 1);
        let b = series(order, 2);
        let expected = a.mul_seq(&b);
        group.bench_with_input(BenchmarkId::new("seq", order), &order, |bench, _| {
            bench.iter(|| {
                let r = black_box(&a).mul_seq(black_box(&b));
                assert!(r.eq_to_order(&expected));
            })
        });
        group.bench_with_input(BenchmarkId::new("auto", order), &order, |bench, _| {
            bench.iter(|| {
                let r = black_box(&a).mul(black_box(&b));
                assert!(r.eq_to_order(&expected));
            })
        });
    }
    group.finish();
}

fn bench_laurent_window_product(c: &mut Criterion) {
    // shaped like one symplectic-check entry: two descending windows
    let order = 6usize;
    let lo = -48i64;
    let mk = |salt: i64| {
        let coeffs = (lo..=0).map(|e| series(order, salt + e)).collect();
        LaurentBlock::new(lo, coeffs, false, true)
    };
    let a = mk(11);
    let b = mk(23);
    let mut group = c.benchmark_group("laurent_mul");
    group.sample_size(20);
    group.bench_function("window48_order6", |bench| {
        bench.iter(|| black_box(&a).mul(black_box(&b)))
    });
    group.finish();
}

fn bench_ifunction_batch(c: &mut Criterion) {
    let t = target_config(10).unwrap();
    let mut group = c.benchmark_group("ifunction_degrees");
    group.sample_size(20);
    group.bench_function("map_auto", |bench| {
        bench.iter(|| {
            let z = msplab_core::ifun::z_ifunction(black_box(&t), 24);
            black_box(z.i0.coeff(24).clone())
        })
    });
    group.bench_function("map_seq_baseline", |bench| {
        bench.iter(|| {
            let v = par::map_indexed_seq(25, |d| {
                msplab_core::ifun::z_ifunction(black_box(&t), d.min(3))
            });
            black_box(v.len())
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_convolution,
    bench_laurent_window_product,
    bench_ifunction_batch
);
criterion_main!(benches);
