//! Parallel vs sequential timings for the data-parallel hot paths: trace
//! enumeration, the O(n²) closed-form pair sum, and a Theorem-1 sweep.
//!
//! With the default `parallel` feature each case runs once on the default
//! rayon pool and once pinned to a single thread; `--no-default-features`
//! benches the pure sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geodesic_lab::arithmetic::length_spectrum;
use geodesic_lab::meansquare::{ms_r_closed, sweep, SweepGrid, Theorem};
use geodesic_lab::spectrum::SpectralTable;

#[cfg(feature = "parallel")]
fn single_thread_pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
}

/// Synthetic nondecreasing table with generic spacing, n entries up to t_max.
fn synthetic_table(n: usize, t_max: f64) -> SpectralTable {
    let mut params = Vec::with_capacity(n);
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut t = 2.0;
    let mean_gap = (t_max - 2.0) / n as f64;
    for _ in 0..n {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let u = (state >> 11) as f64 / (1u64 << 53) as f64;
        t += mean_gap * (0.1 + 1.8 * u);
        params.push(t);
    }
    SpectralTable::from_params(params, "bench").unwrap()
}

fn bench_length_spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("length_spectrum");
    group.sample_size(10);
    for &x in &[1.0e5, 1.0e6] {
        group.bench_with_input(BenchmarkId::new("default", x as u64), &x, |b, &x| {
            b.iter(|| length_spectrum(x).unwrap())
        });
        #[cfg(feature = "parallel")]
        {
            let pool = single_thread_pool();
            group.bench_with_input(BenchmarkId::new("one-thread", x as u64), &x, |b, &x| {
                b.iter(|| pool.install(|| length_spectrum(x).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_pair_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("ms_r_closed");
    group.sample_size(10);
    for &n in &[1000usize, 4000] {
        let table = synthetic_table(n, 250.0);
        let t_max = table.t_max();
        group.bench_with_input(BenchmarkId::new("default", n), &table, |b, table| {
            b.iter(|| ms_r_closed(1.0e5, t_max, table).unwrap())
        });
        #[cfg(feature = "parallel")]
        {
            let pool = single_thread_pool();
            group.bench_with_input(BenchmarkId::new("one-thread", n), &table, |b, table| {
                b.iter(|| pool.install(|| ms_r_closed(1.0e5, t_max, table).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_t1_sweep(c: &mut Criterion) {
    let spectrum = length_spectrum(2.0e5).unwrap();
    let grid = SweepGrid {
        a_min: 1.0e3,
        a_max: 1.0e5,
        points: 8,
        t_values: vec![],
        eta_points: 0,
    };
    let mut group = c.benchmark_group("t1_sweep");
    group.sample_size(10);
    group.bench_function("default", |b| {
        b.iter(|| sweep(Theorem::T1, &grid, Some(&spectrum), None).unwrap())
    });
    #[cfg(feature = "parallel")]
    {
        let pool = single_thread_pool();
        group.bench_function("one-thread", |b| {
            b.iter(|| pool.install(|| sweep(Theorem::T1, &grid, Some(&spectrum), None).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_length_spectrum, bench_pair_sum, bench_t1_sweep);
criterion_main!(benches);
