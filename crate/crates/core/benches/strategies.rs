use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use toroid_core::certificate::{check_certificate, check_certificate_with, odd_toroid_certificate};
use toroid_core::execution::Uncertainty;
use toroid_core::lp::search_cycles;
use toroid_core::parallel::map_slice;
use toroid_core::rational::ratio;
use toroid_core::sim::{skew_witness_with, ReferenceSync};
use toroid_core::topology::Toroid;
use toroid_core::Strategy;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn certificate_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_certificate");
    let u = Uncertainty::new(ratio(7, 3)).unwrap();
    let cert = odd_toroid_certificate(Toroid::new(9, 3).unwrap(), &u).unwrap();
    for (name, strategy) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, "k9m3"), &strategy, |b, &s| {
            b.iter(|| check_certificate_with(black_box(&cert), s))
        });
    }
    group.finish();
}

fn grid_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid_sweep");
    let mut grid = Vec::new();
    for k in [3, 5, 7, 9] {
        for m in 1..=3 {
            for u in [ratio(1, 1), ratio(1, 2), ratio(7, 3)] {
                grid.push((Toroid::new(k, m).unwrap(), Uncertainty::new(u).unwrap()));
            }
        }
    }
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| {
                map_slice(&grid, strategy, |(t, u)| {
                    check_certificate(&odd_toroid_certificate(*t, u).unwrap()).bound
                })
            })
        });
    }
    group.finish();
}

fn witness(c: &mut Criterion) {
    let mut group = c.benchmark_group("skew_witness");
    group.sample_size(10);
    let t = Toroid::new(7, 2).unwrap();
    let u = Uncertainty::one();
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| skew_witness_with(t, &u, &ReferenceSync, strategy).unwrap())
        });
    }
    group.finish();
}

fn cycle_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_cycles");
    group.sample_size(10);
    let t = Toroid::new(5, 1).unwrap();
    let u = Uncertainty::one();
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| search_cycles(t, &u, strategy).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, certificate_check, grid_sweep, witness, cycle_search);
criterion_main!(benches);
