use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ctwalk::dynamics::{equal_superposition, min_gap};
use ctwalk::hamiltonian::{hypercube_qubit_hamiltonian, marked_hamiltonian};
use ctwalk::protocols::{auto_gamma_grid, auto_horizon, measure_with, optimal_gamma, SearchSpace};
use ctwalk::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn gamma_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimal_gamma");
    group.sample_size(10);
    for n in [5usize, 7] {
        let space = SearchSpace::Hypercube { n };
        let grid = auto_gamma_grid(n);
        let horizon = auto_horizon(1 << n);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| optimal_gamma(&space, 1, black_box(&grid), horizon, 128, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn gap_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_gap");
    group.sample_size(10);
    for n in [6usize, 8] {
        let hw = hypercube_qubit_hamiltonian(n, 1.0 / n as f64).unwrap();
        let hp = marked_hamiltonian(1 << n, 0).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| min_gap(&hw, &hp, black_box(64), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn shots(c: &mut Criterion) {
    let mut group = c.benchmark_group("measure");
    let psi = equal_superposition(12).unwrap();
    for count in [1_000usize, 100_000] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, count), &count, |b, &k| {
                b.iter(|| measure_with(&psi, black_box(k), 7, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, gamma_sweep, gap_scan, shots);
criterion_main!(benches);
