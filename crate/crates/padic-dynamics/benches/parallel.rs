//! Compares the data-parallel batch map against its sequential baseline on
//! the two batch shapes the library actually runs: criterion verification
//! across a parameter grid, and separation certificates across a block of
//! vectors. `par::map` honours the `parallel` feature, so running this
//! suite with and without `--no-default-features` also measures the rayon
//! dispatch overhead itself.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use padic_dynamics::dynamics::{
    obstruction_witness_lambda_mu, verify_hc_criterion, SequenceGen,
};
use padic_dynamics::field::FieldConfig;
use padic_dynamics::ops::OperatorSpec;
use padic_dynamics::par;
use padic_dynamics::seq::{FinVector, IndexDomain};

fn field() -> FieldConfig {
    FieldConfig::new(5, 64).unwrap()
}

/// The hypercyclic cells of the valuation grid.
fn grid_cells() -> Vec<(i64, i64)> {
    (1..=3)
        .flat_map(|vl| (-3..=-1).map(move |vm| (vl, vm)))
        .collect()
}

fn verify_cell(cell: (i64, i64)) -> bool {
    let f = field();
    let lambda = f.p_power(cell.0);
    let mu = f.p_power(cell.1);
    let op = OperatorSpec::lambda_mu(lambda.clone(), mu.clone(), IndexDomain::Naturals);
    let inv = OperatorSpec::right_inverse_lambda_mu(lambda, mu).unwrap();
    verify_hc_criterion(&op, &inv, SequenceGen::identity(), 12, 6)
        .unwrap()
        .pass
}

fn bench_criterion_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("criterion-grid");
    group.sample_size(10);
    group.bench_function("par-map", |b| {
        b.iter(|| par::map(black_box(grid_cells()), verify_cell))
    });
    group.bench_function("seq-map", |b| {
        b.iter(|| par::map_seq(black_box(grid_cells()), verify_cell))
    });
    group.finish();
}

/// A block of two-sided vectors with staggered supports and valuations.
fn obstruction_block() -> Vec<FinVector> {
    let f = field();
    (0..16)
        .map(|k| {
            let entries = (0..=(k % 4))
                .map(|j| (k as i64 - 2 * j as i64, f.from_rational(1 + k as i64, 1 + j as i64).unwrap()))
                .collect::<Vec<_>>();
            FinVector::from_entries(IndexDomain::Integers, entries).unwrap()
        })
        .collect()
}

fn certify(x: FinVector) -> u64 {
    let f = field();
    let lambda = f.from_int(1);
    let mu = f.from_int(5);
    obstruction_witness_lambda_mu(&lambda, &mu, &x, 60)
        .unwrap()
        .n_checked
}

fn bench_obstruction_block(c: &mut Criterion) {
    let mut group = c.benchmark_group("obstruction-block");
    group.sample_size(10);
    group.bench_function("par-map", |b| {
        b.iter(|| par::map(black_box(obstruction_block()), certify))
    });
    group.bench_function("seq-map", |b| {
        b.iter(|| par::map_seq(black_box(obstruction_block()), certify))
    });
    group.finish();
}

criterion_group!(benches, bench_criterion_grid, bench_obstruction_block);
criterion_main!(benches);
