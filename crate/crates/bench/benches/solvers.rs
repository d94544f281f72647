use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use stackelberg_bench::workload;
use stackelberg_core::{
    fill_table, oracle_constraint, solve_constraint_batched, solve_constraint_naive, solve_objective, Model,
};

fn objective(c: &mut Criterion) {
    let mut group = c.benchmark_group("objective_dp");
    group.sample_size(10);
    for capacity in [250, 500, 1000] {
        let instance = workload(Model::ObjectiveControl, 40, capacity);
        group.bench_with_input(BenchmarkId::from_parameter(capacity), &instance, |b, i| {
            b.iter(|| solve_objective(black_box(i)).unwrap())
        });
    }
    group.finish();
}

fn constraint(c: &mut Criterion) {
    let mut group = c.benchmark_group("constraint_dp");
    group.sample_size(10);
    for n in [64, 144, 256] {
        let instance = workload(Model::ConstraintControl, n, 1000);
        group.bench_with_input(BenchmarkId::new("naive", n), &instance, |b, i| {
            b.iter(|| solve_constraint_naive(black_box(i)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("batched", n), &instance, |b, i| {
            b.iter(|| solve_constraint_batched(black_box(i)).unwrap())
        });
    }
    group.finish();
}

fn building_blocks(c: &mut Criterion) {
    let wide = workload(Model::ConstraintControl, 8, 100_000);
    c.bench_function("fill_table_100k", |b| b.iter(|| fill_table(black_box(&wide))));
    let small = workload(Model::ConstraintControl, 14, 600);
    c.bench_function("oracle_constraint_14", |b| {
        b.iter(|| oracle_constraint(black_box(&small)).unwrap())
    });
}

criterion_group!(benches, objective, constraint, building_blocks);
criterion_main!(benches);
