use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use evoca_core::{
    evaluate_performance, CompiledRule, IcDistribution, Lattice, RuleTable, StreamKey, TaskKind, TaskSpec,
};

const DAS: &str = "000F730F001FFF0F000FFF0F001FFF1F";

fn step(c: &mut Criterion) {
    let rule = CompiledRule::new(RuleTable::parse_hex(DAS).unwrap());
    let mut group = c.benchmark_group("step");
    for n in [149usize, 999] {
        let ic = Lattice::random(n, &mut StreamKey::new(1).rng(0));
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &ic, |b, ic| {
            b.iter(|| rule.step(black_box(ic)))
        });
    }
    group.finish();
}

fn compile(c: &mut Criterion) {
    let rule = RuleTable::parse_hex(DAS).unwrap();
    c.bench_function("compile_rule", |b| b.iter(|| CompiledRule::new(black_box(rule))));
}

fn evaluate(c: &mut Criterion) {
    let rule = RuleTable::parse_hex(DAS).unwrap();
    let task = TaskSpec::new(TaskKind::Density, 149, 320).unwrap();
    let mut group = c.benchmark_group("evaluate");
    group.sample_size(10);
    group.throughput(Throughput::Elements(1_000));
    group.bench_function("density_149_x1000", |b| {
        b.iter(|| evaluate_performance(rule, &task, IcDistribution::Unbiased, 1_000, 1).unwrap())
    });
    group.finish();
}

criterion_group!(benches, step, compile, evaluate);
criterion_main!(benches);
