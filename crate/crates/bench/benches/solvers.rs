use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use udgmcp_bench::{clustered, strip, uniform};
use udgmcp_core::{
    build_graph, deterministic_3approx, exact_mcp, randomized_solve, solve_strip,
    uncross_partition, CliquePartition, RandomizedConfig, StripInstance, Variant,
};

fn graph(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_graph");
    for n in [1_000, 10_000] {
        let ps = uniform(n, 2.0, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ps, |b, ps| {
            b.iter(|| build_graph(black_box(ps)))
        });
    }
    g.finish();
}

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_mcp");
    for n in [10, 14, 18] {
        let ps = uniform(n, 1.5, 2);
        let ug = build_graph(&ps);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ug, |b, ug| {
            b.iter(|| exact_mcp(black_box(ug)).unwrap())
        });
    }
    g.finish();
}

fn strips(c: &mut Criterion) {
    let ps = strip(2_000, 400.0, 3);
    let inst = StripInstance::new(&ps, 0.0, 0.86).unwrap();
    c.bench_function("solve_strip/2000", |b| {
        b.iter(|| solve_strip(black_box(&inst)).unwrap())
    });

    let ps = uniform(5_000, 2.0, 4);
    c.bench_function("strips3/5000", |b| {
        b.iter(|| deterministic_3approx(black_box(&ps)).unwrap())
    });
    let cfg = RandomizedConfig {
        eps: 0.3,
        delta: 0.1,
        seed: 5,
        variant: Variant::Irrational,
        rounds: None,
        width: None,
    };
    c.bench_function("strips_rand/5000", |b| {
        b.iter(|| randomized_solve(black_box(&ps), &cfg).unwrap())
    });
}

fn uncross(c: &mut Criterion) {
    let ps = clustered(60, 6.0, 6);
    // singletons merged greedily in index order, which leaves overlapping hulls
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in 0..ps.len() {
        let slot = parts
            .iter_mut()
            .find(|p| p.iter().all(|&u| ps.get(u).dist2(ps.get(v)) <= 1.0));
        match slot {
            Some(p) => p.push(v),
            None => parts.push(vec![v]),
        }
    }
    let cp = CliquePartition::new(parts);
    c.bench_function("uncross/clustered60", |b| {
        b.iter(|| uncross_partition(black_box(&cp), &ps).unwrap())
    });
}

criterion_group!(benches, graph, exact, strips, uncross);
criterion_main!(benches);
