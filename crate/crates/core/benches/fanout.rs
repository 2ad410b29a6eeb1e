//! Instance fan-out: the same batch of brute-force rainbow checks mapped
//! sequentially and through `verify::fan_out` (parallel with the default
//! `parallel` feature), plus a full harness run.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use slw_core::generators::SplitMix64;
use slw_core::listcolor::{ListAssignment, Oracle};
use slw_core::rainbow::{cycle_subpath, random_rainbow_lists, ListShape, Rainbow};
use slw_core::verify::{fan_out, rainbow_hosts, run, Statement, VerifyConfig};

/// `(host index, path, lists)` for 2-path rainbows.
fn batch(size: usize) -> Vec<(usize, Vec<usize>, ListAssignment)> {
    let hosts = rainbow_hosts();
    let mut rng = SplitMix64::new(7);
    let shape = ListShape { palette: 5, ends: (2, 3), interior: (1, 5), rest: 3 };
    (0..size)
        .map(|_| {
            let h = rng.below(hosts.len());
            let nt = &hosts[h];
            let path = cycle_subpath(&nt.outer, rng.below(nt.outer.len()), 2);
            let lists = random_rainbow_lists(&mut rng, nt.embedding.n(), &nt.outer, &path, shape);
            (h, path, lists)
        })
        .collect()
}

fn end_size(item: &(usize, Vec<usize>, ListAssignment), oracle: &Oracle) -> usize {
    let nt = &rainbow_hosts()[item.0];
    let rb = Rainbow::new(&nt.embedding, &nt.outer, &item.1, &item.2).expect("valid rainbow");
    rb.end_set(oracle).expect("small instance").len()
}

fn bench_end_sets(c: &mut Criterion) {
    let oracle = Oracle::default();
    let mut group = c.benchmark_group("end_sets");
    for size in [64usize, 512] {
        let items = batch(size);
        group.bench_with_input(BenchmarkId::new("sequential", size), &items, |b, items| {
            b.iter(|| black_box(items.iter().map(|it| end_size(it, &oracle)).sum::<usize>()));
        });
        group.bench_with_input(BenchmarkId::new("fan_out", size), &items, |b, items| {
            b.iter(|| black_box(fan_out(items, |it| end_size(it, &oracle)).into_iter().sum::<usize>()));
        });
    }
    group.finish();
}

fn bench_harness(c: &mut Criterion) {
    let mut group = c.benchmark_group("harness");
    group.sample_size(10);
    let cfg = VerifyConfig { budget: 100, ..Default::default() };
    for statement in [Statement::CrownFive, Statement::PartialPathExtension] {
        group.bench_function(statement.name(), |b| {
            b.iter(|| black_box(run(statement, &cfg).expect("harness run").held));
        });
    }
    group.finish();
}

criterion_group!(benches, bench_end_sets, bench_harness);
criterion_main!(benches);
