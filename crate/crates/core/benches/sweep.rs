//! Sequential against parallel execution for the three hot paths: the
//! level-set sweep, synthesis, and a batch of full round trips.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use reeb_synth::exec::Exec;
use reeb_synth::plan::plan_graph;
use reeb_synth::random::gen_random;
use reeb_synth::reeb::build_augmented_reeb_with;
use reeb_synth::synth::synthesize_with;
use reeb_synth::verify::roundtrip_with;

fn executors() -> Vec<(&'static str, Exec)> {
    vec![
        ("sequential", Exec::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Exec::Parallel),
    ]
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("reeb_sweep");
    group.sample_size(10);
    for n in [4, 12, 24] {
        let plan = plan_graph(&gen_random(n, 11)).unwrap();
        let mesh = synthesize_with(&plan, Exec::Sequential)
            .unwrap()
            .refine_barycentric();
        for (name, exec) in executors() {
            group.bench_with_input(BenchmarkId::new(name, n), &mesh, |b, mesh| {
                b.iter(|| build_augmented_reeb_with(black_box(mesh), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn synthesis(c: &mut Criterion) {
    let mut group = c.benchmark_group("synthesize");
    group.sample_size(10);
    for n in [12, 48] {
        let plan = plan_graph(&gen_random(n, 5)).unwrap();
        for (name, exec) in executors() {
            group.bench_with_input(BenchmarkId::new(name, n), &plan, |b, plan| {
                b.iter(|| synthesize_with(black_box(plan), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn batch(c: &mut Criterion) {
    let graphs: Vec<_> = (0..16).map(|s| gen_random(2 + s % 8, s as u64)).collect();
    let mut group = c.benchmark_group("roundtrip_batch");
    group.sample_size(10);
    for (name, exec) in executors() {
        group.bench_function(name, |b| {
            b.iter(|| {
                exec.map(&graphs, |g| roundtrip_with(g, Exec::Sequential).unwrap().1.pass)
                    .into_iter()
                    .all(|ok| ok)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, synthesis, batch);
criterion_main!(benches);
