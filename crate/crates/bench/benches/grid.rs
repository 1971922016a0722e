use criterion::{criterion_group, criterion_main, Criterion};
use seqmat::verify::{run_bound_grid, run_identity_grid};
use seqmat::GridPreset;

fn bench_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("smoke grid");
    group.sample_size(10);
    let ids = GridPreset::Smoke.identity_grid();
    let bounds = GridPreset::Smoke.bound_grid();
    group.bench_function("identities", |b| b.iter(|| run_identity_grid(&ids)));
    group.bench_function("bounds", |b| b.iter(|| run_bound_grid(&bounds)));
    group.finish();
}

criterion_group!(benches, bench_grid);
criterion_main!(benches);
