use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use seqmat::exact::int;
use seqmat::norms::{spectral, SpectralOptions};
use seqmat::recurrence::window;
use seqmat::structmat::{hankel, r_circulant};
use seqmat::RecurrenceSpec;
use std::hint::black_box;

fn bench_spectral(c: &mut Criterion) {
    let spec = RecurrenceSpec::pell_padovan(1, 2, 3);
    let mut group = c.benchmark_group("spectral");
    for n in [8usize, 32, 128] {
        let w = window(&spec, -4, 2 * n as i64 + 5).unwrap();
        let row: Vec<_> = (0..n as i64)
            .map(|i| seqmat::exact::big(w.get(i).unwrap()))
            .collect();
        let rc = r_circulant(&row, &int(-2)).unwrap();
        let hk = hankel(&w, n).unwrap();
        group.bench_with_input(BenchmarkId::new("r-circulant", n), &rc, |b, m| {
            b.iter(|| spectral(black_box(m), SpectralOptions::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("hankel", n), &hk, |b, m| {
            b.iter(|| spectral(black_box(m), SpectralOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_spectral);
criterion_main!(benches);
