use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coercion_harness::{check_seed, run_seeds, run_seeds_sequential, Check, CorpusConfig, Summary};

fn corpus(c: &mut Criterion) {
    let cfg = CorpusConfig { depth: 6, ..CorpusConfig::default() };
    let mut group = c.benchmark_group("differential");
    group.sample_size(10);
    for n in [64u64, 256] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| Summary::of(&run_seeds(0..n, |s| check_seed(s, Check::Differential, &cfg))))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| Summary::of(&run_seeds_sequential(0..n, |s| check_seed(s, Check::Differential, &cfg))))
        });
    }
    group.finish();
}

criterion_group!(benches, corpus);
criterion_main!(benches);
