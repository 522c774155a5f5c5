use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hidden_homfly::laws::FuzzSpec;
use hidden_homfly::par;
use hidden_homfly::{BraidWord, Engine, EvalConfig};

fn corpus(c: &mut Criterion) {
    let words = FuzzSpec::default().with_cases(64).corpus();
    let cfg = EvalConfig::default();
    let mut group = c.benchmark_group("corpus-recover-q");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let engine = Engine::new();
            par::map_sequential(&words, |_, w| engine.recover_q(w, &cfg, 3).map(|h| h.poly))
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let engine = Engine::new();
            par::map_indexed(&words, |_, w| engine.recover_q(w, &cfg, 3).map(|h| h.poly))
        })
    });
    group.finish();
}

fn torus(c: &mut Criterion) {
    let cfg = EvalConfig::default();
    let mut group = c.benchmark_group("sigma1-power");
    for k in [5usize, 10, 15] {
        let w = BraidWord::new(2, vec![1; k]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(k), &w, |b, w| {
            b.iter(|| Engine::new().recover_q(w, &cfg, 3).map(|h| h.poly))
        });
    }
    group.finish();
}

criterion_group!(benches, corpus, torus);
criterion_main!(benches);
