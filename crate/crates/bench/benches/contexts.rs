use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use postsel_core::context::{abl_distribution, sample_chain, Context, Intermediate, PostSelection, Preparation};
use postsel_core::pointer::detector_ensemble;
use postsel_core::random::{random_decomposition, random_hermitian, random_state};

fn context(dim: usize, seed: u64) -> Context {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Context::new(
        Preparation {
            state: random_state(dim, &mut rng),
            time: 0.0,
        },
        Some(Intermediate {
            observable: random_decomposition(dim, &mut rng),
            time: 0.5,
            performed: true,
        }),
        PostSelection {
            observable: random_decomposition(dim, &mut rng),
            label: "c0".into(),
            time: 1.0,
        },
        random_hermitian(dim, 1.0, &mut rng),
    )
    .expect("valid context")
}

fn abl(c: &mut Criterion) {
    let mut group = c.benchmark_group("abl_distribution");
    for dim in [2, 4, 8, 16] {
        let ctx = context(dim, 1);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &ctx, |b, ctx| {
            b.iter(|| abl_distribution(ctx).unwrap())
        });
    }
    group.finish();
}

fn chain(c: &mut Criterion) {
    let ctx = context(3, 2);
    let mut group = c.benchmark_group("sample_chain");
    group.sample_size(20);
    for samples in [10_000u64, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(samples), &samples, |b, &n| {
            b.iter(|| sample_chain(&ctx, n, 7).unwrap())
        });
    }
    group.finish();
}

fn detector(c: &mut Criterion) {
    let mut group = c.benchmark_group("detector_ensemble");
    group.sample_size(10);
    group.bench_function("rate1_tick1e-3_runs1000", |b| {
        b.iter(|| detector_ensemble(1.0, 1e-3, 20.0, 1000, 3).unwrap())
    });
    group.finish();
}

criterion_group!(benches, abl, chain, detector);
criterion_main!(benches);
