use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fanmaj::alignment_lp::u_k_all;
use fanmaj::random::{random_hermitian, random_psd, CounterRng};
use fanmaj::spectral::eigh;
use fanmaj::tensor::check_separable_fan;

fn bench_eigh(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigh");
    for d in [4usize, 8, 16] {
        let mut rng = CounterRng::new(1);
        let h = random_hermitian(d, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(d), &h, |b, h| {
            b.iter(|| eigh(h).unwrap())
        });
    }
    group.finish();
}

fn bench_u_k(c: &mut Criterion) {
    let mut group = c.benchmark_group("u_k_all");
    for d in [4usize, 8] {
        let mut rng = CounterRng::new(2);
        let a1 = random_hermitian(d, &mut rng);
        let a2 = random_hermitian(d, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(d), &(a1, a2), |b, (a1, a2)| {
            b.iter(|| u_k_all(a1, a2).unwrap())
        });
    }
    group.finish();
}

fn bench_sep_fan(c: &mut Criterion) {
    let mut rng = CounterRng::new(3);
    let b1 = random_psd(3, &mut rng);
    let c1 = random_psd(3, &mut rng);
    let b2 = random_psd(3, &mut rng);
    let c2 = random_psd(3, &mut rng);
    c.bench_function("separable_fan_3x3", |b| {
        b.iter(|| check_separable_fan(&b1, &c1, &b2, &c2, 1e-7).unwrap())
    });
}

criterion_group!(benches, bench_eigh, bench_u_k, bench_sep_fan);
criterion_main!(benches);
