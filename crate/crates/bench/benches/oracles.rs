use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fermicoh::coherent;
use fermicoh::decomposition;
use fermicoh::fock::ModeSpace;
use fermicoh_bench::{params, singular_pair, word};
use std::hint::black_box;

// closed form against the dense Fock-space inner product it replaces
fn kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    for n in [2, 4, 6, 8] {
        let p = params(n, 2);
        g.bench_with_input(BenchmarkId::new("closed-form", n), &p, |b, p| {
            b.iter(|| coherent::kernel(black_box(&p[0]), black_box(&p[1])).unwrap())
        });
        if n <= 6 {
            let ms = ModeSpace::new(n).unwrap();
            g.bench_with_input(BenchmarkId::new("dense", n), &p, |b, p| {
                b.iter(|| {
                    let k1 = coherent::coherent_state(&ms, &p[0]).unwrap();
                    let k2 = coherent::coherent_state(&ms, &p[1]).unwrap();
                    k1.inner(&k2)
                })
            });
        }
    }
    for n in [2, 4, 6] {
        let (p1, p2) = singular_pair(n);
        g.bench_function(BenchmarkId::new("singular-contour", n), |b| {
            b.iter(|| coherent::kernel(black_box(&p1), black_box(&p2)).unwrap())
        });
    }
    g.finish();
}

fn gram(c: &mut Criterion) {
    let p = params(4, 32);
    c.bench_function("gram 32x32 n=4", |b| {
        b.iter(|| coherent::gram_matrix(black_box(&p)).unwrap())
    });
}

fn coherent_norm(c: &mut Criterion) {
    let mut g = c.benchmark_group("coherent_norm");
    for n in [2, 4, 6] {
        let p = params(n, 1).remove(0);
        g.bench_with_input(BenchmarkId::new("closed-form", n), &p, |b, p| {
            b.iter(|| coherent::coherent_norm(black_box(p)))
        });
        let ms = ModeSpace::new(n).unwrap();
        g.bench_with_input(BenchmarkId::new("dense", n), &p, |b, p| {
            b.iter(|| coherent::coherent_state(&ms, black_box(p)).unwrap().norm())
        });
    }
    g.finish();
}

fn normal_form(c: &mut Criterion) {
    let mut g = c.benchmark_group("normal_form");
    for n in [2, 3, 4] {
        let w = word(n, 6);
        g.bench_with_input(BenchmarkId::new("6 factors", n), &w, |b, w| {
            b.iter(|| decomposition::normal_form(n, black_box(w)).unwrap())
        });
    }
    g.finish();
}

fn relpp(c: &mut Criterion) {
    let mut g = c.benchmark_group("relpp");
    for n in [2, 4, 6] {
        let p = params(n, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| decomposition::relpp(black_box(&p[0]), black_box(&p[1])).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, kernel, gram, coherent_norm, normal_form, relpp);
criterion_main!(benches);
