use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sumnet::par::Parallelism;
use sumnet::solver::{brute_force_scalar, g1_exhaustive_triples};
use sumnet::{gen_g1, gen_smstar, FiniteField, SearchOptions};

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn exhaustive_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive_search");
    group.sample_size(10);
    let cases = [
        ("g1_gf3_all", gen_g1(), FiniteField::new(3, 1).unwrap()),
        (
            "s4_gf2",
            gen_smstar(4).unwrap(),
            FiniteField::new(2, 1).unwrap(),
        ),
    ];
    for (name, net, field) in &cases {
        for (label, mode) in MODES {
            let opts = SearchOptions {
                find_all: true,
                parallelism: mode,
                ..SearchOptions::reduced()
            };
            group.bench_with_input(BenchmarkId::new(*name, label), &opts, |b, opts| {
                b.iter(|| brute_force_scalar(black_box(net), field, *opts).unwrap())
            });
        }
    }
    group.finish();
}

fn triple_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("g1_triples");
    group.sample_size(10);
    let field = FiniteField::new(2, 2).unwrap();
    for (label, mode) in MODES {
        group.bench_function(label, |b| {
            b.iter(|| g1_exhaustive_triples(black_box(&field), mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exhaustive_search, triple_sweep);
criterion_main!(benches);
