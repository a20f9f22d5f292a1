use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dlal_core::constraints::generate;
use dlal_core::corpus::{monomial_term, parse_bits, rev_applied};
use dlal_core::par::Strategy;
use dlal_core::param::free_decorate_term;
use dlal_core::pipeline::{infer, InferOptions};
use dlal_core::verify::check_well_structured_with;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn corpus() -> Vec<(&'static str, dlal_core::fsyntax::FTerm)> {
    vec![
        ("rev1010", rev_applied(&parse_bits("1010").unwrap())),
        ("X2", monomial_term(2)),
        ("X3", monomial_term(3)),
        ("X4", monomial_term(4)),
    ]
}

fn bench_generate(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    for (name, term) in corpus() {
        let d = free_decorate_term(&term);
        for (label, strategy) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(label, name), &d, |b, d| {
                b.iter(|| generate(black_box(d), strategy).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("check");
    group.sample_size(20);
    for (name, term) in corpus().into_iter().take(2) {
        let opts = InferOptions {
            domain: if name == "rev1010" { Default::default() } else { "x:N".parse().unwrap() },
            ..Default::default()
        };
        let pseudo = infer(&term, &opts).pseudo.expect("corpus term is typable");
        for (label, strategy) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(label, name), &pseudo, |b, p| {
                b.iter(|| check_well_structured_with(black_box(p), strategy))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_generate, bench_check);
criterion_main!(benches);
