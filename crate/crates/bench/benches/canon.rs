use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use invar_bench::{degree_seven_configurations, small_database, SIMPLIFY_INPUTS};
use invar_core::enumerate::{enumerate_transversal, EnumerateOptions, Mode};
use invar_core::invariant::InvariantKind;
use invar_core::simplify::{SimplificationLevel, Simplifier};
use invar_core::tensor::Canonicalizer;

fn canonicalize_degree_seven(c: &mut Criterion) {
    let configs = degree_seven_configurations();
    let can = Canonicalizer::new();
    c.bench_function("canonicalize degree 7", |b| {
        b.iter(|| {
            for cfg in &configs {
                black_box(can.canonicalize(black_box(cfg)));
            }
        })
    });
}

fn enumerate_exhaustive(c: &mut Criterion) {
    let opts = EnumerateOptions::with_mode(Mode::Exhaustive);
    c.bench_function("enumerate I3 exhaustive", |b| {
        b.iter(|| {
            let can = Canonicalizer::new();
            black_box(enumerate_transversal(&can, InvariantKind::I, 3, &opts).unwrap().len())
        })
    });
}

fn simplify_pipeline(c: &mut Criterion) {
    let db = small_database();
    let s = Simplifier::new(&db);
    c.bench_function("simplify to signature level", |b| {
        b.iter(|| {
            for text in SIMPLIFY_INPUTS {
                black_box(s.simplify_text(text, SimplificationLevel::SIGNATURE).unwrap());
            }
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = canonicalize_degree_seven, enumerate_exhaustive, simplify_pipeline
}
criterion_main!(benches);
