//! End-to-end timings for the pipeline, the product roundtrip, and the
//! character table underneath both.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use lmov_core::partition::Partition;
use lmov_core::pipeline::{run_pipeline, PConvention};
use lmov_core::product::{roundtrip_verify, unknot_table};
use lmov_core::qseries::ExpandMode;

fn bench_unknot_table(c: &mut Criterion) {
    c.bench_function("unknot_table_degree_3", |b| {
        b.iter(|| unknot_table(black_box(3)))
    });
}

fn bench_pipeline(c: &mut Criterion) {
    let w = unknot_table(3);
    c.bench_function("pipeline_unknot_degree_3", |b| {
        b.iter(|| run_pipeline(black_box(&w), PConvention::InverseBracketWeights).unwrap())
    });
}

fn bench_roundtrip(c: &mut Criterion) {
    let w = unknot_table(2);
    let pl = run_pipeline(&w, PConvention::InverseBracketWeights).unwrap();
    c.bench_function("roundtrip_unknot_degree_2_order_8", |b| {
        b.iter(|| roundtrip_verify(black_box(&pl), 8, ExpandMode::Q).unwrap())
    });
}

fn bench_characters(c: &mut Criterion) {
    c.bench_function("character_table_size_8", |b| {
        b.iter(|| {
            let parts = Partition::enumerate(8);
            let mut acc = 0i64;
            for a in &parts {
                for mu in &parts {
                    acc += lmov_core::character::character(black_box(a), mu).unwrap();
                }
            }
            acc
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_unknot_table, bench_pipeline, bench_roundtrip, bench_characters
}
criterion_main!(benches);
