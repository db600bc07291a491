use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, Criterion};
use lapdiag::balanced::{enumerate_balanced_by_length, enumerate_balanced_by_sum};
use lapdiag::graphs::{canonical_form, complete, parse_graph6, Graph};
use lapdiag::sdiag::s_bandwidth;
use lapdiag::survey::{scan, ScanOptions};
use lapdiag::{Alphabet, SearchOptions};

fn corpus(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn balanced(c: &mut Criterion) {
    c.bench_function("balanced_by_length_5", |b| {
        b.iter(|| enumerate_balanced_by_length(black_box(5), None))
    });
    c.bench_function("balanced_by_sum_12", |b| {
        b.iter(|| enumerate_balanced_by_sum(black_box(12)))
    });
}

fn bandwidth(c: &mut Criterion) {
    let mut group = c.benchmark_group("complete_bandwidth");
    group.sample_size(10);
    let opts = SearchOptions::default();
    for n in [7, 10] {
        let g = complete(n);
        group.bench_function(format!("K{n}_neg_zero_one"), |b| {
            b.iter(|| s_bandwidth(&g, &Alphabet::neg_zero_one(), &opts))
        });
    }
    let g = complete(10);
    group.bench_function("K10_neg_one", |b| {
        b.iter(|| s_bandwidth(&g, &Alphabet::neg_one(), &opts))
    });
    group.finish();
}

fn scanning(c: &mut Criterion) {
    let text = corpus("connected7.g6");
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    group.bench_function("connected7", |b| {
        b.iter(|| scan(&text, &ScanOptions::default()))
    });
    group.finish();
}

fn canonical(c: &mut Criterion) {
    let graphs: Vec<Graph> = corpus("graphs7.g6")
        .lines()
        .take(200)
        .map(|l| parse_graph6(l.as_bytes()).unwrap())
        .collect();
    c.bench_function("canonical_form_200x7", |b| {
        b.iter(|| {
            graphs
                .iter()
                .map(|g| canonical_form(g).unwrap().len())
                .sum::<usize>()
        })
    });
}

criterion_group!(benches, balanced, bandwidth, scanning, canonical);
criterion_main!(benches);
