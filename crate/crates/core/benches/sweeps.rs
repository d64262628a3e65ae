use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use knotmosaic::grid::Setting;
use knotmosaic::par::Exec;
use knotmosaic::search::{search_max_knot_with, SearchMode};
use knotmosaic::verify::verify_claims_with;

const MODES: [(&str, Exec); 2] = [("auto", Exec::Auto), ("sequential", Exec::Sequential)];

fn random_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("random_search_hex3");
    g.sample_size(10);
    let mode = SearchMode::Randomized { seed: 1, samples: 4096 };
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                search_max_knot_with(exec, 3, Setting::HexStandard, mode)
                    .unwrap()
                    .max_crossings
            })
        });
    }
    g.finish();
}

fn exhaustive_square(c: &mut Criterion) {
    let mut g = c.benchmark_group("exhaustive_square4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                search_max_knot_with(exec, 4, Setting::Rect, SearchMode::Exhaustive)
                    .unwrap()
                    .mosaics
            })
        });
    }
    g.finish();
}

fn verify_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_r2_to_7");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| verify_claims_with(exec, 2..=7, &Setting::ALL).passed)
        });
    }
    g.finish();
}

criterion_group!(benches, random_search, exhaustive_square, verify_table);
criterion_main!(benches);
