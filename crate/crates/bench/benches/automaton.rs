use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use soliton_bench::{running_highest, running_path};
use soliton_core::automaton::{classify_paths, evolve_finite, evolve_power};
use soliton_core::tableau::{combinatorial_r, Tableau};

fn crystal(c: &mut Criterion) {
    let b: Tableau = "11/23".parse().unwrap();
    c.bench_function("combinatorial_r 2x2 by 3", |bench| bench.iter(|| combinatorial_r(black_box(&b), 3, 2)));
}

fn evolution(c: &mut Criterion) {
    let p = running_path();
    let mut group = c.benchmark_group("evolve L=24");
    for (r, l) in [(1, 1), (1, 3), (2, 4)] {
        group.bench_function(format!("T[{},{}]", r, l), |bench| bench.iter(|| evolve_finite(r, l, black_box(&p))));
    }
    group.finish();
    let q = running_highest();
    c.bench_function("T[1,3]^100 L=24", |bench| bench.iter(|| evolve_power(1, 3, black_box(&q), 100)));
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_paths n=2");
    group.sample_size(10);
    for length in [6, 8] {
        group.bench_function(format!("L={}", length), |bench| bench.iter(|| classify_paths(2, length, 1 << 20)));
    }
    group.finish();
}

criterion_group!(benches, crystal, evolution, enumeration);
criterion_main!(benches);
