use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use soliton_bench::{running_content, running_highest, running_path, running_rc};
use soliton_core::angle::{decompose_level_set, direct_scattering, dynamical_period, omega_count, AngleVariable};
use soliton_core::bethe::string_centers;
use soliton_core::rigged::{kkr_backward, kkr_forward};
use soliton_core::tropical::{theta_path, ThetaData};

fn kkr(c: &mut Criterion) {
    let p = running_highest();
    let rc = running_rc();
    c.bench_function("kkr_forward L=24", |bench| bench.iter(|| kkr_forward(black_box(&p))));
    c.bench_function("kkr_backward L=24", |bench| bench.iter(|| kkr_backward(black_box(&rc))));
}

fn theta(c: &mut Criterion) {
    let mu = running_content();
    let rc = running_rc();
    let riggings = rc.rigging_vector();
    c.bench_function("ThetaData::new L=24", |bench| bench.iter(|| ThetaData::new(black_box(&mu))));
    let data = ThetaData::new(&mu).unwrap();
    c.bench_function("theta_path L=24", |bench| bench.iter(|| theta_path(&data, black_box(&riggings))));
    c.bench_function("string_centers L=24", |bench| bench.iter(|| string_centers(&mu, black_box(&riggings))));
}

fn formulas(c: &mut Criterion) {
    let mu = running_content();
    let gamma = soliton_core::angle::order_of_symmetry(&AngleVariable::from_rc(&running_rc()));
    let velocity = mu.velocity(2, 4);
    c.bench_function("omega_count L=24", |bench| bench.iter(|| omega_count(black_box(&mu))));
    c.bench_function("decompose_level_set L=24", |bench| bench.iter(|| decompose_level_set(black_box(&mu))));
    c.bench_function("dynamical_period T[2,4]", |bench| bench.iter(|| dynamical_period(&mu, &gamma, black_box(&velocity))));
    let p = running_path();
    let mut group = c.benchmark_group("scattering");
    group.sample_size(10);
    group.bench_function("direct_scattering L=24", |bench| bench.iter(|| direct_scattering(black_box(&p))));
    group.finish();
}

criterion_group!(benches, kkr, theta, formulas);
criterion_main!(benches);
