use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use crepant::barnes::continued_coefficient;
use crepant::compare::verify_theta_conjugation_p1113;
use crepant::lg::{Chart, LgModel};
use crepant::mirror::mirror_map;
use crepant::models::{i_function, pf_check};
use crepant::mp::{with_digits, Cx};
use crepant::scalar::{qi, Const};
use crepant::ModelId;

fn series(c: &mut Criterion) {
    c.bench_function("i_function/F3/order8", |b| {
        b.iter(|| i_function(black_box(ModelId::F3), &qi(8)).unwrap())
    });
    c.bench_function("pf_check/P1113/order10", |b| {
        b.iter(|| pf_check(black_box(ModelId::P1113), &qi(10)).unwrap())
    });
    c.bench_function("mirror_map/F2/order8", |b| b.iter(|| mirror_map(black_box(ModelId::F2), 8).unwrap()));
}

fn symbolic(c: &mut Criterion) {
    c.bench_function("continued_coefficient/w3/m0..3", |b| {
        b.iter(|| {
            for m in 0..3 {
                continued_coefficient::<Const>(3, 0, black_box(m)).unwrap();
            }
        })
    });
}

fn numeric(c: &mut Criterion) {
    c.bench_function("critical_points/F3/30digits", |b| {
        b.iter(|| {
            with_digits(30, || {
                let base = vec![Cx::from_f64(0.01, 0.0), Cx::from_f64(0.02, 0.0)];
                LgModel::new(ModelId::F3, Chart::Large, base).unwrap().critical_points().unwrap()
            })
        })
    });
    let mut g = c.benchmark_group("theta");
    g.sample_size(10);
    g.bench_function("conjugation/P1113/30digits", |b| {
        b.iter(|| verify_theta_conjugation_p1113(black_box(0.01), 30).unwrap())
    });
    g.finish();
}

criterion_group!(benches, series, symbolic, numeric);
criterion_main!(benches);
