use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dualcox::coxeter::CoxeterContext;
use dualcox::crystal::{coxeter_interval, crystallographic_interval};
use dualcox::interval::{is_lattice, BuildOptions, LatticeOptions};
use dualcox::isometry::greedy_factorization;
use dualcox::ncp::{iso_check, nc_b};

fn builds(c: &mut Criterion) {
    let opts = BuildOptions::default();
    for name in ["G~2", "B~3", "F~4"] {
        let ctx = CoxeterContext::from_name(name, None).unwrap();
        c.bench_function(&format!("coxeter interval {name}"), |b| {
            b.iter(|| coxeter_interval(black_box(&ctx), &opts).unwrap())
        });
    }
    let ctx = CoxeterContext::from_name("D~4", None).unwrap();
    c.bench_function("crystallographic interval D~4", |b| {
        b.iter(|| crystallographic_interval(black_box(&ctx), &opts).unwrap())
    });
}

fn checks(c: &mut Criterion) {
    let ctx = CoxeterContext::from_name("F~4", None).unwrap();
    let p = crystallographic_interval(&ctx, &BuildOptions::default()).unwrap();
    let opts = LatticeOptions { samples: 1000, ..Default::default() };
    c.bench_function("lattice check F~4 C", |b| b.iter(|| is_lattice(black_box(&p), &opts)));
    let w = ctx.coxeter_element.clone();
    c.bench_function("greedy factorization F~4", |b| b.iter(|| greedy_factorization(black_box(&w))));
    let (x, y) = (nc_b(5), nc_b(5));
    c.bench_function("iso check NC_B(5)", |b| b.iter(|| iso_check(black_box(&x), &y).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = builds, checks
}
criterion_main!(benches);
