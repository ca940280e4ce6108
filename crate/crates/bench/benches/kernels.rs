use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qfsplit::dieudonne::quasi_fe_height;
use qfsplit::logcy::standard_divisor;
use qfsplit::qfs::{height_search, is_n_quasi_fe_split, SplitQuery};
use qfsplit::witt::{gen_universal_polys_with, CostCap, WittRingContext};
use qfsplit::FqContext;

fn witt_arithmetic(c: &mut Criterion) {
    let mut g = c.benchmark_group("witt");
    for (p, n) in [(2u32, 3usize), (3, 3), (5, 3)] {
        let f = FqContext::new(p, 2).unwrap();
        let w = WittRingContext::new(f.clone(), n).unwrap();
        let a = w.from_comps((0..n).map(|i| f.from_index(3 + i as u64)).collect()).unwrap();
        let b = w.from_comps((0..n).map(|i| f.from_index(7 * i as u64 + 1)).collect()).unwrap();
        g.bench_with_input(BenchmarkId::new("add", format!("p{p}n{n}")), &(), |bch, _| bch.iter(|| w.add(black_box(&a), black_box(&b))));
        g.bench_with_input(BenchmarkId::new("mul", format!("p{p}n{n}")), &(), |bch, _| bch.iter(|| w.mul(black_box(&a), black_box(&b))));
    }
    g.sample_size(10);
    for (p, n) in [(3u32, 3usize), (5, 3)] {
        g.bench_with_input(BenchmarkId::new("universal_polys_exact", format!("p{p}n{n}")), &(), |bch, _| {
            bch.iter(|| gen_universal_polys_with(p, n, true, &CostCap::default()).unwrap())
        });
    }
    g.finish();
}

fn dieudonne(c: &mut Criterion) {
    let mut g = c.benchmark_group("dieudonne");
    for (h, e) in [(2usize, 3u32), (5, 6)] {
        let n = (e * h as u32 - e + 1) + 1;
        g.bench_with_input(BenchmarkId::new("height", format!("h{h}e{e}")), &(), |bch, _| bch.iter(|| quasi_fe_height(h, 5, e, n).unwrap()));
    }
    g.finish();
}

fn direct_verifier(c: &mut Criterion) {
    let mut g = c.benchmark_group("direct");
    g.sample_size(10);
    for (p, case, e, n) in [(5u32, "i", 1u32, 2u32), (3, "ii", 1, 2), (7, "iii", 2, 3)] {
        let f = FqContext::prime(p).unwrap();
        let delta = standard_divisor(case, None, &f).unwrap();
        let q = SplitQuery { field: f.clone(), delta: delta.clone(), e, n };
        g.bench_with_input(BenchmarkId::new("split", format!("p{p}-{case}-e{e}-n{n}")), &(), |bch, _| bch.iter(|| is_n_quasi_fe_split(&q).unwrap()));
    }
    let f = FqContext::new(5, 2).unwrap();
    let delta = standard_divisor("iv", Some(qfsplit::PointP1::Rational(f.generator())), &f).unwrap();
    g.bench_function("search/p5-iv-e2", |bch| bch.iter(|| height_search(&f, &delta, 2, 4).unwrap()));
    g.finish();
}

criterion_group!(benches, witt_arithmetic, dieudonne, direct_verifier);
criterion_main!(benches);
