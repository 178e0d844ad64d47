use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use valtree::solve::build_table;
use valtree::{census, ramanujan_recursion, Exponent, Limits, Poly, ValuationTree};

fn tree_expansion(c: &mut Criterion) {
    let mut group = c.benchmark_group("tree");
    for (name, poly, depth) in [
        ("x^2+7", Poly::square(7).unwrap(), 40),
        ("x^3+1", Poly::cube(1).unwrap(), 40),
        ("x^2+4", Poly::square(4).unwrap(), 24),
    ] {
        group.bench_with_input(BenchmarkId::new(name, depth), &depth, |b, &depth| {
            b.iter(|| ValuationTree::build(black_box(poly), Limits::depth(depth)).unwrap())
        });
    }
    group.finish();
}

fn brute_force(c: &mut Criterion) {
    let poly = Poly::square(7).unwrap();
    c.bench_function("census x^2+7 to 2^14", |b| {
        b.iter(|| census(black_box(&poly), 1 << 14).unwrap())
    });
}

fn recursion(c: &mut Criterion) {
    c.bench_function("recursion to c=60", |b| {
        b.iter(|| ramanujan_recursion(black_box(60)).unwrap())
    });
}

fn tables(c: &mut Criterion) {
    for e in [Exponent::Square, Exponent::Cube] {
        c.bench_function(&format!("table e={e} D<=64"), |b| {
            b.iter(|| build_table(e, black_box(1..=64u128), 24).unwrap())
        });
    }
}

criterion_group!(benches, tree_expansion, brute_force, recursion, tables);
criterion_main!(benches);
