use criterion::{black_box, criterion_group, criterion_main, Criterion};

use surfarith_bench::bent_fixture;
use surfarith_core::bend::{bend, invariant_form_solver};
use surfarith_core::cocycle::{compatible_cocycle, hilbert90_solve, Compat};
use surfarith_core::forms::{invariants, jnab};
use surfarith_core::numfield::{prime_split, BaseField, ExtField};
use surfarith_core::redux::{reduce_rep, trace_set};
use surfarith_core::symrep::tau;
use surfarith_core::FMatrix;

fn symrep(c: &mut Criterion) {
    let e = ExtField::rationals();
    let m = FMatrix::from_ints(&e, &[&[2, 3], &[1, 2]]);
    for n in [5, 9] {
        c.bench_function(&format!("tau/n={n}"), |b| b.iter(|| tau(n, black_box(&m)).unwrap()));
    }
}

fn forms(c: &mut Criterion) {
    let f = BaseField::rationals();
    let (a, b) = (f.int(2), f.int(3));
    let q = jnab(f, 7, &a, &b).unwrap();
    c.bench_function("invariants/J7(2,3)", |bch| bch.iter(|| invariants(black_box(&q)).unwrap()));
    let z = compatible_cocycle(f, &a, &b, 5, Compat::Inner, None).unwrap();
    c.bench_function("hilbert90/n=5", |bch| bch.iter(|| hilbert90_solve(black_box(&z), 1).unwrap()));
}

fn bending(c: &mut Criterion) {
    let (rep, datum) = bent_fixture(7);
    c.bench_function("bend/n=7", |b| b.iter(|| bend(black_box(&rep), &datum).unwrap()));
    let bent = bend(&rep, &datum).unwrap();
    c.bench_function("invariant_form_solver/n=7", |b| b.iter(|| invariant_form_solver(black_box(&bent.images))));
}

fn redux(c: &mut Criterion) {
    let (rep, datum) = bent_fixture(3);
    let bent = bend(&rep, &datum).unwrap();
    let fin = reduce_rep(&bent, prime_split(bent.field.base(), 5).unwrap()[0], false).unwrap();
    let mut g = c.benchmark_group("trace_set");
    g.sample_size(10);
    g.bench_function("n=3/p=5", |b| b.iter(|| trace_set(black_box(&fin), 10_000_000, 0)));
    g.finish();
}

criterion_group!(benches, symrep, forms, bending, redux);
criterion_main!(benches);
