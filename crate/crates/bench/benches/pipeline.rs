use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rigid_galois_core::galois::{brute_force_galois, build_galois, step_partitions};
use rigid_galois_core::graph::{henneberg1_sequence, parse_graph, random_labelling, random_type1_graph};
use rigid_galois_core::realization::enumerate_realizations;
use rigid_galois_core::tower::multiquadratic::{multiquadratic_degree, rationals};
use rigid_galois_core::{Graph, Tower, TowerElement};

const EXAMPLE: &str = "1 3\n1 2\n2 3\n1 4\n2 4\n3 5\n4 5\n";

fn tower(c: &mut Criterion) {
    let mut t = Tower::new();
    let mut roots = Vec::new();
    for d in [2, 3, 5, 7, 11, 13] {
        roots.push(t.adjoin_sqrt(TowerElement::from(d)).unwrap());
    }
    let a = roots
        .iter()
        .fold(TowerElement::one(), |acc, &r| &acc + &TowerElement::root(r));
    let b = t.square(&a);
    c.bench_function("tower/mul_6_roots", |bch| {
        bch.iter(|| t.mul(black_box(&a), black_box(&b)))
    });
    c.bench_function("tower/inv_6_roots", |bch| bch.iter(|| t.inv(black_box(&a)).unwrap()));
    c.bench_function("tower/numeric_eval_1e-30", |bch| {
        bch.iter(|| t.numeric_eval(black_box(&b), 1e-30).unwrap())
    });
}

fn realize(g: &Graph, seed: u64) -> rigid_galois_core::RealizationSet {
    let seq = henneberg1_sequence(g).unwrap();
    enumerate_realizations(g, &seq, &random_labelling(g, seed, 1000)).unwrap()
}

fn enumeration(c: &mut Criterion) {
    let example = parse_graph(EXAMPLE).unwrap();
    c.bench_function("enumerate/example", |b| b.iter(|| realize(black_box(&example), 1)));
    let g7 = random_type1_graph(7, 3);
    c.bench_function("enumerate/random_n7", |b| b.iter(|| realize(black_box(&g7), 1)));
}

fn groups(c: &mut Criterion) {
    let rs = realize(&parse_graph(EXAMPLE).unwrap(), 1);
    let parts = step_partitions(&rs);
    c.bench_function("galois/build_and_enumerate_example", |b| {
        b.iter(|| build_galois(&rs, &parts).unwrap().elements().unwrap().len())
    });
    c.bench_function("galois/brute_force_example", |b| {
        b.iter(|| brute_force_galois(black_box(&rs)).unwrap())
    });
    let big = realize(&random_type1_graph(8, 1014), 1);
    let big_parts = step_partitions(&big);
    let mut group = c.benchmark_group("galois/closure_n8");
    group.sample_size(10);
    group.bench_function("build_and_enumerate", |b| {
        b.iter_batched(
            || build_galois(&big, &big_parts).unwrap(),
            |g| g.elements().unwrap().len(),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

fn multiquadratic(c: &mut Criterion) {
    let input = rationals(&[-997, 6, 35, 210, 11, 13, 17, 19, 23, 29, 31, 37]);
    c.bench_function("mqdeg/k12_with_brute_force", |b| {
        b.iter(|| multiquadratic_degree(black_box(&input)).unwrap())
    });
}

criterion_group!(benches, tower, enumeration, groups, multiquadratic);
criterion_main!(benches);
