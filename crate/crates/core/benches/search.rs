use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nottingham::equivalence::{partition_reduced_forms, strict_equiv_search};
use nottingham::{Character, Prime, SearchConfig, Strategy};

fn configs() -> [(&'static str, SearchConfig); 4] {
    let base = SearchConfig::default();
    [
        ("pruned/parallel", base),
        ("pruned/sequential", base.sequential()),
        ("flat/parallel", base.exhaustive()),
        ("flat/sequential", base.exhaustive().sequential()),
    ]
}

fn pair_search(c: &mut Criterion) {
    let p = Prime::new(2).unwrap();
    let chi = Character::new(p, [(5, 1), (15, 2)]).unwrap();
    let psi = Character::new(p, [(5, 1), (11, 2), (15, 2)]).unwrap();
    // type <7,14> at p = 2 with n = 3: no witness, so the whole space is covered
    let lone = Character::new(p, [(7, 1), (13, 2)]).unwrap();
    let thrice = lone.scalar_mul(3);
    let mut group = c.benchmark_group("strict_search");
    group.sample_size(10);
    for (name, cfg) in configs() {
        group.bench_with_input(BenchmarkId::new("found_<5,15>", name), &cfg, |b, cfg| {
            b.iter(|| strict_equiv_search(black_box(&chi), black_box(&psi), cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("absent_<7,14>", name), &cfg, |b, cfg| {
            b.iter(|| strict_equiv_search(black_box(&lone), black_box(&thrice), cfg).unwrap())
        });
    }
    group.finish();
}

fn partition(c: &mut Criterion) {
    let p = Prime::new(3).unwrap();
    let mut group = c.benchmark_group("partition_<2,8>");
    group.sample_size(10);
    for (name, cfg) in configs() {
        if cfg.strategy == Strategy::Exhaustive && !cfg.parallel {
            continue;
        }
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| partition_reduced_forms(p, 2, 8, cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, pair_search, partition);
criterion_main!(benches);
