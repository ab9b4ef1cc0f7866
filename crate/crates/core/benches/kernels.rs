use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use bicrossed::census::{census_limits, latin_square_census_oracle, sn_factorization};
use bicrossed::complement::complement_subgroups;
use bicrossed::deformation::enumerate_deformation_maps;
use bicrossed::matched_pair::canonical_matched_pair;
use bicrossed::Budget;

type Job<'a> = &'a mut (dyn FnMut() + Send);
type Pool = Box<dyn Fn(Job<'_>)>;

/// `(label, run)` for each pool the build supports.
fn pools() -> Vec<(&'static str, Pool)> {
    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        vec![
            ("one-thread", Box::new(move |f: Job<'_>| single.install(f))),
            ("default-pool", Box::new(|f: Job<'_>| f())),
        ]
    }
    #[cfg(not(feature = "parallel"))]
    {
        vec![("sequential", Box::new(|f: Job<'_>| f()))]
    }
}

fn enumeration(c: &mut Criterion) {
    let sf = sn_factorization(5, &census_limits()).unwrap();
    let mp = canonical_matched_pair(&sf.factorization);
    let mut group = c.benchmark_group("enumerate_s5_pair");
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_function(label, |b| {
            b.iter(|| pool(&mut || {
                black_box(enumerate_deformation_maps(&mp, &Budget::default()));
            }))
        });
    }
    group.finish();
}

fn complements(c: &mut Criterion) {
    for n in [6, 8] {
        let sf = sn_factorization(n, &census_limits()).unwrap();
        let mut group = c.benchmark_group(format!("complements_s{n}"));
        group.sample_size(10);
        for (label, pool) in pools() {
            group.bench_function(label, |b| {
                b.iter(|| pool(&mut || {
                    black_box(complement_subgroups(sf.factorization.a(), &Budget::default()).unwrap());
                }))
            });
        }
        group.finish();
    }
}

fn latin_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("latin_oracle_6");
    group.sample_size(10);
    for (label, pool) in pools() {
        group.bench_function(label, |b| {
            b.iter(|| pool(&mut || {
                black_box(latin_square_census_oracle(6, &Budget::default()).unwrap());
            }))
        });
    }
    group.finish();
}

criterion_group!(kernels, enumeration, complements, latin_oracle);
criterion_main!(kernels);
