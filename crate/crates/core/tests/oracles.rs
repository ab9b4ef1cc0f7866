mod common;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bicrossed::census::{census, census_limits, latin_square_census_oracle};
use bicrossed::complement::complement_subgroups;
use bicrossed::deformation::{enumerate_deformation_maps, validate_deformation_map};
use bicrossed::iso::{are_isomorphic, is_morphism};
use bicrossed::matched_pair::{canonical_matched_pair, check_factorization};
use bicrossed::{Budget, FiniteGroup, Limits, Perm};

fn lim() -> Limits {
    Limits::default()
}

fn perm_group(degree: usize, gens: &[&str]) -> FiniteGroup {
    let gens: Vec<Perm> = gens.iter().map(|t| Perm::parse_cycles(t, degree).unwrap()).collect();
    FiniteGroup::closure(degree, &gens, &lim()).unwrap()
}

fn small_groups() -> Vec<FiniteGroup> {
    let c = FiniteGroup::cyclic;
    vec![
        c(1),
        c(2),
        c(3),
        c(4),
        FiniteGroup::direct_product(&c(2), &c(2)),
        c(5),
        c(6),
        perm_group(3, &["(1 2)", "(1 2 3)"]),
        c(7),
        c(8),
        FiniteGroup::direct_product(&c(2), &c(4)),
        FiniteGroup::direct_product(&FiniteGroup::direct_product(&c(2), &c(2)), &c(2)),
        perm_group(4, &["(1 2 3 4)", "(1 3)"]),
        perm_group(8, &["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"]),
    ]
}

fn shuffled(g: &FiniteGroup, rng: &mut ChaCha8Rng) -> FiniteGroup {
    let mut rest: Vec<usize> = (1..g.order()).collect();
    rest.shuffle(rng);
    let order: Vec<usize> = std::iter::once(0).chain(rest).collect();
    FiniteGroup::from_table(g.relabeled(&order).cayley_rows(), None).unwrap()
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Tries every unit-preserving bijection.
fn brute_isomorphic(g1: &FiniteGroup, g2: &FiniteGroup) -> bool {
    if g1.order() != g2.order() {
        return false;
    }
    let mut rest: Vec<usize> = (1..g1.order()).collect();
    loop {
        let images: Vec<usize> = std::iter::once(0).chain(rest.iter().copied()).collect();
        if is_morphism(g1, g2, &images) {
            return true;
        }
        if !next_permutation(&mut rest) {
            return false;
        }
    }
}

#[test]
fn isomorphism_agrees_with_brute_force() {
    let groups = small_groups();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut positives = 0;
    for _ in 0..100 {
        let i = rng.gen_range(0..groups.len());
        let j = if rng.gen_bool(0.5) { i } else { rng.gen_range(0..groups.len()) };
        let x = shuffled(&groups[i], &mut rng);
        let y = shuffled(&groups[j], &mut rng);
        let fast = are_isomorphic(&x, &y);
        if let Some(map) = &fast {
            assert!(map.is_isomorphism());
            positives += 1;
        }
        assert_eq!(fast.is_some(), brute_isomorphic(&x, &y), "groups {i} and {j}");
    }
    assert!(positives >= 40);
}

fn all_functions(na: usize, nh: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = na.pow((nh - 1) as u32);
    (0..total).map(move |mut code| {
        let mut r = vec![0; nh];
        for slot in r.iter_mut().skip(1) {
            *slot = code % na;
            code /= na;
        }
        r
    })
}

#[test]
fn enumerator_agrees_with_exhaustive_scan() {
    let mut checked = 0;
    for entry in common::corpus() {
        let resolved = entry.resolve(&lim()).unwrap();
        let h = resolved.h.unwrap();
        let (na, nh) = (resolved.a.order(), h.order());
        if (na as f64).powi(nh as i32 - 1) > 2.0e5 {
            continue;
        }
        let f = check_factorization(&resolved.a, &h, &lim()).unwrap().unwrap();
        let mp = canonical_matched_pair(&f);
        let scanned: Vec<Vec<usize>> = all_functions(na, nh)
            .filter(|r| validate_deformation_map(&mp, r).unwrap().is_valid())
            .collect();
        let mut enumerated: Vec<Vec<usize>> = enumerate_deformation_maps(&mp, &Budget::default())
            .into_complete(&Budget::default())
            .unwrap()
            .iter()
            .map(|r| r.values().to_vec())
            .collect();
        enumerated.sort();
        let mut scanned_sorted = scanned;
        scanned_sorted.sort();
        assert_eq!(enumerated, scanned_sorted, "{:?}", entry.name);
        assert_eq!(enumerated.len(), complement_subgroups(f.a(), &Budget::default()).unwrap().len());
        checked += 1;
    }
    assert!(checked >= 15, "only {checked} entries small enough");
}

#[test]
fn census_agrees_with_latin_square_oracle() {
    for n in 1..=6 {
        let ours = census(n, &census_limits(), &Budget::default()).unwrap();
        let oracle = latin_square_census_oracle(n, &Budget::default()).unwrap();
        assert_eq!(ours.count, oracle.count, "n = {n}");
        for rep in &oracle.representatives {
            assert!(ours.representatives.iter().any(|g| are_isomorphic(g, rep).is_some()));
        }
    }
}

#[test]
fn shuffled_copies_stay_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in small_groups() {
        let s = shuffled(&g, &mut rng);
        assert!(s.validate(200).is_valid());
    }
}
