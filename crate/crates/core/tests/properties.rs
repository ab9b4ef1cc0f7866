mod common;

use std::sync::Arc;

use proptest::prelude::*;

use bicrossed::audit::audit_factorization;
use bicrossed::census::{census, census_limits, sn_factorization};
use bicrossed::complement::{find_complements, semidirect_matched_pair, check_semidirect_rigidity};
use bicrossed::deformation::{classify, deform_group, validate_deformation_map, DeformationMap};
use bicrossed::io::MatchedPairFile;
use bicrossed::iso::{are_isomorphic, automorphisms};
use bicrossed::matched_pair::{check_factorization, validate_matched_pair, MatchedPair};
use bicrossed::worked::regular_deformation_map;
use bicrossed::{Budget, FiniteGroup, Limits, SubgroupHandle};

fn lim() -> Limits {
    Limits::default()
}

fn s3c4() -> MatchedPair {
    let file: MatchedPairFile = bicrossed::io::read_json(&common::fixture("s3c4.json")).unwrap();
    file.build(&lim()).unwrap()
}

#[test]
fn corpus_audits_are_clean() {
    let mut audited = 0;
    for entry in common::corpus() {
        let resolved = entry.resolve(&lim()).unwrap();
        if resolved.g.order() > 48 {
            continue;
        }
        let name = entry.name.clone().unwrap_or_default();
        let f = check_factorization(&resolved.a, &resolved.h.unwrap(), &lim())
            .unwrap()
            .unwrap_or_else(|| panic!("{name} is not an exact factorization"));
        let report = audit_factorization(&name, &f, &lim(), &Budget::default()).unwrap();
        assert!(report.passes(), "{name}: {:?}", report.failures);
        assert!(report.raw_maps >= 1);
        audited += 1;
    }
    assert!(audited >= 30);
}

#[test]
fn corpus_contains_non_rigid_cases() {
    let indices: Vec<usize> = common::corpus()
        .iter()
        .map(|e| {
            let r = e.resolve(&lim()).unwrap();
            find_complements(&r.a, &lim(), &Budget::default()).unwrap().index()
        })
        .collect();
    assert!(indices.iter().any(|&i| i >= 2));
    assert!(indices.iter().all(|&i| i >= 1));
}

#[test]
fn regular_embedding_lands_in_census_class() {
    for n in 2..=6 {
        let limits = census_limits();
        let result = census(n, &limits, &Budget::default()).unwrap();
        let sf = sn_factorization(n, &limits).unwrap();
        let mp = bicrossed::matched_pair::canonical_matched_pair(&sf.factorization);
        for rep in &result.representatives {
            let r = regular_deformation_map(rep, &sf.factorization, &limits).unwrap();
            let d = deform_group(&mp, &r).unwrap();
            assert!(are_isomorphic(&d.group, rep).is_some(), "n = {n}");
        }
    }
}

#[test]
fn census_provenance_reproduces_representatives() {
    for n in 1..=6 {
        let limits = census_limits();
        let result = census(n, &limits, &Budget::default()).unwrap();
        let sf = sn_factorization(n, &limits).unwrap();
        let mp = bicrossed::matched_pair::canonical_matched_pair(&sf.factorization);
        assert_eq!(result.provenance.len(), result.count);
        for (r, rep) in result.provenance.iter().zip(&result.representatives) {
            let d = deform_group(&mp, r).unwrap();
            assert!(are_isomorphic(&d.group, rep).is_some());
        }
        for (i, x) in result.representatives.iter().enumerate() {
            for y in &result.representatives[i + 1..] {
                assert!(are_isomorphic(x, y).is_none(), "n = {n}: duplicate type");
            }
        }
    }
}

fn abelian(orders: &[usize]) -> Arc<FiniteGroup> {
    let mut g = FiniteGroup::cyclic(orders[0]);
    for &k in &orders[1..] {
        g = FiniteGroup::direct_product(&g, &FiniteGroup::cyclic(k));
    }
    Arc::new(g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn abelian_direct_index_is_at_most_one(
        shape in prop::sample::select(vec![vec![2, 2], vec![2, 4], vec![4, 4], vec![2, 2, 2], vec![2, 2, 4], vec![3, 3], vec![2, 6], vec![2, 2, 2, 2], vec![16], vec![2, 8]]),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..3),
    ) {
        let g = abelian(&shape);
        let gens: Vec<usize> = picks.iter().map(|p| p.index(g.order())).collect();
        let a = SubgroupHandle::generated(&g, &gens);
        let set = find_complements(&a, &lim(), &Budget::default()).unwrap();
        prop_assert!(set.index() <= 1);
        for k in &set.complements {
            prop_assert_eq!(k.order() * a.order(), g.order());
        }
    }

    #[test]
    fn validity_matches_graph_closure(r in prop::collection::vec(0usize..6, 3)) {
        let mp = s3c4();
        let mut values = vec![0];
        values.extend(r);
        let report = validate_deformation_map(&mp, &values).unwrap();
        let nh = mp.h().order();
        let closed = (0..nh).all(|x| (0..nh).all(|y| {
            let a = mp.a().mul(values[x], mp.left(x, values[y]));
            let hh = mp.h().mul(mp.right(x, values[y]), y);
            a == values[hh]
        }));
        prop_assert_eq!(report.is_valid(), closed);
    }

    #[test]
    fn relabeling_preserves_classification(
        a_rest in Just((1usize..6).collect::<Vec<_>>()).prop_shuffle(),
        h_rest in Just((1usize..4).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let mp = s3c4();
        let a_order: Vec<usize> = std::iter::once(0).chain(a_rest).collect();
        let h_order: Vec<usize> = std::iter::once(0).chain(h_rest).collect();
        let moved = mp.relabeled(&a_order, &h_order).unwrap();
        prop_assert!(validate_matched_pair(&moved).is_valid());
        let before = classify(&mp, &Budget::default()).unwrap();
        let after = classify(&moved, &Budget::default()).unwrap();
        prop_assert_eq!(before.raw_count(), after.raw_count());
        prop_assert_eq!(before.index(), after.index());
    }

    #[test]
    fn semidirect_products_are_rigid(
        na in prop::sample::select(vec![2usize, 3, 4, 5, 6, 7, 8]),
        m in prop::sample::select(vec![2usize, 3, 4]),
        pick in any::<prop::sample::Index>(),
    ) {
        let a = Arc::new(FiniteGroup::cyclic(na));
        let autos: Vec<Vec<usize>> = automorphisms(&a)
            .into_iter()
            .filter(|phi| {
                let mut x: Vec<usize> = (0..na).collect();
                for _ in 0..m {
                    x = x.iter().map(|&i| phi[i]).collect();
                }
                x.iter().enumerate().all(|(i, &y)| i == y)
            })
            .collect();
        let alpha = &autos[pick.index(autos.len())];
        let mp = semidirect_matched_pair(a, m, alpha).unwrap();
        let report = check_semidirect_rigidity(&mp, &lim(), &Budget::default()).unwrap();
        prop_assert!(report.holds(), "{:?}", report);
    }

    #[test]
    fn every_enumerated_map_deforms_to_a_group(k in 0usize..4) {
        let mp = s3c4();
        let all = classify(&mp, &Budget::default()).unwrap();
        let r: &DeformationMap = &all.all_maps[k % all.raw_count()];
        let d = deform_group(&mp, r).unwrap();
        prop_assert!(d.group.validate(200).is_valid());
    }
}
