//! End-to-end checks of the shipped worked examples.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::budget::Budget;
use crate::complement::{complement_subgroups, complement_to_deformation_map, deformation_map_to_complement, iso_classes};
use crate::deformation::{
    are_equivalent, classify, deform_group, deformed_matched_pair, enumerate_deformation_maps, psi_isomorphism,
    validate_deformation_map, DeformationMap,
};
use crate::error::{Error, Result};
use crate::group::{roster_map_by_perms, FiniteGroup, Limits};
use crate::io::ExampleFile;
use crate::iso::{are_isomorphic, GroupMap};
use crate::matched_pair::{
    canonical_matched_pair, check_factorization, extend_actions_from_generators, validate_matched_pair, Factorization,
    MatchedPair,
};

fn missing(what: &str) -> Error {
    Error::Input(format!("example file has no {what}"))
}

fn sorted_orders(g: &FiniteGroup) -> Vec<usize> {
    let mut v = g.element_orders();
    v.sort_unstable();
    v
}

fn check_map(mp: &MatchedPair, r: &[usize]) -> Result<Option<DeformationMap>> {
    validate_deformation_map(mp, r)?.is_valid().then(|| DeformationMap::new(mp, r.to_vec())).transpose()
}

fn explicit_isomorphism(ex: &ExampleFile, key: &str, target: &FiniteGroup, limits: &Limits) -> Result<GroupMap> {
    let iso = ex.isomorphisms.get(key).ok_or_else(|| missing("isomorphism"))?;
    let source = iso.source.build(limits)?;
    GroupMap::new(&source, target, iso.images.clone())
}

fn factorization(ex: &ExampleFile, limits: &Limits) -> Result<Factorization> {
    let file = ex.factorization.as_ref().ok_or_else(|| missing("factorization"))?;
    let resolved = file.resolve(limits)?;
    let h = resolved.h.ok_or_else(|| missing("H"))?;
    check_factorization(&resolved.a, &h, limits)?
        .ok_or_else(|| Error::NotAFactorization(file.name.clone().unwrap_or_default()))
}

/// Listed pair versus the canonical pair of the listed factorization.
#[derive(Clone, Debug, Serialize)]
pub struct TableComparison {
    pub left_entries: usize,
    pub right_entries: usize,
    pub left_mismatches: usize,
    pub right_mismatches: usize,
}

impl TableComparison {
    pub fn exact(&self) -> bool {
        self.left_mismatches == 0 && self.right_mismatches == 0
    }
}

/// Compares the listed pair with the canonical pair, matching rosters through
/// their permutations.
pub fn compare_with_canonical(listed: &MatchedPair, f: &Factorization) -> Result<TableComparison> {
    let canonical = canonical_matched_pair(f);
    let a_order = roster_map_by_perms(listed.a(), canonical.a())
        .ok_or_else(|| Error::Input("A rosters are not matching permutation groups".into()))?;
    let h_order = roster_map_by_perms(listed.h(), canonical.h())
        .ok_or_else(|| Error::Input("H rosters are not matching permutation groups".into()))?;
    let moved = canonical.relabeled(&a_order, &h_order)?;
    let (na, nh) = (listed.a().order(), listed.h().order());
    let mut cmp = TableComparison { left_entries: na * nh, right_entries: na * nh, left_mismatches: 0, right_mismatches: 0 };
    for y in 0..nh {
        for x in 0..na {
            cmp.left_mismatches += usize::from(listed.left(y, x) != moved.left(y, x));
            cmp.right_mismatches += usize::from(listed.right(y, x) != moved.right(y, x));
        }
    }
    Ok(cmp)
}

/// Checks for the pair `(S_3, C_4)` of `S_4`.
#[derive(Clone, Debug, Serialize)]
pub struct S4OverS3Report {
    pub tables: TableComparison,
    pub pair_valid: bool,
    pub index: usize,
    pub raw_count: usize,
    /// Sorted element orders of each class's deformation.
    pub class_types: Vec<Vec<usize>>,
    pub r_valid: bool,
    pub r_deformed_orders: Vec<usize>,
    pub phi_is_isomorphism: bool,
    /// `{r(h)·h}` in cycle notation.
    pub graph: Vec<String>,
    pub graph_is_subgroup: bool,
    /// `x ▷^r s_1`, by label.
    pub x_deformed_s1: String,
    pub psi_verified: bool,
}

impl S4OverS3Report {
    pub fn passes(&self) -> bool {
        self.tables.exact()
            && self.pair_valid
            && self.index == 2
            && self.class_types.contains(&vec![1, 2, 4, 4])
            && self.class_types.contains(&vec![1, 2, 2, 2])
            && self.r_valid
            && self.r_deformed_orders == vec![1, 2, 2, 2]
            && self.phi_is_isomorphism
            && self.graph_is_subgroup
            && self.x_deformed_s1 == "s1"
            && self.psi_verified
    }
}

pub fn s4_over_s3(ex: &ExampleFile, limits: &Limits, budget: &Budget) -> Result<S4OverS3Report> {
    let mp = ex.pair.as_ref().ok_or_else(|| missing("pair"))?.build(limits)?;
    let f = factorization(ex, limits)?;
    let tables = compare_with_canonical(&mp, &f)?;
    let pair_valid = validate_matched_pair(&mp).is_valid();
    let classification = classify(&mp, budget)?;
    let class_types = classification.deformed_types().map(|d| sorted_orders(&d.group)).collect();

    let r_values = ex.maps.get("r").ok_or_else(|| missing("map r"))?;
    let r = check_map(&mp, r_values)?;
    let (r_deformed_orders, phi_is_isomorphism, graph, graph_is_subgroup, x_deformed_s1, psi_verified) = match &r {
        None => (Vec::new(), false, Vec::new(), false, String::new(), false),
        Some(r) => {
            let deformed = deform_group(&mp, r)?;
            let phi = explicit_isomorphism(ex, "r", &deformed.group, limits)?;
            let (a, h) = (mp.a(), mp.h());
            let elements: BTreeSet<_> = (0..h.order())
                .map(|y| a.perm(r.at(y)).zip(h.perm(y)).map(|(p, q)| p * q))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Input("pair groups are not permutation groups".into()))?;
            let graph_is_subgroup = elements.len() == h.order()
                && elements.iter().all(|p| elements.iter().all(|q| elements.contains(&(p * q))));
            let dp = deformed_matched_pair(&mp, r)?;
            let x = crate::io::resolve_element(h, "x")?;
            let s1 = crate::io::resolve_element(a, "s1")?;
            (
                sorted_orders(&deformed.group),
                phi.is_isomorphism(),
                elements.iter().map(ToString::to_string).collect(),
                graph_is_subgroup,
                a.label(dp.left(x, s1)).to_string(),
                psi_isomorphism(&mp, r, limits).is_ok(),
            )
        }
    };
    Ok(S4OverS3Report {
        tables,
        pair_valid,
        index: classification.index(),
        raw_count: classification.raw_count(),
        class_types,
        r_valid: r.is_some(),
        r_deformed_orders,
        phi_is_isomorphism,
        graph,
        graph_is_subgroup,
        x_deformed_s1,
        psi_verified,
    })
}

/// Direct complement search against deformation-map enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct IndexComparison {
    pub complements: usize,
    pub direct_index: usize,
    pub raw_maps: usize,
    pub classification_index: usize,
    /// Complement → map → complement is the identity and hits every map once.
    pub bijection: bool,
}

impl IndexComparison {
    pub fn agrees(&self) -> bool {
        self.bijection && self.complements == self.raw_maps && self.direct_index == self.classification_index
    }
}

pub fn compare_indices(f: &Factorization, limits: &Limits, budget: &Budget) -> Result<IndexComparison> {
    let mp = canonical_matched_pair(f);
    let complements = complement_subgroups(f.a(), budget)?;
    let classes = iso_classes(&complements, limits);
    let maps = enumerate_deformation_maps(&mp, budget).into_complete(budget)?;
    let mut images = Vec::with_capacity(complements.len());
    let mut round_trip = true;
    for k in &complements {
        let r = complement_to_deformation_map(f, &mp, k)?;
        round_trip &= deformation_map_to_complement(f, &r, limits)? == *k;
        images.push(r);
    }
    images.sort();
    let classification = crate::deformation::classify_maps(&mp, maps.clone())?;
    Ok(IndexComparison {
        complements: complements.len(),
        direct_index: classes.len(),
        raw_maps: maps.len(),
        classification_index: classification.index(),
        bijection: round_trip && images == maps,
    })
}

pub fn s4_index(ex: &ExampleFile, limits: &Limits, budget: &Budget) -> Result<IndexComparison> {
    compare_indices(&factorization(ex, limits)?, limits, budget)
}

/// Checks for the pair `(C_3, C_6)` given on generators.
#[derive(Clone, Debug, Serialize)]
pub struct C3C6Report {
    pub pair_valid: bool,
    pub r_valid: bool,
    pub r_deformed_order: usize,
    pub r_deformed_abelian: bool,
    pub phi_is_isomorphism: bool,
    pub phi_images: Vec<usize>,
    pub big_r_valid: bool,
    pub big_r_deformed_cyclic: bool,
    /// Witness that `R` is equivalent to the trivial map.
    pub big_r_trivial_witness: Option<Vec<usize>>,
    pub r_big_r_equivalent: bool,
    pub maps_found: usize,
    pub enumeration_contains_all: bool,
    pub index: usize,
}

impl C3C6Report {
    pub fn first_passes(&self) -> bool {
        self.pair_valid && self.r_valid && self.r_deformed_order == 6 && !self.r_deformed_abelian && self.phi_is_isomorphism
    }

    pub fn second_passes(&self) -> bool {
        self.pair_valid && self.big_r_valid && self.big_r_deformed_cyclic && self.big_r_trivial_witness.is_some()
    }

    pub fn passes(&self) -> bool {
        self.first_passes() && self.second_passes() && !self.r_big_r_equivalent && self.enumeration_contains_all && self.index == 2
    }
}

pub fn c3_c6(ex: &ExampleFile, limits: &Limits, budget: &Budget) -> Result<(MatchedPair, C3C6Report)> {
    let file = ex.generator_pair.as_ref().ok_or_else(|| missing("generator pair"))?;
    let (a, h, data) = file.build(limits)?;
    let mp = extend_actions_from_generators(a, h.clone(), &data)?;
    let pair_valid = validate_matched_pair(&mp).is_valid();
    let r = check_map(&mp, ex.maps.get("r").ok_or_else(|| missing("map r"))?)?;
    let big_r = check_map(&mp, ex.maps.get("R").ok_or_else(|| missing("map R"))?)?;

    let mut report = C3C6Report {
        pair_valid,
        r_valid: r.is_some(),
        r_deformed_order: 0,
        r_deformed_abelian: true,
        phi_is_isomorphism: false,
        phi_images: Vec::new(),
        big_r_valid: big_r.is_some(),
        big_r_deformed_cyclic: false,
        big_r_trivial_witness: None,
        r_big_r_equivalent: false,
        maps_found: 0,
        enumeration_contains_all: false,
        index: 0,
    };
    if let Some(r) = &r {
        let d = deform_group(&mp, r)?;
        report.r_deformed_order = d.group.order();
        report.r_deformed_abelian = d.group.is_abelian();
        let phi = explicit_isomorphism(ex, "r", &d.group, limits)?;
        report.phi_is_isomorphism = phi.is_isomorphism();
        report.phi_images = phi.images;
    }
    if let Some(big) = &big_r {
        let d = deform_group(&mp, big)?;
        report.big_r_deformed_cyclic = are_isomorphic(&d.group, &FiniteGroup::cyclic(h.order())).is_some();
        let trivial = DeformationMap::trivial(&mp);
        report.big_r_trivial_witness = are_equivalent(&mp, big, &trivial)?.map(|w| w.sigma);
    }
    if let (Some(r), Some(big)) = (&r, &big_r) {
        report.r_big_r_equivalent = are_equivalent(&mp, r, big)?.is_some();
    }
    let classification = classify(&mp, budget)?;
    report.maps_found = classification.raw_count();
    let has = |m: &DeformationMap| classification.all_maps.contains(m);
    report.enumeration_contains_all = has(&DeformationMap::trivial(&mp))
        && r.as_ref().is_some_and(has)
        && big_r.as_ref().is_some_and(has);
    report.index = classification.index();
    Ok((mp, report))
}

/// The regular left action realizes `h` as a complement of the point
/// stabilizer of `|h|` in the symmetric group; returns its deformation map
/// for the canonical pair of `f`, where `f` must be that factorization.
pub fn regular_deformation_map(h: &FiniteGroup, f: &Factorization, limits: &Limits) -> Result<DeformationMap> {
    let (sn, image) = crate::iso::regular_embedding(h, limits)?;
    let g = f.g();
    let members = image
        .members()
        .iter()
        .map(|&i| sn.perm(i).and_then(|p| g.index_of_perm(p)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Input("factorization is not of the symmetric group of degree |H|".into()))?;
    let k = crate::group::SubgroupHandle::from_members(g, members)?;
    complement_to_deformation_map(f, &canonical_matched_pair(f), &k)
}
