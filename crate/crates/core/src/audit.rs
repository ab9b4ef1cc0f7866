//! Exhaustive consistency audit of a single exact factorization.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::budget::Budget;
use crate::complement::{complement_subgroups, complement_to_deformation_map, deformation_map_to_complement, iso_classes};
use crate::deformation::{
    classify_maps, deform_group, deform_group_trusted, deformed_matched_pair, enumerate_deformation_maps,
    is_equivalence_witness, psi_isomorphism, DeformationMap,
};
use crate::error::Result;
use crate::group::{FiniteGroup, Limits};
use crate::iso::are_isomorphic;
use crate::matched_pair::{canonical_matched_pair, multiplication_map, validate_matched_pair, Factorization, MatchedPair};

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub name: String,
    pub g_order: usize,
    pub a_order: usize,
    pub h_order: usize,
    pub g_abelian: bool,
    pub raw_maps: usize,
    pub classification_index: usize,
    pub complements: usize,
    pub direct_index: usize,
    /// One line per failed check; empty when everything holds.
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every check on the canonical pair of `f`:
///
/// - the pair is valid and `m_G` is an isomorphism fixing `A`;
/// - for each deformation map `r`: `H_r` is a group with the closed-form
///   inverses, the deformed pair is valid, `ψ` is an isomorphism fixing `A`
///   and the graph of `r` complements `A`;
/// - graphs of the maps are exactly the complements found by direct search;
/// - `r ∼ R` decided by a generator search on the defining condition agrees
///   with isomorphism of `H_r` and `H_R` and with the computed classes;
/// - both indices agree, and are at most 1 when `G` is abelian.
pub fn audit_factorization(name: &str, f: &Factorization, limits: &Limits, budget: &Budget) -> Result<AuditReport> {
    let mut failures = Vec::new();
    let mp = canonical_matched_pair(f);
    if !validate_matched_pair(&mp).is_valid() {
        failures.push("canonical pair fails validation".to_string());
    }
    if !multiplication_map(f, &mp, limits)?.is_isomorphism_stabilizing_a() {
        failures.push("multiplication map is not an isomorphism fixing A".to_string());
    }

    let maps = enumerate_deformation_maps(&mp, budget).into_complete(budget)?;
    let mut graphs = BTreeSet::new();
    for r in &maps {
        let tag = format!("r = {:?}", r.values());
        match deform_group(&mp, r) {
            Ok(d) if d.group.validate(limits.assoc_cap).is_valid() => {}
            Ok(_) => failures.push(format!("{tag}: deformed group fails validation")),
            Err(e) => failures.push(format!("{tag}: {e}")),
        }
        match deformed_matched_pair(&mp, r) {
            Ok(p) if validate_matched_pair(&p).is_valid() => {}
            Ok(_) => failures.push(format!("{tag}: deformed pair fails validation")),
            Err(e) => failures.push(format!("{tag}: {e}")),
        }
        if let Err(e) = psi_isomorphism(&mp, r, limits) {
            failures.push(format!("{tag}: {e}"));
        }
        match deformation_map_to_complement(f, r, limits) {
            Ok(k) => {
                graphs.insert(k.members().to_vec());
            }
            Err(e) => failures.push(format!("{tag}: {e}")),
        }
    }

    let complements = complement_subgroups(f.a(), budget)?;
    let direct: BTreeSet<Vec<usize>> = complements.iter().map(|k| k.members().to_vec()).collect();
    if direct != graphs {
        failures.push(format!("{} complements but {} distinct graphs", direct.len(), graphs.len()));
    }
    for k in &complements {
        let r = complement_to_deformation_map(f, &mp, k)?;
        if !maps.contains(&r) {
            failures.push(format!("complement {:?} reads off a map missing from the enumeration", k.members()));
        }
    }
    let direct_index = iso_classes(&complements, limits).len();

    let classification = classify_maps(&mp, maps.clone())?;
    for (i, r) in maps.iter().enumerate() {
        let hr = deform_group_trusted(&mp, r).group;
        for (c, class) in classification.classes.iter().enumerate() {
            let rep = &maps[class.representative];
            let same_class = classification.class_of[i] == c;
            let by_search = search_equivalence(&mp, r, rep);
            let by_iso = are_isomorphic(&hr, &class.deformed.group).is_some();
            if by_search.is_some() != same_class || by_iso != same_class {
                failures.push(format!(
                    "r = {:?} vs class {c}: class {same_class}, search {}, isomorphic {by_iso}",
                    r.values(),
                    by_search.is_some()
                ));
            }
        }
    }
    if classification.index() != direct_index {
        failures.push(format!("classification index {} but direct index {direct_index}", classification.index()));
    }
    let g_abelian = f.g().is_abelian();
    if g_abelian && classification.index() > 1 {
        failures.push(format!("abelian group with index {}", classification.index()));
    }

    Ok(AuditReport {
        name: name.to_string(),
        g_order: f.g().order(),
        a_order: f.a().order(),
        h_order: f.h().order(),
        g_abelian,
        raw_maps: maps.len(),
        classification_index: classification.index(),
        complements: complements.len(),
        direct_index,
        failures,
    })
}

/// Looks for `σ` with `σ((h ◁ r(g)) g) = (σ(h) ◁ R(σ(g))) σ(g)` by trying
/// every assignment of generators of `H_r` to elements of equal order and
/// propagating along the deformed products.
pub fn search_equivalence(mp: &MatchedPair, r: &DeformationMap, big_r: &DeformationMap) -> Option<Vec<usize>> {
    let from = deform_group_trusted(mp, r).group;
    let to = deform_group_trusted(mp, big_r).group;
    let gens = from.generating_sequence();
    let to_orders = to.element_orders();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let k = from.element_order(g);
            (0..to.order()).filter(|&y| to_orders[y] == k).collect()
        })
        .collect();
    let mut chosen = Vec::with_capacity(gens.len());
    assign(mp, r, big_r, &from, &to, &gens, &candidates, &mut chosen)
}

#[allow(clippy::too_many_arguments)]
fn assign(
    mp: &MatchedPair,
    r: &DeformationMap,
    big_r: &DeformationMap,
    from: &FiniteGroup,
    to: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if chosen.len() == gens.len() {
        let sigma = propagate(from, to, gens, chosen)?;
        return is_equivalence_witness(mp, r, big_r, &sigma).then_some(sigma);
    }
    for &y in &candidates[chosen.len()] {
        chosen.push(y);
        let found = assign(mp, r, big_r, from, to, gens, candidates, chosen);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn propagate(from: &FiniteGroup, to: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = from.order();
    let mut sigma = vec![usize::MAX; n];
    sigma[0] = 0;
    let mut queue = vec![0];
    let mut k = 0;
    while k < queue.len() {
        let x = queue[k];
        k += 1;
        for (&g, &img) in gens.iter().zip(images) {
            let y = from.mul(x, g);
            let v = to.mul(sigma[x], img);
            if sigma[y] == usize::MAX {
                sigma[y] = v;
                queue.push(y);
            } else if sigma[y] != v {
                return None;
            }
        }
    }
    (queue.len() == n && crate::iso::is_bijection(&sigma, n)).then_some(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SubgroupHandle;
    use crate::matched_pair::check_factorization;
    use crate::perm::Perm;
    use std::sync::Arc;

    #[test]
    fn s4_over_s3_audit_is_clean() {
        let lim = Limits::default();
        let s4 = Arc::new(FiniteGroup::symmetric(4, &lim).unwrap());
        let p = |t: &str| Perm::parse_cycles(t, 4).unwrap();
        let a = SubgroupHandle::from_perms(&s4, &[p("(1 2)"), p("(2 3)")]).unwrap();
        let h = SubgroupHandle::from_perms(&s4, &[p("(1 2 3 4)")]).unwrap();
        let f = check_factorization(&a, &h, &lim).unwrap().unwrap();
        let report = audit_factorization("S4", &f, &lim, &Budget::default()).unwrap();
        assert!(report.passes(), "{:?}", report.failures);
        assert_eq!((report.raw_maps, report.classification_index, report.direct_index), (4, 2, 2));
    }

    #[test]
    fn search_finds_identity_on_trivial_map() {
        let a = Arc::new(FiniteGroup::cyclic(3));
        let h = Arc::new(FiniteGroup::cyclic(4));
        let mp = MatchedPair::trivial(a, h);
        let t = DeformationMap::trivial(&mp);
        let sigma = search_equivalence(&mp, &t, &t).unwrap();
        assert!(is_equivalence_witness(&mp, &t, &t, &sigma));
    }
}
