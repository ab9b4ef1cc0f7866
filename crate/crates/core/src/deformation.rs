//! Deformation maps of a matched pair and the classification of complements.
//!
//! A deformation map `r: H → A` satisfies `r(1) = 1` and
//! `r((h ◁ r(g)) g) = r(h) (h ▷ r(g))`. Each one deforms `H` into the group
//! `H_r` with `h • g = (h ◁ r(g)) g`, and two maps are equivalent exactly when
//! their deformed groups are isomorphic. The number of classes is the
//! factorization index.

use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Limits};
use crate::iso::{are_isomorphic, GroupInvariants};
use crate::matched_pair::{morphism_from_pair, MatchedPair, PairMorphism};
use crate::par;

const UNSET: u32 = u32::MAX;

/// A validated deformation map, stored as `A`-indices per `H`-roster position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeformationMap {
    r: Vec<usize>,
}

impl DeformationMap {
    pub fn new(mp: &MatchedPair, r: Vec<usize>) -> Result<Self> {
        let report = validate_deformation_map(mp, &r)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidDeformationMap(format!(
                "{v:?} ({} violations)",
                report.violations.len()
            )));
        }
        Ok(DeformationMap { r })
    }

    pub fn trivial(mp: &MatchedPair) -> Self {
        DeformationMap { r: vec![0; mp.h().order()] }
    }

    pub(crate) fn new_unchecked(r: Vec<usize>) -> Self {
        DeformationMap { r }
    }

    pub fn values(&self) -> &[usize] {
        &self.r
    }

    #[inline]
    pub fn at(&self, h: usize) -> usize {
        self.r[h]
    }

    pub fn is_trivial(&self) -> bool {
        self.r.iter().all(|&v| v == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeformationViolation {
    /// `r(1) ≠ 1`
    Unit,
    /// `r((h ◁ r(g)) g) ≠ r(h)(h ▷ r(g))`
    Compat { h: usize, g: usize },
}

#[derive(Clone, Debug, Default)]
pub struct DeformationReport {
    pub violations: Vec<DeformationViolation>,
}

impl DeformationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `r(1) = 1` and the deformation condition over all `|H|²` pairs.
pub fn validate_deformation_map(mp: &MatchedPair, r: &[usize]) -> Result<DeformationReport> {
    let (a, h) = (&**mp.a(), &**mp.h());
    if r.len() != h.order() {
        return Err(Error::Dimension(format!("r has length {}, |H| = {}", r.len(), h.order())));
    }
    if let Some(&bad) = r.iter().find(|&&v| v >= a.order()) {
        return Err(Error::IndexOutOfRange { index: bad, order: a.order() });
    }
    let mut report = DeformationReport::default();
    if r[0] != 0 {
        report.violations.push(DeformationViolation::Unit);
    }
    let n = h.order();
    let bad = par::flat_map_range(n, |x| {
        (0..n)
            .filter(|&y| {
                let lhs = r[h.mul(mp.right(x, r[y]), y)];
                let rhs = a.mul(r[x], mp.left(x, r[y]));
                lhs != rhs
            })
            .map(|y| DeformationViolation::Compat { h: x, g: y })
            .collect()
    });
    report.violations.extend(bad);
    Ok(report)
}

/// The r-deformation `H_r` (same roster as `H`) with its provenance.
#[derive(Clone, Debug)]
pub struct DeformedGroup {
    pub group: FiniteGroup,
    pub map: DeformationMap,
}

/// Inverses in `H_r` by the closed form `h⁻¹ ◁ r(h)⁻¹`.
pub fn closed_form_inverses(mp: &MatchedPair, r: &DeformationMap) -> Vec<usize> {
    let (a, h) = (&**mp.a(), &**mp.h());
    (0..h.order()).map(|x| mp.right(h.inv(x), a.inv(r.at(x)))).collect()
}

fn deformed_table(mp: &MatchedPair, r: &DeformationMap) -> Vec<u32> {
    let h = &**mp.h();
    let n = h.order();
    let mut flat = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            flat.push(h.mul(mp.right(x, r.at(y)), y) as u32);
        }
    }
    flat
}

/// Builds `(H_r, •)` and checks it is a group whose inverses follow the closed form.
pub fn deform_group(mp: &MatchedPair, r: &DeformationMap) -> Result<DeformedGroup> {
    let h = &**mp.h();
    let group = FiniteGroup::from_flat_table(h.order(), deformed_table(mp, r), Some(h.labels().to_vec()))
        .map_err(|e| Error::InvalidDeformationMap(format!("deformed multiplication is not a group: {e}")))?;
    let closed = closed_form_inverses(mp, r);
    if (0..h.order()).any(|x| group.inv(x) != closed[x]) {
        return Err(Error::InvalidDeformationMap("inverse table disagrees with the closed form".into()));
    }
    Ok(DeformedGroup { group, map: r.clone() })
}

/// Like [`deform_group`] without re-validating; `r` must already be a deformation map.
pub(crate) fn deform_group_trusted(mp: &MatchedPair, r: &DeformationMap) -> DeformedGroup {
    let h = &**mp.h();
    let group = FiniteGroup::from_flat_table_trusted(h.order(), deformed_table(mp, r), h.labels().to_vec());
    DeformedGroup { group, map: r.clone() }
}

/// The matched pair `(A, H_r, ▷^r, ◁)` with `h ▷^r a = r(h)(h ▷ a) r(h ◁ a)⁻¹`.
pub fn deformed_matched_pair(mp: &MatchedPair, r: &DeformationMap) -> Result<MatchedPair> {
    let deformed = deform_group(mp, r)?;
    let a = &**mp.a();
    let (na, nh) = (a.order(), mp.h().order());
    let mut lact = Vec::with_capacity(na * nh);
    for y in 0..nh {
        for x in 0..na {
            let v = a.mul(a.mul(r.at(y), mp.left(y, x)), a.inv(r.at(mp.right(y, x))));
            lact.push(v as u32);
        }
    }
    Ok(MatchedPair::from_flat(mp.a().clone(), Arc::new(deformed.group), lact, mp.ract_flat().to_vec()))
}

/// `ψ(a, h) = (a r(h), h)` from `A ⋈^r H_r` to `A ⋈ H`, verified to be an
/// isomorphism stabilizing `A` whose inverse is `(a, h) ↦ (a r(h)⁻¹, h)`.
pub fn psi_isomorphism(mp: &MatchedPair, r: &DeformationMap, limits: &Limits) -> Result<PairMorphism> {
    let src = deformed_matched_pair(mp, r)?;
    let identity: Vec<usize> = (0..mp.h().order()).collect();
    let psi = morphism_from_pair(&src, mp, r.values(), &identity, limits)?
        .ok_or_else(|| Error::InvalidDeformationMap("(r, id) fails the morphism compatibilities".into()))?;
    if !psi.is_isomorphism_stabilizing_a() {
        return Err(Error::InvalidDeformationMap("ψ is not an isomorphism stabilizing A".into()));
    }
    let a = &**mp.a();
    let nh = mp.h().order();
    let inverse = psi.map.inverse_images().expect("bijective");
    let closed_inverse_ok = (0..inverse.len()).all(|x| {
        let (xa, xh) = (x / nh, x % nh);
        inverse[x] == a.mul(xa, a.inv(r.at(xh))) * nh + xh
    });
    if !closed_inverse_ok {
        return Err(Error::InvalidDeformationMap("ψ⁻¹ disagrees with (a r(h)⁻¹, h)".into()));
    }
    Ok(psi)
}

/// Output of [`enumerate_deformation_maps`]. When `complete` is false the
/// budget ran out and `maps` is only a partial list.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub maps: Vec<DeformationMap>,
    pub work_units: u64,
    pub complete: bool,
}

impl Enumeration {
    pub fn into_complete(self, budget: &Budget) -> Result<Vec<DeformationMap>> {
        if self.complete {
            Ok(self.maps)
        } else {
            Err(Error::BudgetExceeded { used: self.work_units, budget: budget.limit() })
        }
    }
}

struct Enumerator<'a> {
    mp: &'a MatchedPair,
    budget: &'a Budget,
}

#[derive(Clone)]
struct Partial {
    r: Vec<u32>,
    order: Vec<usize>,
    next: usize,
}

enum Step {
    Consistent,
    Conflict,
    OutOfBudget,
}

impl Enumerator<'_> {
    /// Evaluates every condition instance whose arguments are both assigned,
    /// assigning forced values at unassigned points.
    fn propagate(&self, st: &mut Partial) -> Step {
        let (a, h) = (&**self.mp.a(), &**self.mp.h());
        while st.next < st.order.len() {
            let p = st.order[st.next];
            let mut evaluations = 0u64;
            let mut k = 0;
            while k <= st.next {
                let q = st.order[k];
                k += 1;
                for (x, y) in [(p, q), (q, p)] {
                    evaluations += 1;
                    let ry = st.r[y] as usize;
                    let target = h.mul(self.mp.right(x, ry), y);
                    let value = a.mul(st.r[x] as usize, self.mp.left(x, ry)) as u32;
                    if st.r[target] == UNSET {
                        st.r[target] = value;
                        st.order.push(target);
                    } else if st.r[target] != value {
                        self.budget.charge(evaluations);
                        return Step::Conflict;
                    }
                }
            }
            if !self.budget.charge(evaluations) {
                return Step::OutOfBudget;
            }
            st.next += 1;
        }
        Step::Consistent
    }

    fn assign(&self, st: &Partial, point: usize, value: usize) -> (Partial, Step) {
        let mut child = st.clone();
        child.r[point] = value as u32;
        child.order.push(point);
        let step = self.propagate(&mut child);
        (child, step)
    }

    /// Depth-first search; returns false if the budget ran out.
    fn search(&self, st: &Partial, out: &mut Vec<Vec<usize>>) -> bool {
        let Some(point) = st.r.iter().position(|&v| v == UNSET) else {
            out.push(st.r.iter().map(|&v| v as usize).collect());
            return true;
        };
        for value in 0..self.mp.a().order() {
            let (child, step) = self.assign(st, point, value);
            match step {
                Step::Conflict => {}
                Step::OutOfBudget => return false,
                Step::Consistent => {
                    if !self.search(&child, out) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// All deformation maps, sorted lexicographically by value sequence.
///
/// Backtracks over `r` on the roster order of `H`, trying `A`-values in
/// roster order, and after every assignment propagates all instances of
/// the deformation condition whose arguments are assigned. The candidates
/// for the first free point are explored in parallel.
pub fn enumerate_deformation_maps(mp: &MatchedPair, budget: &Budget) -> Enumeration {
    let nh = mp.h().order();
    let en = Enumerator { mp, budget };
    let mut root = Partial { r: vec![UNSET; nh], order: vec![0], next: 0 };
    root.r[0] = 0;
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut complete = true;
    match en.propagate(&mut root) {
        Step::Conflict => {}
        Step::OutOfBudget => complete = false,
        Step::Consistent => match root.r.iter().position(|&v| v == UNSET) {
            None => maps.push(root.r.iter().map(|&v| v as usize).collect()),
            Some(point) => {
                let branches = par::map_range(mp.a().order(), |value| {
                    let (child, step) = en.assign(&root, point, value);
                    let mut out = Vec::new();
                    let finished = match step {
                        Step::Conflict => true,
                        Step::OutOfBudget => false,
                        Step::Consistent => en.search(&child, &mut out),
                    };
                    (out, finished)
                });
                for (out, finished) in branches {
                    complete &= finished;
                    maps.extend(out);
                }
            }
        },
    }
    complete &= !budget.exhausted();
    maps.sort();
    Enumeration {
        maps: maps.into_iter().map(DeformationMap::new_unchecked).collect(),
        work_units: budget.used(),
        complete,
    }
}

/// A unit-preserving permutation `σ` of `H` realizing `r ∼ R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub sigma: Vec<usize>,
}

/// Direct check of `σ((h ◁ r(g)) g) = (σ(h) ◁ R(σ(g))) σ(g)` for all `g, h`.
pub fn is_equivalence_witness(mp: &MatchedPair, r: &DeformationMap, big_r: &DeformationMap, sigma: &[usize]) -> bool {
    let h = &**mp.h();
    let n = h.order();
    if sigma.len() != n || sigma[0] != 0 || !crate::iso::is_bijection(sigma, n) {
        return false;
    }
    par::all_range(n, |x| {
        (0..n).all(|y| {
            let lhs = sigma[h.mul(mp.right(x, r.at(y)), y)];
            let rhs = h.mul(mp.right(sigma[x], big_r.at(sigma[y])), sigma[y]);
            lhs == rhs
        })
    })
}

/// Decides `r ∼ R` by isomorphism search between `H_r` and `H_R`; the
/// returned witness is re-checked against the defining condition.
pub fn are_equivalent(mp: &MatchedPair, r: &DeformationMap, big_r: &DeformationMap) -> Result<Option<EquivalenceWitness>> {
    let hr = deform_group(mp, r)?;
    let h_big = deform_group(mp, big_r)?;
    Ok(witness_between(mp, &hr, &h_big))
}

fn witness_between(mp: &MatchedPair, from: &DeformedGroup, to: &DeformedGroup) -> Option<EquivalenceWitness> {
    let iso = are_isomorphic(&from.group, &to.group)?;
    assert!(
        is_equivalence_witness(mp, &from.map, &to.map, &iso.images),
        "isomorphism of deformed groups failed the equivalence condition"
    );
    Some(EquivalenceWitness { sigma: iso.images })
}

/// One equivalence class of deformation maps.
#[derive(Clone, Debug)]
pub struct DeformationClass {
    /// Index into [`ClassificationResult::all_maps`].
    pub representative: usize,
    /// Indices into `all_maps`, ascending; the representative comes first.
    pub members: Vec<usize>,
    /// `witnesses[k]` maps `H_{members[k]}` onto the representative's deformation.
    pub witnesses: Vec<EquivalenceWitness>,
    pub deformed: DeformedGroup,
}

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub all_maps: Vec<DeformationMap>,
    pub classes: Vec<DeformationClass>,
    /// Class index of each map in `all_maps`.
    pub class_of: Vec<usize>,
}

impl ClassificationResult {
    /// Number of classes, i.e. the factorization index.
    pub fn index(&self) -> usize {
        self.classes.len()
    }

    pub fn raw_count(&self) -> usize {
        self.all_maps.len()
    }

    pub fn deformed_types(&self) -> impl Iterator<Item = &DeformedGroup> {
        self.classes.iter().map(|c| &c.deformed)
    }
}

/// Enumerates and classifies all deformation maps of `mp`.
pub fn classify(mp: &MatchedPair, budget: &Budget) -> Result<ClassificationResult> {
    let maps = enumerate_deformation_maps(mp, budget).into_complete(budget)?;
    classify_maps(mp, maps)
}

/// Partitions the given deformation maps by equivalence. The first map of
/// each class in input order is its representative.
pub fn classify_maps(mp: &MatchedPair, maps: Vec<DeformationMap>) -> Result<ClassificationResult> {
    let deformed: Vec<DeformedGroup> = par::map_slice(&maps, |r| deform_group_trusted(mp, r));
    let invariants: Vec<GroupInvariants> = par::map_slice(&deformed, |d| GroupInvariants::of(&d.group));
    let mut classes: Vec<DeformationClass> = Vec::new();
    let mut class_of = Vec::with_capacity(maps.len());
    for (i, d) in deformed.iter().enumerate() {
        let mut placed = None;
        for (c, class) in classes.iter().enumerate() {
            if invariants[class.representative] != invariants[i] {
                continue;
            }
            if let Some(w) = witness_between(mp, d, &class.deformed) {
                placed = Some((c, w));
                break;
            }
        }
        match placed {
            Some((c, w)) => {
                classes[c].members.push(i);
                classes[c].witnesses.push(w);
                class_of.push(c);
            }
            None => {
                let group = deform_group(mp, &maps[i])?;
                class_of.push(classes.len());
                classes.push(DeformationClass {
                    representative: i,
                    members: vec![i],
                    witnesses: vec![EquivalenceWitness { sigma: (0..mp.h().order()).collect() }],
                    deformed: group,
                });
            }
        }
    }
    Ok(ClassificationResult { all_maps: maps, classes, class_of })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matched_pair::validate_matched_pair;

    fn c2_trivial_pair() -> MatchedPair {
        MatchedPair::trivial(Arc::new(FiniteGroup::cyclic(2)), Arc::new(FiniteGroup::cyclic(2)))
    }

    #[test]
    fn trivial_actions_give_homomorphisms() {
        let mp = c2_trivial_pair();
        let en = enumerate_deformation_maps(&mp, &Budget::default());
        assert!(en.complete);
        let maps: Vec<Vec<usize>> = en.maps.iter().map(|m| m.values().to_vec()).collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn trivial_map_is_valid_and_deforms_to_h() {
        let mp = c2_trivial_pair();
        let r = DeformationMap::trivial(&mp);
        assert!(validate_deformation_map(&mp, r.values()).unwrap().is_valid());
        let d = deform_group(&mp, &r).unwrap();
        assert_eq!(d.group.cayley_rows(), mp.h().cayley_rows());
        let dp = deformed_matched_pair(&mp, &r).unwrap();
        assert!(dp.same_tables(&mp));
        assert!(validate_matched_pair(&dp).is_valid());
    }

    #[test]
    fn unit_violation_reported() {
        let mp = c2_trivial_pair();
        let report = validate_deformation_map(&mp, &[1, 0]).unwrap();
        assert!(report.violations.contains(&DeformationViolation::Unit));
        assert!(validate_deformation_map(&mp, &[0]).is_err());
        assert!(validate_deformation_map(&mp, &[0, 5]).is_err());
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let mp = MatchedPair::trivial(Arc::new(FiniteGroup::cyclic(6)), Arc::new(FiniteGroup::cyclic(6)));
        let budget = Budget::new(5);
        let en = enumerate_deformation_maps(&mp, &budget);
        assert!(!en.complete);
        assert!(matches!(en.into_complete(&budget), Err(Error::BudgetExceeded { .. })));
        let full = enumerate_deformation_maps(&mp, &Budget::default());
        // Hom(C6, C6) has 6 elements
        assert!(full.complete);
        assert_eq!(full.maps.len(), 6);
    }

    #[test]
    fn classification_of_direct_product_is_rigid() {
        let mp = MatchedPair::trivial(Arc::new(FiniteGroup::cyclic(3)), Arc::new(FiniteGroup::cyclic(3)));
        let res = classify(&mp, &Budget::default()).unwrap();
        assert_eq!(res.raw_count(), 3);
        assert_eq!(res.index(), 1);
        assert_eq!(res.classes[0].members, vec![0, 1, 2]);
        for (k, &m) in res.classes[0].members.iter().enumerate() {
            let w = &res.classes[0].witnesses[k];
            assert!(is_equivalence_witness(&mp, &res.all_maps[m], &res.all_maps[0], &w.sigma));
        }
    }
}
