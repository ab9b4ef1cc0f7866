//! Direct search for complements, the complement ↔ deformation-map
//! dictionary, and checks built on top of it.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::budget::Budget;
use crate::deformation::{classify, DeformationMap};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Limits, SubgroupHandle};
use crate::iso::{are_isomorphic, GroupInvariants, GroupMap};
use crate::matched_pair::{bicrossed_product, check_factorization, Factorization, MatchedPair};
use crate::par;
use crate::perm::Perm;

const UNSET: u32 = u32::MAX;

/// Complements of the same isomorphism type.
#[derive(Clone, Debug)]
pub struct IsoClass {
    /// Index into [`ComplementSet::complements`].
    pub representative: usize,
    /// Ascending indices into `complements`; the representative comes first.
    pub members: Vec<usize>,
    /// `witnesses[k]` is an isomorphism from `members[k]` onto the
    /// representative, both taken on their sorted member rosters.
    pub witnesses: Vec<GroupMap>,
}

/// All complements of `a` in its parent group.
#[derive(Clone, Debug)]
pub struct ComplementSet {
    pub a: SubgroupHandle,
    /// Sorted by member list.
    pub complements: Vec<SubgroupHandle>,
    pub iso_classes: Vec<IsoClass>,
}

impl ComplementSet {
    pub fn g(&self) -> &Arc<FiniteGroup> {
        self.a.parent()
    }

    /// Number of isomorphism types of complements.
    pub fn index(&self) -> usize {
        self.iso_classes.len()
    }

    pub fn class_of(&self, complement: usize) -> Option<usize> {
        self.iso_classes.iter().position(|c| c.members.contains(&complement))
    }
}

struct Searcher<'a> {
    g: &'a FiniteGroup,
    coset_of: Vec<u32>,
    cosets: Vec<Vec<usize>>,
    m: usize,
    budget: &'a Budget,
}

#[derive(Clone)]
struct Partial {
    /// Element chosen in each right coset of `A`.
    slot: Vec<u32>,
    members: Vec<usize>,
    gens: Vec<usize>,
}

enum Extend {
    Pruned,
    OutOfBudget,
    Grown(Partial),
}

impl Searcher<'_> {
    fn extend(&self, st: &Partial, x: usize) -> Extend {
        let mut next = st.clone();
        let c = self.coset_of[x] as usize;
        if next.slot[c] != UNSET {
            return Extend::Pruned;
        }
        next.slot[c] = x as u32;
        next.members.push(x);
        next.gens.push(x);
        let mut products = 0u64;
        let mut k = 0;
        while k < next.members.len() {
            let e = next.members[k];
            k += 1;
            for gi in 0..next.gens.len() {
                let y = self.g.mul(e, next.gens[gi]);
                products += 1;
                let c = self.coset_of[y] as usize;
                if next.slot[c] == y as u32 {
                    continue;
                }
                if next.slot[c] != UNSET {
                    self.budget.charge(products);
                    return Extend::Pruned;
                }
                next.slot[c] = y as u32;
                next.members.push(y);
            }
        }
        if !self.budget.charge(products) {
            return Extend::OutOfBudget;
        }
        if !self.m.is_multiple_of(next.members.len()) {
            return Extend::Pruned;
        }
        Extend::Grown(next)
    }

    fn search(&self, st: &Partial, out: &mut Vec<Vec<usize>>) -> bool {
        if st.members.len() == self.m {
            let mut k = st.members.clone();
            k.sort_unstable();
            out.push(k);
            return true;
        }
        let c = st.slot.iter().position(|&s| s == UNSET).expect("uncovered coset");
        for &x in &self.cosets[c] {
            match self.extend(st, x) {
                Extend::Pruned => {}
                Extend::OutOfBudget => return false,
                Extend::Grown(child) => {
                    if !self.search(&child, out) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn searcher<'a>(a: &'a SubgroupHandle, budget: &'a Budget) -> Result<Searcher<'a>> {
    let g = &**a.parent();
    if !g.order().is_multiple_of(a.order()) {
        return Err(Error::NotASubgroup(format!("|A| = {} does not divide |G| = {}", a.order(), g.order())));
    }
    let mut coset_of = vec![UNSET; g.order()];
    let mut cosets = Vec::with_capacity(g.order() / a.order());
    for x in 0..g.order() {
        if coset_of[x] != UNSET {
            continue;
        }
        let id = cosets.len() as u32;
        let coset: Vec<usize> = a.members().iter().map(|&y| g.mul(y, x)).collect();
        for &y in &coset {
            coset_of[y] = id;
        }
        cosets.push(coset);
    }
    Ok(Searcher { g, coset_of, m: cosets.len(), cosets, budget })
}

/// Every complement of `a` in its parent, sorted by member list, without
/// isomorphism classes.
///
/// A complement meets every right coset `Ag` exactly once. The search picks
/// the first uncovered coset, tries each of its elements as a new generator,
/// and closes up, pruning as soon as two elements land in one coset or the
/// partial subgroup's order stops dividing the index. Each complement is
/// reached along exactly one path.
pub fn complement_subgroups(a: &SubgroupHandle, budget: &Budget) -> Result<Vec<SubgroupHandle>> {
    let s = searcher(a, budget)?;
    let parent = a.parent();
    if s.m == 1 {
        return Ok(vec![SubgroupHandle::trivial(parent)]);
    }
    let mut root = Partial { slot: vec![UNSET; s.m], members: vec![0], gens: Vec::new() };
    root.slot[0] = 0;
    let first = &s.cosets[1];
    let branches = par::map_range(first.len(), |k| {
        let mut out = Vec::new();
        let finished = match s.extend(&root, first[k]) {
            Extend::Pruned => true,
            Extend::OutOfBudget => false,
            Extend::Grown(child) => s.search(&child, &mut out),
        };
        (out, finished)
    });
    let mut found = Vec::new();
    for (out, finished) in branches {
        if !finished {
            return Err(Error::BudgetExceeded { used: budget.used(), budget: budget.limit() });
        }
        found.extend(out);
    }
    found.sort();
    Ok(found.into_iter().map(|m| SubgroupHandle::from_sorted_trusted(parent, m)).collect())
}

/// Partitions subgroups of a common parent by isomorphism type.
pub fn iso_classes(subgroups: &[SubgroupHandle], limits: &Limits) -> Vec<IsoClass> {
    let groups: Vec<FiniteGroup> = par::map_slice(subgroups, |s| s.to_group(limits));
    let invariants: Vec<GroupInvariants> = par::map_slice(&groups, GroupInvariants::of);
    let mut classes: Vec<IsoClass> = Vec::new();
    for (i, grp) in groups.iter().enumerate() {
        let hit = classes.iter().enumerate().find_map(|(c, class)| {
            if invariants[class.representative] != invariants[i] {
                return None;
            }
            are_isomorphic(grp, &groups[class.representative]).map(|w| (c, w))
        });
        match hit {
            Some((c, w)) => {
                classes[c].members.push(i);
                classes[c].witnesses.push(w);
            }
            None => classes.push(IsoClass {
                representative: i,
                members: vec![i],
                witnesses: vec![GroupMap::identity(grp)],
            }),
        }
    }
    classes
}

/// All complements of `a` with their isomorphism classes.
pub fn find_complements(a: &SubgroupHandle, limits: &Limits, budget: &Budget) -> Result<ComplementSet> {
    let complements = complement_subgroups(a, budget)?;
    let iso_classes = iso_classes(&complements, limits);
    Ok(ComplementSet { a: a.clone(), complements, iso_classes })
}

/// `[G : A]^f` by direct search; the complement set serves as the witness.
pub fn factorization_index_direct(a: &SubgroupHandle, limits: &Limits, budget: &Budget) -> Result<ComplementSet> {
    find_complements(a, limits, budget)
}

/// Reads off `r` with `A[r(h)]·H[h] ∈ K` for every `h`.
pub fn complement_to_deformation_map(f: &Factorization, mp: &MatchedPair, complement: &SubgroupHandle) -> Result<DeformationMap> {
    if !complement.same_parent(f.a()) {
        return Err(Error::NotASubgroup("complement lives in a different group".into()));
    }
    let nh = f.h().order();
    if complement.order() != nh {
        return Err(Error::NotAFactorization(format!(
            "complement has order {}, expected {nh}",
            complement.order()
        )));
    }
    let mut r = vec![usize::MAX; nh];
    for &x in complement.members() {
        let (i, j) = f.decompose(x);
        if r[j] != usize::MAX {
            return Err(Error::NotAFactorization("projection onto H is not injective".into()));
        }
        r[j] = i;
    }
    DeformationMap::new(mp, r)
}

/// The graph `{A[r(h)]·H[h]}` as a subgroup of `G`, checked to complement `A`.
pub fn deformation_map_to_complement(f: &Factorization, r: &DeformationMap, limits: &Limits) -> Result<SubgroupHandle> {
    if r.values().len() != f.h().order() {
        return Err(Error::Dimension("r does not match |H|".into()));
    }
    let members = (0..r.values().len()).map(|j| f.compose(r.at(j), j)).collect();
    let k = SubgroupHandle::from_members(f.g(), members)
        .map_err(|e| Error::InvalidDeformationMap(format!("graph of r: {e}")))?;
    if k.order() != f.h().order() || check_factorization(f.a(), &k, limits)?.is_none() {
        return Err(Error::InvalidDeformationMap("graph of r does not complement A".into()));
    }
    Ok(k)
}

/// Comparison of the direct and deformation-based indices for a pair with
/// trivial right action.
#[derive(Clone, Debug)]
pub struct RigidityReport {
    pub direct_index: usize,
    pub classification_index: usize,
    pub complements: Vec<SubgroupHandle>,
    /// Every complement is isomorphic to `H`.
    pub all_isomorphic_to_h: bool,
}

impl RigidityReport {
    pub fn holds(&self) -> bool {
        self.direct_index == 1 && self.classification_index == 1 && self.all_isomorphic_to_h
    }
}

/// Builds `A ⋉ H` from a pair with trivial `◁` and computes its index both ways.
pub fn check_semidirect_rigidity(mp: &MatchedPair, limits: &Limits, budget: &Budget) -> Result<RigidityReport> {
    if !mp.is_right_trivial() {
        return Err(Error::Input("right action is not trivial".into()));
    }
    let product = bicrossed_product(mp, limits)?;
    let set = factorization_index_direct(&product.a_embedding, limits, budget)?;
    let classification = classify(mp, budget)?;
    let all_isomorphic_to_h = set
        .complements
        .iter()
        .all(|k| are_isomorphic(&k.to_group(limits), mp.h()).is_some());
    Ok(RigidityReport {
        direct_index: set.index(),
        classification_index: classification.index(),
        complements: set.complements,
        all_isomorphic_to_h,
    })
}

/// The pair `(A, C_m)` with trivial `◁` and `c^k ▷ a = α^k(a)`; `α` must be
/// an automorphism of `A` with `α^m = id`.
pub fn semidirect_matched_pair(a: Arc<FiniteGroup>, m: usize, alpha: &[usize]) -> Result<MatchedPair> {
    let na = a.order();
    let map = GroupMap::new(&a, &a, alpha.to_vec())?;
    if !map.is_isomorphism() {
        return Err(Error::Input("α is not an automorphism".into()));
    }
    let mut lact: Vec<Vec<usize>> = vec![(0..na).collect()];
    for k in 1..m {
        lact.push(lact[k - 1].iter().map(|&x| alpha[x]).collect());
    }
    if lact[m - 1].iter().map(|&x| alpha[x]).ne(0..na) {
        return Err(Error::Input(format!("α^{m} is not the identity")));
    }
    let ract = (0..m).map(|k| vec![k; na]).collect();
    MatchedPair::from_tables(a, Arc::new(FiniteGroup::cyclic(m)), lact, ract)
}

/// All subgroups of a small group, sorted by member list.
pub fn all_subgroups(g: &Arc<FiniteGroup>) -> Vec<SubgroupHandle> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier = vec![vec![0usize]];
    seen.insert(vec![0]);
    while let Some(s) = frontier.pop() {
        for x in 0..g.order() {
            if s.binary_search(&x).is_ok() {
                continue;
            }
            let t = g.generate_from(&s, &[x]);
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    seen.into_iter().map(|m| SubgroupHandle::from_sorted_trusted(g, m)).collect()
}

/// Default cap on `k` for [`alternating_double_factorization`].
pub const ALTERNATING_K_CAP: usize = 3;

/// Checks on one candidate complement of `A_{4k−1}` in `A_{4k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateCheck {
    pub generators: Vec<String>,
    pub order: usize,
    pub all_even: bool,
    pub abelian: bool,
    /// Every non-identity element moves the point `4k`.
    pub semiregular_at_last_point: bool,
}

impl CandidateCheck {
    pub fn complements(&self, k: usize) -> bool {
        self.order == 4 * k && self.all_even && self.semiregular_at_last_point
    }
}

#[derive(Clone, Debug)]
pub struct AlternatingReport {
    pub k: usize,
    pub degree: usize,
    pub sigma: Perm,
    pub tau: Perm,
    pub sigma_prime: Perm,
    pub tau_prime: Perm,
    /// `⟨σ, τ⟩`
    pub dihedral: CandidateCheck,
    /// `σ^{2k} = τ² = 1` and `τστ = σ⁻¹`.
    pub dihedral_relations: bool,
    /// `⟨σ', τ'⟩`
    pub abelian: CandidateCheck,
    pub primes_commute: bool,
    /// `|A_{4k−1}| · 4k = |A_{4k}|`.
    pub cardinality_ok: bool,
    pub complements_isomorphic: bool,
    /// `ρ = ∏ (2j−1, 4k+2−2j)`, a reflection that does invert `σ`.
    pub rho: Perm,
    /// `⟨σ, ρ⟩`
    pub reflected: CandidateCheck,
    pub reflected_relations: bool,
    pub reflected_isomorphic_to_abelian: bool,
}

impl AlternatingReport {
    /// Whether `⟨σ,τ⟩` and `⟨σ',τ'⟩` are non-isomorphic complements with the stated structure.
    pub fn tau_certifies(&self) -> bool {
        self.dihedral.complements(self.k)
            && self.dihedral_relations
            && self.abelian.complements(self.k)
            && self.primes_commute
            && self.cardinality_ok
            && !self.complements_isomorphic
    }

    /// Whether `⟨σ,ρ⟩` and `⟨σ',τ'⟩` are non-isomorphic complements.
    pub fn rho_certifies(&self) -> bool {
        self.reflected.complements(self.k)
            && self.reflected_relations
            && self.abelian.complements(self.k)
            && self.primes_commute
            && self.cardinality_ok
            && !self.reflected_isomorphic_to_abelian
    }

    pub fn degenerate(&self) -> bool {
        self.k == 1
    }
}

fn check_candidate(degree: usize, gens: &[&Perm], limits: &Limits) -> Result<(FiniteGroup, CandidateCheck)> {
    let owned: Vec<Perm> = gens.iter().map(|&p| p.clone()).collect();
    let group = FiniteGroup::closure(degree, &owned, limits)?;
    let perms = group.perms().expect("permutation group");
    let check = CandidateCheck {
        generators: owned.iter().map(|p| p.to_string()).collect(),
        order: group.order(),
        all_even: perms.iter().all(Perm::is_even),
        abelian: group.is_abelian(),
        semiregular_at_last_point: perms.iter().skip(1).all(|p| p.moves(degree)),
    };
    Ok((group, check))
}

fn dihedral_relations(sigma: &Perm, t: &Perm, k: usize) -> bool {
    sigma.pow(2 * k).is_identity() && sigma.order() == 2 * k && (t * t).is_identity() && !t.is_identity() && &(t * sigma) * t == sigma.inverse()
}

/// Builds the generators of two candidate complements of `A_{4k−1}` in
/// `A_{4k}` and checks them with permutation arithmetic only:
///
/// * `σ = (1 3 5 … 4k−1)(2 4 … 4k)`, `τ = ∏_j (2j−1, 2k+2j)(2j, 2k+2j−1)`
/// * `σ' = (1 … 2k)(2k+1 … 4k)`, `τ' = ∏_i (i, 2k+i)`
///
/// With these formulas `τ` commutes with `σ`, so `⟨σ, τ⟩` is abelian. The
/// report also checks `ρ = ∏_j (2j−1, 4k+2−2j)`, which inverts `σ`.
pub fn alternating_double_factorization(k: usize, cap: usize) -> Result<AlternatingReport> {
    if k == 0 {
        return Err(Error::Input("k must be positive".into()));
    }
    if k > cap {
        return Err(Error::OrderCapExceeded { cap });
    }
    let n = 4 * k;
    let odds: Vec<usize> = (1..n).step_by(2).collect();
    let evens: Vec<usize> = (2..=n).step_by(2).collect();
    let sigma = Perm::from_cycles(n, &[&odds, &evens])?;
    let tau_pairs: Vec<[usize; 2]> = (1..=k)
        .flat_map(|j| [[2 * j - 1, 2 * k + 2 * j], [2 * j, 2 * k + 2 * j - 1]])
        .collect();
    let tau = Perm::from_cycles(n, &tau_pairs.iter().map(|c| c.as_slice()).collect::<Vec<_>>())?;
    let low: Vec<usize> = (1..=2 * k).collect();
    let high: Vec<usize> = (2 * k + 1..=n).collect();
    let sigma_prime = Perm::from_cycles(n, &[&low, &high])?;
    let prime_pairs: Vec<[usize; 2]> = (1..=2 * k).map(|i| [i, 2 * k + i]).collect();
    let tau_prime = Perm::from_cycles(n, &prime_pairs.iter().map(|c| c.as_slice()).collect::<Vec<_>>())?;
    let rho_pairs: Vec<[usize; 2]> = (1..=2 * k).map(|j| [2 * j - 1, n + 2 - 2 * j]).collect();
    let rho = Perm::from_cycles(n, &rho_pairs.iter().map(|c| c.as_slice()).collect::<Vec<_>>())?;

    let limits = Limits::default();
    let (d, dihedral) = check_candidate(n, &[&sigma, &tau], &limits)?;
    let (c, abelian) = check_candidate(n, &[&sigma_prime, &tau_prime], &limits)?;
    let (e, reflected) = check_candidate(n, &[&sigma, &rho], &limits)?;

    // (4k−1)!/2 · 4k = (4k)!/2
    let half_fact = |m: usize| (1..=m as u128).product::<u128>() / 2;
    let cardinality_ok = half_fact(n - 1) * n as u128 == half_fact(n);

    Ok(AlternatingReport {
        k,
        degree: n,
        dihedral_relations: dihedral_relations(&sigma, &tau, k),
        reflected_relations: dihedral_relations(&sigma, &rho, k),
        primes_commute: &sigma_prime * &tau_prime == &tau_prime * &sigma_prime,
        complements_isomorphic: are_isomorphic(&d, &c).is_some(),
        reflected_isomorphic_to_abelian: are_isomorphic(&e, &c).is_some(),
        cardinality_ok,
        sigma,
        tau,
        sigma_prime,
        tau_prime,
        rho,
        dihedral,
        abelian,
        reflected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matched_pair::canonical_matched_pair;

    fn lim() -> Limits {
        Limits::default()
    }

    fn s4_s3() -> (Arc<FiniteGroup>, SubgroupHandle) {
        let s4 = Arc::new(FiniteGroup::symmetric(4, &lim()).unwrap());
        let a = SubgroupHandle::from_perms(&s4, &[Perm::parse_cycles("(1 2)", 4).unwrap(), Perm::parse_cycles("(2 3)", 4).unwrap()]).unwrap();
        (s4, a)
    }

    #[test]
    fn s4_over_s3_has_four_complements_two_types() {
        let (_, a) = s4_s3();
        let set = find_complements(&a, &lim(), &Budget::default()).unwrap();
        assert_eq!(set.complements.len(), 4);
        assert_eq!(set.index(), 2);
        let mut sizes: Vec<usize> = set.iso_classes.iter().map(|c| c.members.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3]);
        for k in &set.complements {
            assert!(check_factorization(&a, k, &lim()).unwrap().is_some());
        }
    }

    #[test]
    fn cyclic_cases() {
        let c6 = Arc::new(FiniteGroup::cyclic(6));
        let a = SubgroupHandle::generated(&c6, &[3]);
        let set = find_complements(&a, &lim(), &Budget::default()).unwrap();
        assert_eq!(set.complements.len(), 1);
        assert_eq!(set.complements[0].members(), &[0, 2, 4]);

        let c4 = Arc::new(FiniteGroup::cyclic(4));
        let a = SubgroupHandle::generated(&c4, &[2]);
        assert_eq!(factorization_index_direct(&a, &lim(), &Budget::default()).unwrap().index(), 0);
    }

    #[test]
    fn degenerate_subgroups() {
        let c6 = Arc::new(FiniteGroup::cyclic(6));
        let whole = SubgroupHandle::whole(&c6);
        let set = find_complements(&whole, &lim(), &Budget::default()).unwrap();
        assert_eq!(set.complements.len(), 1);
        assert_eq!(set.complements[0].members(), &[0]);
        let trivial = SubgroupHandle::trivial(&c6);
        let set = find_complements(&trivial, &lim(), &Budget::default()).unwrap();
        assert_eq!(set.complements.len(), 1);
        assert_eq!(set.complements[0].order(), 6);
    }

    #[test]
    fn budget_is_enforced() {
        let (_, a) = s4_s3();
        assert!(matches!(
            complement_subgroups(&a, &Budget::new(3)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn dictionary_round_trip_on_s4() {
        let (s4, a) = s4_s3();
        let x = Perm::parse_cycles("(1 2 3 4)", 4).unwrap();
        let h = SubgroupHandle::from_perms(&s4, &[x]).unwrap();
        let f = check_factorization(&a, &h, &lim()).unwrap().unwrap();
        let mp = canonical_matched_pair(&f);
        let r = complement_to_deformation_map(&f, &mp, &h).unwrap();
        assert!(r.is_trivial());
        for k in complement_subgroups(&a, &Budget::default()).unwrap() {
            let r = complement_to_deformation_map(&f, &mp, &k).unwrap();
            assert_eq!(deformation_map_to_complement(&f, &r, &lim()).unwrap(), k);
        }
    }

    #[test]
    fn subgroup_lattice_counts() {
        assert_eq!(all_subgroups(&Arc::new(FiniteGroup::cyclic(12))).len(), 6);
        let s3 = Arc::new(FiniteGroup::symmetric(3, &lim()).unwrap());
        assert_eq!(all_subgroups(&s3).len(), 6);
        let s4 = Arc::new(FiniteGroup::symmetric(4, &lim()).unwrap());
        assert_eq!(all_subgroups(&s4).len(), 30);
    }

    #[test]
    fn semidirect_s3_is_rigid() {
        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let mp = semidirect_matched_pair(c3, 2, &[0, 2, 1]).unwrap();
        let report = check_semidirect_rigidity(&mp, &lim(), &Budget::default()).unwrap();
        assert!(report.holds());
        assert_eq!(report.complements.len(), 3);
        assert!(semidirect_matched_pair(Arc::new(FiniteGroup::cyclic(3)), 3, &[0, 2, 1]).is_err());
    }

    #[test]
    fn alternating_degenerate_and_cap() {
        let r = alternating_double_factorization(1, ALTERNATING_K_CAP).unwrap();
        assert!(r.degenerate());
        assert!(r.complements_isomorphic);
        assert!(r.dihedral.complements(1) && r.abelian.complements(1));
        assert!(matches!(alternating_double_factorization(4, 3), Err(Error::OrderCapExceeded { cap: 3 })));
        assert!(alternating_double_factorization(0, 3).is_err());
    }

    #[test]
    fn alternating_tau_commutes_with_sigma() {
        for k in 2..=3 {
            let r = alternating_double_factorization(k, ALTERNATING_K_CAP).unwrap();
            assert_eq!(&r.sigma * &r.tau, &r.tau * &r.sigma);
            assert!(r.dihedral.abelian);
            assert!(r.dihedral.complements(k));
            assert!(r.abelian.complements(k));
            assert!(r.complements_isomorphic);
            assert!(!r.tau_certifies());
            assert!(r.rho_certifies());
            assert!(!r.reflected.abelian);
        }
    }
}
