//! The factorization `S_n = S_{n−1} C_n` and the census of groups of order
//! `n` as deformations of the cyclic group.

use std::sync::Arc;

use crate::budget::Budget;
use crate::complement::{complement_subgroups, complement_to_deformation_map};
use crate::deformation::{classify, classify_maps, DeformationMap, DeformedGroup};
use crate::error::{Error, Result};
use crate::group::{adjacent_transpositions, FiniteGroup, Limits, SubgroupHandle};
use crate::iso::{are_isomorphic, GroupInvariants};
use crate::matched_pair::{
    canonical_matched_pair, check_factorization, extend_actions_from_generators, Factorization, GeneratorAction,
    MatchedPair,
};
use crate::par;
use crate::perm::Perm;

/// Largest `n` for [`sn_matched_pair`].
pub const SN_PAIR_CAP: usize = 7;
/// Largest `n` for [`census`] and [`latin_square_census_oracle`].
pub const CENSUS_CAP: usize = 8;
/// Above this `n` the census goes through complement search instead of
/// backtracking over deformation maps.
pub const ENUMERATION_MAX_N: usize = 5;

/// Limits used by the census: dense tables up to `|S_6| = 720`.
pub fn census_limits() -> Limits {
    Limits { table_cap: 720, ..Limits::default() }
}

/// `S_n = S_{n−1}·⟨x⟩` with `S_{n−1}` fixing `n` and `x = s_1 s_2 ⋯ s_{n−1}`.
#[derive(Clone, Debug)]
pub struct SymmetricFactorization {
    pub n: usize,
    pub factorization: Factorization,
    /// `s_1, …, s_{n−1}`.
    pub s: Vec<Perm>,
    pub x: Perm,
}

impl SymmetricFactorization {
    /// Roster index of `s_i` (1-based `i ≤ n−2`) in `A`.
    pub fn s_index(&self, i: usize) -> usize {
        self.factorization.a_group().index_of_perm(&self.s[i - 1]).expect("s_i lies in A")
    }

    /// Roster index of `x^k` in `H`.
    pub fn x_power_index(&self, k: usize) -> usize {
        self.factorization.h_group().index_of_perm(&self.x.pow(k)).expect("x^k lies in H")
    }
}

pub fn sn_factorization(n: usize, limits: &Limits) -> Result<SymmetricFactorization> {
    if n == 0 {
        return Err(Error::Input("n must be positive".into()));
    }
    let g = Arc::new(FiniteGroup::symmetric(n, limits)?);
    let s = adjacent_transpositions(n);
    let x = s.iter().fold(Perm::identity(n), |acc, si| &acc * si);
    let a = SubgroupHandle::from_perms(&g, &s[..n.saturating_sub(2)])?;
    let h = SubgroupHandle::from_perms(&g, std::slice::from_ref(&x))?;
    let factorization = check_factorization(&a, &h, limits)?
        .ok_or_else(|| Error::NotAFactorization(format!("S_{} ≠ S_{}·C_{n}", n, n - 1)))?;
    Ok(SymmetricFactorization { n, factorization, s, x })
}

/// Generator data `x ▷ s_i`, `x ◁ s_i` from the closed forms:
/// `x ▷ s_i = s_{i+1}` and `x ◁ s_i = x` for `i < n−2`, while
/// `x ▷ s_{n−2} = s_{n−2} ⋯ s_1` and `x ◁ s_{n−2} = x²`.
pub fn sn_generator_actions(sf: &SymmetricFactorization) -> Vec<GeneratorAction> {
    let n = sf.n;
    let a = sf.factorization.a_group();
    let x = sf.x_power_index(1);
    (1..=n - 2)
        .map(|i| {
            let (left, right) = if i < n - 2 {
                (sf.s_index(i + 1), x)
            } else {
                let descending = sf.s[..n - 2].iter().rev().fold(Perm::identity(n), |acc, si| &acc * si);
                (a.index_of_perm(&descending).expect("in A"), sf.x_power_index(2))
            };
            GeneratorAction { h: x, a: sf.s_index(i), left, right }
        })
        .collect()
}

/// The canonical matched pair of `S_n = S_{n−1} C_n`, computed directly and
/// by extending the generator closed forms; the two must agree entry for entry.
pub fn sn_matched_pair(n: usize, cap: usize, limits: &Limits) -> Result<MatchedPair> {
    if n < 3 {
        return Err(Error::Input("n must be at least 3".into()));
    }
    if n > cap {
        return Err(Error::OrderCapExceeded { cap });
    }
    let sf = sn_factorization(n, limits)?;
    let direct = canonical_matched_pair(&sf.factorization);
    let f = &sf.factorization;
    let extended = extend_actions_from_generators(f.a_group().clone(), f.h_group().clone(), &sn_generator_actions(&sf))?;
    if !direct.same_tables(&extended) {
        return Err(Error::InvalidMatchedPair(format!(
            "closed-form actions disagree with the canonical pair for n = {n}"
        )));
    }
    Ok(direct)
}

/// How a census enumerated its deformation maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusRoute {
    Backtracking,
    Complements,
}

#[derive(Clone, Debug)]
pub struct CensusResult {
    pub n: usize,
    pub count: usize,
    /// Canonically relabeled Cayley tables, one per isomorphism type.
    pub representatives: Vec<FiniteGroup>,
    /// A deformation map of the `(S_{n−1}, C_n)` pair realizing each type.
    pub provenance: Vec<DeformationMap>,
    pub raw_maps: usize,
    pub route: CensusRoute,
}

/// Relabels so the identity comes first, then elements by increasing order,
/// ties broken by roster position.
pub fn canonical_relabeling(g: &FiniteGroup) -> FiniteGroup {
    let orders = g.element_orders();
    let mut order: Vec<usize> = (0..g.order()).collect();
    order.sort_by_key(|&i| (orders[i], i));
    g.relabeled(&order)
}

/// All isomorphism types of groups of order `n`, as deformations of `C_n`
/// along `S_n = S_{n−1} C_n`.
pub fn census(n: usize, limits: &Limits, budget: &Budget) -> Result<CensusResult> {
    if n == 0 {
        return Err(Error::Input("n must be positive".into()));
    }
    if n > CENSUS_CAP {
        return Err(Error::OrderCapExceeded { cap: CENSUS_CAP });
    }
    let sf = sn_factorization(n, limits)?;
    let mp = canonical_matched_pair(&sf.factorization);
    let (classification, route) = if n <= ENUMERATION_MAX_N {
        (classify(&mp, budget)?, CensusRoute::Backtracking)
    } else {
        let complements = complement_subgroups(sf.factorization.a(), budget)?;
        let mut maps = par::map_slice(&complements, |k| complement_to_deformation_map(&sf.factorization, &mp, k))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        maps.sort();
        (classify_maps(&mp, maps)?, CensusRoute::Complements)
    };
    let representatives = classification.deformed_types().map(|d: &DeformedGroup| canonical_relabeling(&d.group)).collect();
    let provenance = classification.deformed_types().map(|d| d.map.clone()).collect();
    Ok(CensusResult {
        n,
        count: classification.index(),
        representatives,
        provenance,
        raw_maps: classification.raw_count(),
        route,
    })
}

/// Output of [`latin_square_census_oracle`].
#[derive(Clone, Debug)]
pub struct OracleCensus {
    pub n: usize,
    pub count: usize,
    pub representatives: Vec<FiniteGroup>,
    /// Number of group tables on `0..n` with identity `0`.
    pub tables_enumerated: usize,
}

const EMPTY: u8 = u8::MAX;

#[derive(Clone)]
struct Square {
    n: usize,
    cells: Vec<u8>,
    row_used: Vec<u16>,
    col_used: Vec<u16>,
}

impl Square {
    fn new(n: usize) -> Self {
        let mut sq = Square { n, cells: vec![EMPTY; n * n], row_used: vec![0; n], col_used: vec![0; n] };
        for i in 0..n {
            sq.put(0, i, i as u8);
            if i > 0 {
                sq.put(i, 0, i as u8);
            }
        }
        sq
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.n + j]
    }

    fn put(&mut self, i: usize, j: usize, v: u8) -> bool {
        let cell = &mut self.cells[i * self.n + j];
        if *cell == v {
            return true;
        }
        let bit = 1u16 << v;
        if *cell != EMPTY || self.row_used[i] & bit != 0 || self.col_used[j] & bit != 0 {
            return false;
        }
        *cell = v;
        self.row_used[i] |= bit;
        self.col_used[j] |= bit;
        true
    }

    /// Forces `(ab)c = a(bc)` wherever one side is known; false on a clash.
    fn propagate(&mut self, work: &mut u64) -> bool {
        let n = self.n;
        loop {
            let mut changed = false;
            for a in 1..n {
                for b in 1..n {
                    let ab = self.get(a, b);
                    if ab == EMPTY {
                        continue;
                    }
                    for c in 1..n {
                        let bc = self.get(b, c);
                        if bc == EMPTY {
                            continue;
                        }
                        *work += 1;
                        let left = self.get(ab as usize, c);
                        let right = self.get(a, bc as usize);
                        match (left == EMPTY, right == EMPTY) {
                            (true, true) => {}
                            (false, false) => {
                                if left != right {
                                    return false;
                                }
                            }
                            (true, false) => {
                                if !self.put(ab as usize, c, right) {
                                    return false;
                                }
                                changed = true;
                            }
                            (false, true) => {
                                if !self.put(a, bc as usize, left) {
                                    return false;
                                }
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Empty cell with the fewest candidates, with its candidate mask.
    fn pick(&self) -> Option<(usize, usize, u16)> {
        let full = (1u16 << self.n) - 1;
        let mut best: Option<(usize, usize, u16)> = None;
        for i in 1..self.n {
            for j in 1..self.n {
                if self.get(i, j) != EMPTY {
                    continue;
                }
                let mask = full & !(self.row_used[i] | self.col_used[j]);
                if best.is_none_or(|(_, _, m)| mask.count_ones() < m.count_ones()) {
                    best = Some((i, j, mask));
                }
            }
        }
        best
    }
}

struct Completion<'a> {
    budget: &'a Budget,
}

impl Completion<'_> {
    fn child(&self, sq: &Square, i: usize, j: usize, v: u8) -> Option<Square> {
        let mut next = sq.clone();
        let mut work = 0;
        let ok = next.put(i, j, v) && next.propagate(&mut work);
        self.budget.charge(work);
        ok.then_some(next)
    }

    fn search(&self, sq: &Square, out: &mut Vec<Vec<u32>>) -> bool {
        if self.budget.exhausted() {
            return false;
        }
        let Some((i, j, mask)) = sq.pick() else {
            out.push(sq.cells.iter().map(|&c| c as u32).collect());
            return true;
        };
        for v in 0..sq.n as u8 {
            if mask & (1 << v) == 0 {
                continue;
            }
            if let Some(next) = self.child(sq, i, j, v) {
                if !self.search(&next, out) {
                    return false;
                }
            }
        }
        true
    }
}

/// Counts groups of order `n` by completing Cayley tables on `0..n` with
/// identity `0`, pruning with the Latin property and associativity, then
/// bucketing the complete tables by isomorphism.
pub fn latin_square_census_oracle(n: usize, budget: &Budget) -> Result<OracleCensus> {
    if n == 0 {
        return Err(Error::Input("n must be positive".into()));
    }
    if n > CENSUS_CAP {
        return Err(Error::OrderCapExceeded { cap: CENSUS_CAP });
    }
    let run = Completion { budget };
    let mut root = Square::new(n);
    let mut work = 0;
    let consistent = root.propagate(&mut work);
    budget.charge(work);
    let mut tables: Vec<Vec<u32>> = Vec::new();
    if consistent {
        match root.pick() {
            None => tables.push(root.cells.iter().map(|&c| c as u32).collect()),
            Some((i, j, mask)) => {
                let branches = par::map_range(n, |v| {
                    let mut out = Vec::new();
                    let mut finished = true;
                    if mask & (1 << v) != 0 {
                        if let Some(next) = run.child(&root, i, j, v as u8) {
                            finished = run.search(&next, &mut out);
                        }
                    }
                    (out, finished)
                });
                for (out, finished) in branches {
                    if !finished {
                        return Err(Error::BudgetExceeded { used: budget.used(), budget: budget.limit() });
                    }
                    tables.extend(out);
                }
            }
        }
    }
    if budget.exhausted() {
        return Err(Error::BudgetExceeded { used: budget.used(), budget: budget.limit() });
    }
    tables.sort();
    let groups: Vec<FiniteGroup> = par::map_slice(&tables, |t| {
        FiniteGroup::from_flat_table_trusted(n, t.clone(), crate::group::default_labels(n))
    });
    let invariants: Vec<GroupInvariants> = par::map_slice(&groups, GroupInvariants::of);
    let mut reps: Vec<usize> = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        let known = reps
            .iter()
            .any(|&r| invariants[r] == invariants[i] && are_isomorphic(&groups[r], g).is_some());
        if !known {
            reps.push(i);
        }
    }
    Ok(OracleCensus {
        n,
        count: reps.len(),
        representatives: reps.iter().map(|&r| canonical_relabeling(&groups[r])).collect(),
        tables_enumerated: tables.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matched_pair_routes_agree_small() {
        for n in 3..=5 {
            let mp = sn_matched_pair(n, SN_PAIR_CAP, &Limits::default()).unwrap();
            assert_eq!(mp.h().order(), n);
        }
        assert!(matches!(sn_matched_pair(8, SN_PAIR_CAP, &Limits::default()), Err(Error::OrderCapExceeded { .. })));
        assert!(sn_matched_pair(2, SN_PAIR_CAP, &Limits::default()).is_err());
    }

    #[test]
    fn x_acts_on_s1_by_shifting() {
        for n in 4..=6 {
            let sf = sn_factorization(n, &Limits::default()).unwrap();
            let mp = canonical_matched_pair(&sf.factorization);
            assert_eq!(mp.left(sf.x_power_index(1), sf.s_index(1)), sf.s_index(2));
        }
        let sf = sn_factorization(5, &Limits::default()).unwrap();
        let mp = canonical_matched_pair(&sf.factorization);
        assert_eq!(mp.right(sf.x_power_index(1), sf.s_index(3)), sf.x_power_index(2));
    }

    #[test]
    fn small_census_counts() {
        let expected = [1, 1, 1, 2, 1];
        for (k, &want) in expected.iter().enumerate() {
            let res = census(k + 1, &census_limits(), &Budget::default()).unwrap();
            assert_eq!(res.count, want, "n = {}", k + 1);
        }
    }

    #[test]
    fn oracle_small_counts() {
        let expected = [1, 1, 1, 2, 1, 2];
        for (k, &want) in expected.iter().enumerate() {
            let res = latin_square_census_oracle(k + 1, &Budget::default()).unwrap();
            assert_eq!(res.count, want, "n = {}", k + 1);
        }
        // labeled groups on 4 points with fixed identity: 3!/2 + 3!/6
        assert_eq!(latin_square_census_oracle(4, &Budget::default()).unwrap().tables_enumerated, 4);
    }

    #[test]
    fn relabeling_sorts_by_order() {
        let g = canonical_relabeling(&FiniteGroup::cyclic(4));
        assert_eq!(g.element_orders(), vec![1, 2, 4, 4]);
    }

    #[test]
    fn caps() {
        assert!(matches!(census(9, &census_limits(), &Budget::default()), Err(Error::OrderCapExceeded { .. })));
        assert!(matches!(latin_square_census_oracle(9, &Budget::default()), Err(Error::OrderCapExceeded { .. })));
        assert!(matches!(latin_square_census_oracle(6, &Budget::new(10)), Err(Error::BudgetExceeded { .. })));
    }
}
