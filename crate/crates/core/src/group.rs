//! Finite groups materialized as an element roster.
//!
//! Index 0 is always the identity. Small groups carry a dense Cayley table;
//! permutation groups above [`Limits::table_cap`] multiply on demand through
//! their permutation realization instead.

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::par;
use crate::perm::Perm;

/// Size caps for group construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order [`FiniteGroup::closure`] may produce.
    pub max_order: usize,
    /// Largest order for which a dense Cayley table is built.
    pub table_cap: usize,
    /// Largest order for which associativity is checked exhaustively.
    pub assoc_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_order: 50_000, table_cap: 200, assoc_cap: 200 }
    }
}

#[derive(Clone)]
struct Realization {
    degree: usize,
    elements: Vec<Perm>,
    index: FxHashMap<Box<[u32]>, u32>,
}

impl Realization {
    fn new(degree: usize, elements: Vec<Perm>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images().to_vec().into_boxed_slice(), i as u32))
            .collect();
        Realization { degree, elements, index }
    }

    #[inline]
    fn lookup(&self, images: &[u32]) -> Option<usize> {
        self.index.get(images).map(|&i| i as usize)
    }

    #[inline]
    fn mul(&self, i: usize, j: usize) -> usize {
        let p = self.elements[i].images();
        let q = self.elements[j].images();
        let mut buf = [0u32; 32];
        if self.degree <= buf.len() {
            for (slot, &k) in buf.iter_mut().zip(q) {
                *slot = p[k as usize];
            }
            self.lookup(&buf[..self.degree]).expect("product left the group")
        } else {
            let v: Vec<u32> = q.iter().map(|&k| p[k as usize]).collect();
            self.lookup(&v).expect("product left the group")
        }
    }
}

/// A finite group on the roster `0..order`.
#[derive(Clone)]
pub struct FiniteGroup {
    labels: Vec<String>,
    inverses: Vec<u32>,
    table: Option<Vec<u32>>,
    realization: Option<Realization>,
}

/// One failed group axiom instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupViolation {
    RowNotPermutation(usize),
    ColumnNotPermutation(usize),
    Identity(usize),
    Associativity(usize, usize, usize),
    Inverse(usize),
}

#[derive(Clone, Debug, Default)]
pub struct GroupReport {
    pub violations: Vec<GroupViolation>,
    /// False when the order exceeded the associativity cap and that check was skipped.
    pub associativity_checked: bool,
}

impl GroupReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteGroup {
    /// Builds a group from row-major Cayley rows, validating every axiom.
    pub fn from_table(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidGroup("table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, order: n });
                }
                flat.push(v as u32);
            }
        }
        Self::from_flat_table(n, flat, labels)
    }

    /// Flat row-major variant of [`FiniteGroup::from_table`].
    pub fn from_flat_table(n: usize, flat: Vec<u32>, labels: Option<Vec<String>>) -> Result<Self> {
        if flat.len() != n * n {
            return Err(Error::InvalidGroup("table has wrong size".into()));
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::InvalidGroup(format!("{} labels for order {n}", l.len())))
            }
            Some(l) => l,
            None => default_labels(n),
        };
        let mut inverses = vec![u32::MAX; n];
        for i in 0..n {
            if let Some(j) = (0..n).find(|&j| flat[i * n + j] == 0) {
                inverses[i] = j as u32;
            }
        }
        let g = FiniteGroup { labels, inverses, table: Some(flat), realization: None };
        let report = g.validate(Limits::default().assoc_cap);
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidGroup(format!("{v:?} ({} violations)", report.violations.len())));
        }
        Ok(g)
    }

    /// Table-backed group without validation; callers guarantee the axioms.
    pub(crate) fn from_flat_table_trusted(n: usize, flat: Vec<u32>, labels: Vec<String>) -> Self {
        let mut inverses = vec![0u32; n];
        for i in 0..n {
            let row = &flat[i * n..(i + 1) * n];
            inverses[i] = row.iter().position(|&v| v == 0).expect("row without identity") as u32;
        }
        FiniteGroup { labels, inverses, table: Some(flat), realization: None }
    }

    /// Group on an explicit roster of permutations (identity first, closed
    /// under composition).
    pub fn from_perm_roster(degree: usize, elements: Vec<Perm>, limits: &Limits) -> Result<Self> {
        if elements.is_empty() || !elements[0].is_identity() {
            return Err(Error::InvalidGroup("roster must start with the identity".into()));
        }
        if let Some(p) = elements.iter().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch { left: degree, right: p.degree() });
        }
        if elements.len() > limits.max_order {
            return Err(Error::OrderCapExceeded { cap: limits.max_order });
        }
        let real = Realization::new(degree, elements);
        if real.index.len() != real.elements.len() {
            return Err(Error::InvalidGroup("repeated element in roster".into()));
        }
        let n = real.elements.len();
        let mut inverses = Vec::with_capacity(n);
        for p in &real.elements {
            let inv = p.inverse();
            match real.lookup(inv.images()) {
                Some(i) => inverses.push(i as u32),
                None => return Err(Error::NotASubgroup("roster not closed under inverses".into())),
            }
        }
        let closed = par::all_range(n, |i| {
            (0..n).all(|j| {
                let prod = real.elements[i].compose_unchecked(&real.elements[j]);
                real.lookup(prod.images()).is_some()
            })
        });
        if !closed {
            return Err(Error::NotASubgroup("roster not closed under composition".into()));
        }
        Ok(Self::with_realization(real, inverses, limits))
    }

    fn with_realization(real: Realization, inverses: Vec<u32>, limits: &Limits) -> Self {
        let n = real.elements.len();
        let labels = real.elements.iter().map(|p| p.to_string()).collect();
        let table = if n <= limits.table_cap {
            let rows = par::map_range(n, |i| (0..n).map(|j| real.mul(i, j) as u32).collect::<Vec<_>>());
            Some(rows.concat())
        } else {
            None
        };
        FiniteGroup { labels, inverses, table, realization: Some(real) }
    }

    /// The group generated by `gens`.
    ///
    /// The roster is breadth-first in word length from the generators; each
    /// new layer is sorted lexicographically by image sequence.
    pub fn closure(degree: usize, gens: &[Perm], limits: &Limits) -> Result<Self> {
        if let Some(p) = gens.iter().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch { left: degree, right: p.degree() });
        }
        let mut gens: Vec<Perm> = gens.iter().filter(|p| !p.is_identity()).cloned().collect();
        gens.sort();
        gens.dedup();

        let mut seen: FxHashMap<Box<[u32]>, u32> = FxHashMap::default();
        let id = Perm::identity(degree);
        seen.insert(id.images().into(), 0);
        let mut elements = vec![id];
        let mut layer_start = 0;
        loop {
            let layer_end = elements.len();
            let mut fresh: Vec<Perm> = Vec::new();
            for e in &elements[layer_start..layer_end] {
                for s in &gens {
                    let prod = e.compose_unchecked(s);
                    if !seen.contains_key(prod.images()) {
                        seen.insert(prod.images().into(), u32::MAX);
                        fresh.push(prod);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            if elements.len() + fresh.len() > limits.max_order {
                return Err(Error::OrderCapExceeded { cap: limits.max_order });
            }
            fresh.sort();
            for p in fresh {
                *seen.get_mut(p.images()).unwrap() = elements.len() as u32;
                elements.push(p);
            }
            layer_start = layer_end;
        }
        let real = Realization { degree, elements, index: seen };
        let inverses = real
            .elements
            .iter()
            .map(|p| real.lookup(p.inverse().images()).unwrap() as u32)
            .collect();
        Ok(Self::with_realization(real, inverses, limits))
    }

    /// Symmetric group on `degree` points, generated by adjacent transpositions.
    pub fn symmetric(degree: usize, limits: &Limits) -> Result<Self> {
        Self::closure(degree, &adjacent_transpositions(degree), limits)
    }

    /// Cyclic group of order `n` as a table (roster = powers of the generator).
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let flat = (0..n * n).map(|k| (((k / n) + (k % n)) % n) as u32).collect();
        let labels = (0..n).map(|k| if k == 0 { "1".to_string() } else { format!("c^{k}") }).collect();
        Self::from_flat_table_trusted(n, flat, labels)
    }

    /// Direct product on the roster `(a, b) ↦ a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let mut flat = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                flat.push((a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32);
            }
        }
        let labels = (0..n).map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb))).collect();
        Self::from_flat_table_trusted(n, flat, labels)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.inverses.len()
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.order() + j] as usize,
            None => self.realization.as_ref().expect("group without multiplication").mul(i, j),
        }
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.inverses[i] as usize
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.order() {
            return Err(Error::Dimension(format!("{} labels for order {}", labels.len(), self.order())));
        }
        self.labels = labels;
        Ok(())
    }

    /// Degree of the permutation realization, if any.
    pub fn degree(&self) -> Option<usize> {
        self.realization.as_ref().map(|r| r.degree)
    }

    pub fn perm(&self, i: usize) -> Option<&Perm> {
        self.realization.as_ref().map(|r| &r.elements[i])
    }

    pub fn perms(&self) -> Option<&[Perm]> {
        self.realization.as_ref().map(|r| r.elements.as_slice())
    }

    pub fn index_of_perm(&self, p: &Perm) -> Option<usize> {
        let real = self.realization.as_ref()?;
        if p.degree() != real.degree {
            return None;
        }
        real.lookup(p.images())
    }

    /// Row-major Cayley table as nested vectors.
    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|i| (0..n).map(|j| self.mul(i, j)).collect()).collect()
    }

    pub fn power(&self, i: usize, k: usize) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, i);
        }
        acc
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut acc = i;
        while acc != 0 {
            acc = self.mul(acc, i);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        par::map_range(self.order(), |i| self.element_order(i))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        par::all_range(n, |i| (0..i).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    pub fn center_size(&self) -> usize {
        let n = self.order();
        par::map_range(n, |i| (0..n).all(|j| self.mul(i, j) == self.mul(j, i)))
            .into_iter()
            .filter(|&c| c)
            .count()
    }

    /// Sorted members of the subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        self.generate_from(&[0], gens)
    }

    /// Sorted members of the subgroup generated by `base` (assumed to be a
    /// subgroup) together with `gens`.
    pub fn generate_from(&self, base: &[usize], gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order()];
        let mut members: Vec<usize> = Vec::new();
        for &b in base.iter().chain(std::iter::once(&0)) {
            if !in_set[b] {
                in_set[b] = true;
                members.push(b);
            }
        }
        let all_gens: Vec<usize> = base.iter().chain(gens).copied().filter(|&g| g != 0).collect();
        let mut k = 0;
        while k < members.len() {
            let e = members[k];
            for &s in &all_gens {
                let p = self.mul(e, s);
                if !in_set[p] {
                    in_set[p] = true;
                    members.push(p);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        members
    }

    /// A short generating sequence: repeatedly add an element of largest
    /// order (lowest index on ties) outside the current subgroup.
    pub fn generating_sequence(&self) -> Vec<usize> {
        let orders = self.element_orders();
        let mut by_order: Vec<usize> = (1..self.order()).collect();
        by_order.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut current = vec![0];
        for g in by_order {
            if current.len() == self.order() {
                break;
            }
            if !inside[g] {
                gens.push(g);
                current = self.generate_from(&current, &[g]);
                for &m in &current {
                    inside[m] = true;
                }
            }
        }
        gens
    }

    /// Reorders the roster: new index `k` is old index `order[k]`.
    /// `order[0]` must be the identity.
    pub fn relabeled(&self, order: &[usize]) -> FiniteGroup {
        let n = self.order();
        assert_eq!(order.len(), n);
        assert_eq!(order[0], 0);
        let mut pos = vec![0usize; n];
        for (k, &old) in order.iter().enumerate() {
            pos[old] = k;
        }
        let mut flat = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                flat.push(pos[self.mul(i, j)] as u32);
            }
        }
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        FiniteGroup::from_flat_table_trusted(n, flat, labels)
    }

    /// Exhaustive axiom check; associativity only up to `assoc_cap`.
    pub fn validate(&self, assoc_cap: usize) -> GroupReport {
        let n = self.order();
        let mut report = GroupReport::default();
        for i in 0..n {
            let mut seen = vec![false; n];
            if !(0..n).all(|j| !std::mem::replace(&mut seen[self.mul(i, j)], true)) {
                report.violations.push(GroupViolation::RowNotPermutation(i));
            }
            let mut seen = vec![false; n];
            if !(0..n).all(|j| !std::mem::replace(&mut seen[self.mul(j, i)], true)) {
                report.violations.push(GroupViolation::ColumnNotPermutation(i));
            }
            if self.mul(0, i) != i || self.mul(i, 0) != i {
                report.violations.push(GroupViolation::Identity(i));
            }
            let inv = self.inverses[i];
            if inv as usize >= n || self.mul(i, inv as usize) != 0 {
                report.violations.push(GroupViolation::Inverse(i));
            }
        }
        if n <= assoc_cap {
            report.associativity_checked = true;
            let bad = par::flat_map_range(n, |a| {
                let mut out = Vec::new();
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            out.push(GroupViolation::Associativity(a, b, c));
                        }
                    }
                }
                out
            });
            report.violations.extend(bad);
        }
        report
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("degree", &self.degree())
            .field("table", &self.has_table())
            .finish()
    }
}

/// For permutation groups on the same points: `map[i]` is the index in `to`
/// of element `i` of `from`.
pub fn roster_map_by_perms(from: &FiniteGroup, to: &FiniteGroup) -> Option<Vec<usize>> {
    from.perms()?.iter().map(|p| to.index_of_perm(p)).collect()
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("e{i}") }).collect()
}

/// `(1 2), (2 3), …, (n-1 n)` in degree `n`.
pub fn adjacent_transpositions(degree: usize) -> Vec<Perm> {
    (1..degree).map(|i| Perm::from_cycles(degree, &[&[i, i + 1]]).unwrap()).collect()
}

/// A subgroup of a parent group, as a sorted set of parent indices.
#[derive(Clone)]
pub struct SubgroupHandle {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl SubgroupHandle {
    pub fn generated(parent: &Arc<FiniteGroup>, gens: &[usize]) -> Self {
        SubgroupHandle { parent: parent.clone(), members: parent.generate(gens) }
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        SubgroupHandle { parent: parent.clone(), members: vec![0] }
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        SubgroupHandle { parent: parent.clone(), members: (0..parent.order()).collect() }
    }

    /// Subgroup generated by permutations that must lie in the parent.
    pub fn from_perms(parent: &Arc<FiniteGroup>, gens: &[Perm]) -> Result<Self> {
        let idx = gens
            .iter()
            .map(|p| {
                parent
                    .index_of_perm(p)
                    .ok_or_else(|| Error::NotASubgroup(format!("{p} is not in the parent group")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::generated(parent, &idx))
    }

    /// Validates that `members` form a subgroup.
    pub fn from_members(parent: &Arc<FiniteGroup>, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&m) = members.iter().find(|&&m| m >= parent.order()) {
            return Err(Error::IndexOutOfRange { index: m, order: parent.order() });
        }
        if members.first() != Some(&0) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        let closed = par::all_range(members.len(), |i| {
            let a = members[i];
            members.binary_search(&parent.inv(a)).is_ok()
                && members.iter().all(|&b| members.binary_search(&parent.mul(a, b)).is_ok())
        });
        if !closed {
            return Err(Error::NotASubgroup("not closed".into()));
        }
        Ok(SubgroupHandle { parent: parent.clone(), members })
    }

    /// `members` must be a sorted subgroup of `parent`.
    pub(crate) fn from_sorted_trusted(parent: &Arc<FiniteGroup>, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        SubgroupHandle { parent: parent.clone(), members }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Position of parent element `g` in this subgroup's roster.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.members.binary_search(&g).ok()
    }

    /// Materializes the subgroup as a group whose roster is `members()` in order.
    pub fn to_group(&self, limits: &Limits) -> FiniteGroup {
        let parent = &self.parent;
        let m = self.members.len();
        if let Some(real) = &parent.realization {
            let elements: Vec<Perm> = self.members.iter().map(|&g| real.elements[g].clone()).collect();
            let sub = Realization::new(real.degree, elements);
            let inverses = self.members.iter().map(|&g| self.position(parent.inv(g)).unwrap() as u32).collect();
            let mut g = FiniteGroup::with_realization(sub, inverses, limits);
            g.labels = self.members.iter().map(|&x| parent.labels[x].clone()).collect();
            g
        } else {
            let mut pos = vec![u32::MAX; parent.order()];
            for (k, &g) in self.members.iter().enumerate() {
                pos[g] = k as u32;
            }
            let mut flat = Vec::with_capacity(m * m);
            for &a in &self.members {
                for &b in &self.members {
                    flat.push(pos[parent.mul(a, b)]);
                }
            }
            let labels = self.members.iter().map(|&x| parent.labels[x].clone()).collect();
            FiniteGroup::from_flat_table_trusted(m, flat, labels)
        }
    }

    pub fn same_parent(&self, other: &SubgroupHandle) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent)
    }
}

impl fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupHandle").field("members", &self.members).finish()
    }
}

impl PartialEq for SubgroupHandle {
    fn eq(&self, other: &Self) -> bool {
        self.same_parent(other) && self.members == other.members
    }
}

impl Eq for SubgroupHandle {}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Perm {
        Perm::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn closure_examples() {
        let lim = Limits::default();
        let triv = FiniteGroup::closure(3, &[], &lim).unwrap();
        assert_eq!(triv.order(), 1);
        let s3 = FiniteGroup::closure(3, &[p("(1 2)", 3), p("(1 2 3)", 3)], &lim).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let c4 = FiniteGroup::closure(4, &[p("(1 2 3 4)", 4)], &lim).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        let mut orders = c4.element_orders();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 4, 4]);
        // roster of a cyclic closure is the sequence of powers
        let x = p("(1 2 3 4)", 4);
        for k in 0..4 {
            assert_eq!(c4.perm(k).unwrap(), &x.pow(k));
        }
    }

    #[test]
    fn closure_validates() {
        let lim = Limits::default();
        let s4 = FiniteGroup::symmetric(4, &lim).unwrap();
        assert_eq!(s4.order(), 24);
        let report = s4.validate(200);
        assert!(report.is_valid() && report.associativity_checked);
    }

    #[test]
    fn closure_respects_cap() {
        let lim = Limits { max_order: 100, ..Limits::default() };
        assert!(matches!(FiniteGroup::symmetric(5, &lim), Err(Error::OrderCapExceeded { cap: 100 })));
    }

    #[test]
    fn closure_is_deterministic() {
        let lim = Limits::default();
        let a = FiniteGroup::closure(4, &[p("(1 2)", 4), p("(1 2 3 4)", 4)], &lim).unwrap();
        let b = FiniteGroup::closure(4, &[p("(1 2 3 4)", 4), p("(1 2)", 4), p("(1 2)", 4)], &lim).unwrap();
        assert_eq!(a.perms(), b.perms());
    }

    #[test]
    fn lazy_multiplication_matches_table() {
        let big = Limits { table_cap: 10, ..Limits::default() };
        let lazy = FiniteGroup::symmetric(4, &big).unwrap();
        let dense = FiniteGroup::symmetric(4, &Limits::default()).unwrap();
        assert!(!lazy.has_table() && dense.has_table());
        assert_eq!(lazy.cayley_rows(), dense.cayley_rows());
    }

    #[test]
    fn rejects_bad_tables() {
        // not a Latin square
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
        // Latin with identity but not associative (order 5 loop)
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(loop5, None).unwrap_err();
        assert!(err.to_string().contains("Associativity"), "{err}");
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]], None).is_ok());
    }

    #[test]
    fn subgroup_handles() {
        let lim = Limits::default();
        let s4 = Arc::new(FiniteGroup::symmetric(4, &lim).unwrap());
        let klein = SubgroupHandle::from_perms(&s4, &[p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)]).unwrap();
        assert_eq!(klein.order(), 4);
        assert!(SubgroupHandle::from_members(&s4, klein.members().to_vec()).is_ok());
        let t = s4.index_of_perm(&p("(1 2)", 4)).unwrap();
        assert!(SubgroupHandle::from_members(&s4, vec![0, t, s4.index_of_perm(&p("(2 3)", 4)).unwrap()]).is_err());
        let kg = klein.to_group(&lim);
        assert!(kg.validate(200).is_valid());
        assert!(kg.is_abelian());
    }

    #[test]
    fn direct_and_cyclic() {
        let c2 = FiniteGroup::cyclic(2);
        let v = FiniteGroup::direct_product(&c2, &c2);
        assert!(v.validate(200).is_valid());
        assert_eq!(v.element_orders(), vec![1, 2, 2, 2]);
        assert_eq!(FiniteGroup::cyclic(6).center_size(), 6);
    }

    #[test]
    fn generating_sequence_generates() {
        let lim = Limits::default();
        let s4 = FiniteGroup::symmetric(4, &lim).unwrap();
        let gens = s4.generating_sequence();
        assert_eq!(s4.generate(&gens).len(), 24);
        assert!(gens.len() <= 3);
    }
}
