//! Maps between finite groups and brute-force isomorphism search.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Limits, SubgroupHandle};
use crate::par;

const UNSET: usize = usize::MAX;

/// A unit-preserving map between two group rosters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    pub images: Vec<usize>,
    pub is_morphism: bool,
    pub is_bijective: bool,
}

impl GroupMap {
    /// Checks dimensions and computes the morphism/bijection flags.
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::Dimension(format!(
                "map has {} images for a source of order {}",
                images.len(),
                source.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= target.order()) {
            return Err(Error::IndexOutOfRange { index: bad, order: target.order() });
        }
        if images[0] != 0 {
            return Err(Error::Input("map does not preserve the unit".into()));
        }
        let is_morphism = is_morphism(source, target, &images);
        let is_bijective = is_bijection(&images, target.order());
        Ok(GroupMap { images, is_morphism, is_bijective })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupMap { images: (0..g.order()).collect(), is_morphism: true, is_bijective: true }
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_morphism && self.is_bijective
    }

    pub fn inverse_images(&self) -> Option<Vec<usize>> {
        if !self.is_bijective {
            return None;
        }
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Some(inv)
    }
}

pub fn is_bijection(images: &[usize], target_order: usize) -> bool {
    if images.len() != target_order {
        return false;
    }
    let mut seen = vec![false; target_order];
    images.iter().all(|&j| j < target_order && !std::mem::replace(&mut seen[j], true))
}

/// `images[a·b] = images[a]·images[b]` for all pairs.
pub fn is_morphism(source: &FiniteGroup, target: &FiniteGroup, images: &[usize]) -> bool {
    let n = source.order();
    par::all_range(n, |a| {
        (0..n).all(|b| images[source.mul(a, b)] == target.mul(images[a], images[b]))
    })
}

/// Cheap isomorphism invariants: order, sorted element orders, center size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupInvariants {
    pub order: usize,
    pub element_orders: Vec<usize>,
    pub center_size: usize,
}

impl GroupInvariants {
    pub fn of(g: &FiniteGroup) -> Self {
        let mut element_orders = g.element_orders();
        element_orders.sort_unstable();
        GroupInvariants { order: g.order(), element_orders, center_size: g.center_size() }
    }
}

struct Search<'a> {
    src: &'a FiniteGroup,
    tgt: &'a FiniteGroup,
    gens: Vec<usize>,
    candidates: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(src: &'a FiniteGroup, tgt: &'a FiniteGroup) -> Self {
        let gens = src.generating_sequence();
        let src_orders = src.element_orders();
        let tgt_orders = tgt.element_orders();
        let candidates = gens
            .iter()
            .map(|&g| (0..tgt.order()).filter(|&t| tgt_orders[t] == src_orders[g]).collect())
            .collect();
        Search { src, tgt, gens, candidates }
    }

    /// Extends the generator assignment to a map on the subgroup they
    /// generate. Fails on an inconsistency or a non-injective image.
    fn extend(&self, images: &[usize]) -> Option<Vec<usize>> {
        let n = self.src.order();
        let mut map = vec![UNSET; n];
        let mut used = vec![false; self.tgt.order()];
        map[0] = 0;
        used[0] = true;
        let mut queue = vec![0usize];
        let mut k = 0;
        while k < queue.len() {
            let e = queue[k];
            k += 1;
            for (&s, &img) in self.gens[..images.len()].iter().zip(images) {
                let prod = self.src.mul(e, s);
                let value = self.tgt.mul(map[e], img);
                if map[prod] == UNSET {
                    if used[value] {
                        return None;
                    }
                    used[value] = true;
                    map[prod] = value;
                    queue.push(prod);
                } else if map[prod] != value {
                    return None;
                }
            }
        }
        Some(map)
    }

    fn descend(&self, images: &mut Vec<usize>, sink: &mut dyn FnMut(Vec<usize>) -> bool) -> bool {
        let depth = images.len();
        if depth == self.gens.len() {
            if let Some(map) = self.extend(images) {
                return sink(map);
            }
            return false;
        }
        for &c in &self.candidates[depth] {
            images.push(c);
            let ok = self.extend(images).is_some();
            if ok && self.descend(images, sink) {
                images.pop();
                return true;
            }
            images.pop();
        }
        false
    }

    fn first_from(&self, first: usize) -> Option<Vec<usize>> {
        let mut images = vec![first];
        self.extend(&images)?;
        let mut found = None;
        self.descend(&mut images, &mut |m| {
            found = Some(m);
            true
        });
        found
    }
}

/// Returns an isomorphism `g1 → g2` if one exists.
///
/// Pre-screens on [`GroupInvariants`], then backtracks over images of a
/// greedy generating sequence of `g1`. Deterministic: the witness is the
/// first found in candidate order.
pub fn are_isomorphic(g1: &FiniteGroup, g2: &FiniteGroup) -> Option<GroupMap> {
    if g1.order() != g2.order() {
        return None;
    }
    if g1.order() == 1 {
        return Some(GroupMap::identity(g1));
    }
    if GroupInvariants::of(g1) != GroupInvariants::of(g2) {
        return None;
    }
    find_isomorphism_unscreened(g1, g2)
}

pub(crate) fn find_isomorphism_unscreened(g1: &FiniteGroup, g2: &FiniteGroup) -> Option<GroupMap> {
    let search = Search::new(g1, g2);
    let first = &search.candidates[0];
    let map = par::find_map_first(first.len(), |k| search.first_from(first[k]))?;
    Some(GroupMap { images: map, is_morphism: true, is_bijective: true })
}

/// All automorphisms of `g`, sorted by image sequence.
pub fn automorphisms(g: &FiniteGroup) -> Vec<Vec<usize>> {
    if g.order() == 1 {
        return vec![vec![0]];
    }
    let search = Search::new(g, g);
    let first = &search.candidates[0];
    let mut all = par::flat_map_range(first.len(), |k| {
        let mut images = vec![first[k]];
        let mut out = Vec::new();
        if search.extend(&images).is_some() {
            search.descend(&mut images, &mut |m| {
                out.push(m);
                false
            });
        }
        out
    });
    all.sort();
    all
}

/// Left-regular embedding of `h` into the symmetric group of degree `|h|`.
///
/// The identity of `h` becomes point `n` and element `i > 0` becomes point
/// `i`, so the image meets the stabilizer of `n` trivially.
pub fn regular_embedding(h: &FiniteGroup, limits: &Limits) -> Result<(Arc<FiniteGroup>, SubgroupHandle)> {
    let n = h.order();
    let factorial = (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
    match factorial {
        Some(f) if f <= limits.max_order => {}
        _ => return Err(Error::OrderCapExceeded { cap: limits.max_order }),
    }
    let sn = Arc::new(FiniteGroup::symmetric(n, limits)?);
    let point = |i: usize| if i == 0 { n - 1 } else { i - 1 };
    let mut members = Vec::with_capacity(n);
    for g in 0..n {
        let mut images = vec![0u32; n];
        for x in 0..n {
            images[point(x)] = point(h.mul(g, x)) as u32;
        }
        let p = crate::perm::Perm::from_images(images)?;
        members.push(sn.index_of_perm(&p).expect("symmetric group contains every permutation"));
    }
    let image = SubgroupHandle::from_members(&sn, members)?;
    Ok((sn, image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn lim() -> Limits {
        Limits::default()
    }

    fn perm_group(n: usize, gens: &[&str]) -> FiniteGroup {
        let g: Vec<Perm> = gens.iter().map(|t| Perm::parse_cycles(t, n).unwrap()).collect();
        FiniteGroup::closure(n, &g, &lim()).unwrap()
    }

    #[test]
    fn reflexive_identity_witness() {
        let s3 = perm_group(3, &["(1 2)", "(1 2 3)"]);
        let w = are_isomorphic(&s3, &s3).unwrap();
        assert!(w.is_isomorphism());
        assert!(GroupMap::new(&s3, &s3, w.images.clone()).unwrap().is_isomorphism());
    }

    #[test]
    fn cyclic_four_is_not_klein() {
        let c4 = perm_group(4, &["(1 2 3 4)"]);
        let v4 = perm_group(4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        assert!(are_isomorphic(&c4, &v4).is_none());
        assert!(are_isomorphic(&c4, &FiniteGroup::cyclic(4)).is_some());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&FiniteGroup::cyclic(8)).len(), 4);
        assert_eq!(automorphisms(&perm_group(3, &["(1 2)", "(1 2 3)"])).len(), 6);
        assert_eq!(automorphisms(&perm_group(4, &["(1 2)(3 4)", "(1 3)(2 4)"])).len(), 6);
        let d8 = perm_group(4, &["(1 2 3 4)", "(1 3)"]);
        assert_eq!(automorphisms(&d8).len(), 8);
        assert_eq!(automorphisms(&FiniteGroup::cyclic(1)).len(), 1);
    }

    #[test]
    fn regular_embedding_small() {
        let (s1, img) = regular_embedding(&FiniteGroup::cyclic(1), &lim()).unwrap();
        assert_eq!((s1.order(), img.order()), (1, 1));
        let (s2, img) = regular_embedding(&FiniteGroup::cyclic(2), &lim()).unwrap();
        assert_eq!((s2.order(), img.order()), (2, 2));
    }

    #[test]
    fn regular_embedding_is_semiregular_at_last_point() {
        let h = perm_group(4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        let (s4, img) = regular_embedding(&h, &lim()).unwrap();
        for &m in &img.members()[1..] {
            assert!(s4.perm(m).unwrap().moves(4));
        }
        let image_group = img.to_group(&lim());
        assert!(are_isomorphic(&image_group, &h).is_some());
    }

    #[test]
    fn group_map_flags() {
        let c4 = FiniteGroup::cyclic(4);
        let double = GroupMap::new(&c4, &c4, vec![0, 2, 0, 2]).unwrap();
        assert!(double.is_morphism && !double.is_bijective);
        let swap = GroupMap::new(&c4, &c4, vec![0, 2, 1, 3]).unwrap();
        assert!(!swap.is_morphism && swap.is_bijective);
        assert!(GroupMap::new(&c4, &c4, vec![1, 0, 2, 3]).is_err());
        assert!(GroupMap::new(&c4, &c4, vec![0, 1]).is_err());
    }
}
