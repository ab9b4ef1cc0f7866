//! Matched pairs of groups, exact factorizations and bicrossed products.
//!
//! Both actions are stored as dense `|H| × |A|` index tables, row-major in
//! `H`: `left(h, a)` is `h ▷ a ∈ A` and `right(h, a)` is `h ◁ a ∈ H`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Limits, SubgroupHandle};
use crate::iso::{is_bijection, is_morphism, GroupMap};
use crate::par;

#[derive(Clone)]
pub struct MatchedPair {
    a: Arc<FiniteGroup>,
    h: Arc<FiniteGroup>,
    lact: Vec<u32>,
    ract: Vec<u32>,
}

impl MatchedPair {
    /// Wraps action tables after a dimension check. Use
    /// [`validate_matched_pair`] to check the axioms.
    pub fn from_tables(
        a: Arc<FiniteGroup>,
        h: Arc<FiniteGroup>,
        lact: Vec<Vec<usize>>,
        ract: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let (na, nh) = (a.order(), h.order());
        let flatten = |rows: Vec<Vec<usize>>, bound: usize, name: &str| -> Result<Vec<u32>> {
            if rows.len() != nh || rows.iter().any(|r| r.len() != na) {
                return Err(Error::Dimension(format!("{name} table must be {nh}×{na}")));
            }
            let mut flat = Vec::with_capacity(nh * na);
            for v in rows.into_iter().flatten() {
                if v >= bound {
                    return Err(Error::IndexOutOfRange { index: v, order: bound });
                }
                flat.push(v as u32);
            }
            Ok(flat)
        };
        let lact = flatten(lact, na, "left action")?;
        let ract = flatten(ract, nh, "right action")?;
        Ok(MatchedPair { a, h, lact, ract })
    }

    pub(crate) fn from_flat(a: Arc<FiniteGroup>, h: Arc<FiniteGroup>, lact: Vec<u32>, ract: Vec<u32>) -> Self {
        debug_assert_eq!(lact.len(), a.order() * h.order());
        debug_assert_eq!(ract.len(), a.order() * h.order());
        MatchedPair { a, h, lact, ract }
    }

    /// Both actions trivial: the pair whose bicrossed product is `A × H`.
    pub fn trivial(a: Arc<FiniteGroup>, h: Arc<FiniteGroup>) -> Self {
        let (na, nh) = (a.order(), h.order());
        let lact = (0..nh * na).map(|k| (k % na) as u32).collect();
        let ract = (0..nh * na).map(|k| (k / na) as u32).collect();
        MatchedPair { a, h, lact, ract }
    }

    pub fn a(&self) -> &Arc<FiniteGroup> {
        &self.a
    }

    pub fn h(&self) -> &Arc<FiniteGroup> {
        &self.h
    }

    /// `h ▷ a`.
    #[inline]
    pub fn left(&self, h: usize, a: usize) -> usize {
        self.lact[h * self.a.order() + a] as usize
    }

    /// `h ◁ a`.
    #[inline]
    pub fn right(&self, h: usize, a: usize) -> usize {
        self.ract[h * self.a.order() + a] as usize
    }

    pub fn left_rows(&self) -> Vec<Vec<usize>> {
        self.lact.chunks(self.a.order()).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    pub fn right_rows(&self) -> Vec<Vec<usize>> {
        self.ract.chunks(self.a.order()).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    pub fn is_right_trivial(&self) -> bool {
        let na = self.a.order();
        self.ract.iter().enumerate().all(|(k, &v)| v as usize == k / na)
    }

    pub fn is_left_trivial(&self) -> bool {
        let na = self.a.order();
        self.lact.iter().enumerate().all(|(k, &v)| v as usize == k % na)
    }

    /// Identical action tables. The groups themselves are not compared.
    pub fn same_tables(&self, other: &MatchedPair) -> bool {
        self.lact == other.lact && self.ract == other.ract
    }

    /// The same pair on reordered rosters: new index `k` of `A` is old
    /// `a_order[k]`, likewise for `H`. Both orders must fix index 0.
    pub fn relabeled(&self, a_order: &[usize], h_order: &[usize]) -> Result<MatchedPair> {
        let (na, nh) = (self.a.order(), self.h.order());
        if !is_bijection(a_order, na) || !is_bijection(h_order, nh) || a_order[0] != 0 || h_order[0] != 0 {
            return Err(Error::Input("roster orders must be unit-preserving permutations".into()));
        }
        let mut pos_a = vec![0; na];
        for (k, &old) in a_order.iter().enumerate() {
            pos_a[old] = k;
        }
        let mut pos_h = vec![0; nh];
        for (k, &old) in h_order.iter().enumerate() {
            pos_h[old] = k;
        }
        let mut lact = Vec::with_capacity(na * nh);
        let mut ract = Vec::with_capacity(na * nh);
        for &y in h_order {
            for &x in a_order {
                lact.push(pos_a[self.left(y, x)] as u32);
                ract.push(pos_h[self.right(y, x)] as u32);
            }
        }
        let a = Arc::new(self.a.relabeled(a_order));
        let h = Arc::new(self.h.relabeled(h_order));
        Ok(MatchedPair { a, h, lact, ract })
    }

    pub(crate) fn ract_flat(&self) -> &[u32] {
        &self.ract
    }
}

impl fmt::Debug for MatchedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatchedPair").field("a", &self.a).field("h", &self.h).finish()
    }
}

/// One failed axiom instance. Indices are roster indices of `A` and `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairViolation {
    /// `1 ▷ a ≠ a`
    LeftUnit { a: usize },
    /// `(hg) ▷ a ≠ h ▷ (g ▷ a)`
    LeftAction { h: usize, g: usize, a: usize },
    /// `h ◁ 1 ≠ h`
    RightUnit { h: usize },
    /// `h ◁ (ab) ≠ (h ◁ a) ◁ b`
    RightAction { h: usize, a: usize, b: usize },
    /// `h ▷ (ab) ≠ (h ▷ a)((h ◁ a) ▷ b)`
    Compat2 { h: usize, a: usize, b: usize },
    /// `(hg) ◁ a ≠ (h ◁ (g ▷ a))(g ◁ a)`
    Compat3 { h: usize, g: usize, a: usize },
    /// `h ▷ 1 ≠ 1`
    LeftNormal { h: usize },
    /// `1 ◁ a ≠ 1`
    RightNormal { a: usize },
}

#[derive(Clone, Debug, Default)]
pub struct PairReport {
    pub violations: Vec<PairViolation>,
}

impl PairReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count_compat2(&self) -> usize {
        self.violations.iter().filter(|v| matches!(v, PairViolation::Compat2 { .. })).count()
    }
}

/// Exhaustively checks both action laws, the two compatibilities and the
/// normalizing conditions, listing every violated instance.
pub fn validate_matched_pair(mp: &MatchedPair) -> PairReport {
    let (a, h) = (&*mp.a, &*mp.h);
    let (na, nh) = (a.order(), h.order());
    let mut report = PairReport::default();
    for x in 0..na {
        if mp.left(0, x) != x {
            report.violations.push(PairViolation::LeftUnit { a: x });
        }
        if mp.right(0, x) != 0 {
            report.violations.push(PairViolation::RightNormal { a: x });
        }
    }
    for y in 0..nh {
        if mp.right(y, 0) != y {
            report.violations.push(PairViolation::RightUnit { h: y });
        }
        if mp.left(y, 0) != 0 {
            report.violations.push(PairViolation::LeftNormal { h: y });
        }
    }
    let per_h = par::flat_map_range(nh, |hh| {
        let mut out = Vec::new();
        for g in 0..nh {
            let hg = h.mul(hh, g);
            for x in 0..na {
                let gx = mp.left(g, x);
                if mp.left(hg, x) != mp.left(hh, gx) {
                    out.push(PairViolation::LeftAction { h: hh, g, a: x });
                }
                if mp.right(hg, x) != h.mul(mp.right(hh, gx), mp.right(g, x)) {
                    out.push(PairViolation::Compat3 { h: hh, g, a: x });
                }
            }
        }
        for x in 0..na {
            let hx_l = mp.left(hh, x);
            let hx_r = mp.right(hh, x);
            for b in 0..na {
                let xb = a.mul(x, b);
                if mp.right(hh, xb) != mp.right(hx_r, b) {
                    out.push(PairViolation::RightAction { h: hh, a: x, b });
                }
                if mp.left(hh, xb) != a.mul(hx_l, mp.left(hx_r, b)) {
                    out.push(PairViolation::Compat2 { h: hh, a: x, b });
                }
            }
        }
        out
    });
    report.violations.extend(per_h);
    report
}

/// `G = AH` with `A ∩ H = {1}`, plus the decomposition of every element.
#[derive(Clone, Debug)]
pub struct Factorization {
    a: SubgroupHandle,
    h: SubgroupHandle,
    a_group: Arc<FiniteGroup>,
    h_group: Arc<FiniteGroup>,
    /// `decomposition[g] = (i, j)` with `g = A[i]·H[j]` (subgroup roster positions).
    decomposition: Vec<(u32, u32)>,
}

impl Factorization {
    pub fn g(&self) -> &Arc<FiniteGroup> {
        self.a.parent()
    }

    pub fn a(&self) -> &SubgroupHandle {
        &self.a
    }

    pub fn h(&self) -> &SubgroupHandle {
        &self.h
    }

    /// `A` as a standalone group; roster position `i` is `a().members()[i]`.
    pub fn a_group(&self) -> &Arc<FiniteGroup> {
        &self.a_group
    }

    pub fn h_group(&self) -> &Arc<FiniteGroup> {
        &self.h_group
    }

    /// The unique `(i, j)` with `g = A[i]·H[j]`.
    pub fn decompose(&self, g: usize) -> (usize, usize) {
        let (i, j) = self.decomposition[g];
        (i as usize, j as usize)
    }

    /// Parent index of `A[i]·H[j]`.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.g().mul(self.a.members()[i], self.h.members()[j])
    }
}

/// Returns the factorization when `A ∩ H = {1}` and `|A||H| = |G|`.
pub fn check_factorization(a: &SubgroupHandle, h: &SubgroupHandle, limits: &Limits) -> Result<Option<Factorization>> {
    if !a.same_parent(h) {
        return Err(Error::NotASubgroup("A and H are subgroups of different groups".into()));
    }
    let g = a.parent();
    if a.order() * h.order() != g.order() {
        return Ok(None);
    }
    if a.members().iter().skip(1).any(|&x| h.contains(x)) {
        return Ok(None);
    }
    let mut decomposition = vec![(u32::MAX, u32::MAX); g.order()];
    for (i, &x) in a.members().iter().enumerate() {
        for (j, &y) in h.members().iter().enumerate() {
            let prod = g.mul(x, y);
            if decomposition[prod].0 != u32::MAX {
                return Ok(None);
            }
            decomposition[prod] = (i as u32, j as u32);
        }
    }
    Ok(Some(Factorization {
        a_group: Arc::new(a.to_group(limits)),
        h_group: Arc::new(h.to_group(limits)),
        a: a.clone(),
        h: h.clone(),
        decomposition,
    }))
}

/// The canonical matched pair: `h·a = (h ▷ a)(h ◁ a)` read off in `G`.
pub fn canonical_matched_pair(f: &Factorization) -> MatchedPair {
    let g = f.g();
    let (na, nh) = (f.a.order(), f.h.order());
    let rows = par::map_range(nh, |j| {
        let y = f.h.members()[j];
        (0..na)
            .map(|i| {
                let prod = g.mul(y, f.a.members()[i]);
                f.decomposition[prod]
            })
            .collect::<Vec<_>>()
    });
    let mut lact = Vec::with_capacity(na * nh);
    let mut ract = Vec::with_capacity(na * nh);
    for (l, r) in rows.into_iter().flatten() {
        lact.push(l);
        ract.push(r);
    }
    MatchedPair::from_flat(f.a_group.clone(), f.h_group.clone(), lact, ract)
}

/// The bicrossed product `A ⋈ H` on the roster `(a, h) ↦ a·|H| + h`.
#[derive(Clone, Debug)]
pub struct BicrossedProduct {
    pub group: Arc<FiniteGroup>,
    /// `{(a, 1)}`
    pub a_embedding: SubgroupHandle,
    /// `{(1, h)}`
    pub h_embedding: SubgroupHandle,
    nh: usize,
}

impl BicrossedProduct {
    #[inline]
    pub fn index(&self, a: usize, h: usize) -> usize {
        a * self.nh + h
    }

    #[inline]
    pub fn split(&self, x: usize) -> (usize, usize) {
        (x / self.nh, x % self.nh)
    }
}

/// `(a, h)·(b, g) = (a (h ▷ b), (h ◁ b) g)`.
pub fn bicrossed_product(mp: &MatchedPair, limits: &Limits) -> Result<BicrossedProduct> {
    let (a, h) = (&*mp.a, &*mp.h);
    let (na, nh) = (a.order(), h.order());
    let n = na * nh;
    if n > limits.table_cap {
        return Err(Error::OrderCapExceeded { cap: limits.table_cap });
    }
    let report = validate_matched_pair(mp);
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidMatchedPair(format!("{v:?} ({} violations)", report.violations.len())));
    }
    let rows = par::map_range(n, |x| {
        let (xa, xh) = (x / nh, x % nh);
        (0..n)
            .map(|y| {
                let (ya, yh) = (y / nh, y % nh);
                let pa = a.mul(xa, mp.left(xh, ya));
                let ph = h.mul(mp.right(xh, ya), yh);
                (pa * nh + ph) as u32
            })
            .collect::<Vec<_>>()
    });
    let labels = (0..n).map(|x| format!("({},{})", a.label(x / nh), h.label(x % nh))).collect();
    let group = Arc::new(FiniteGroup::from_flat_table_trusted(n, rows.concat(), labels));
    let a_embedding = SubgroupHandle::from_members(&group, (0..na).map(|i| i * nh).collect())?;
    let h_embedding = SubgroupHandle::from_members(&group, (0..nh).collect())?;
    Ok(BicrossedProduct { group, a_embedding, h_embedding, nh })
}

/// A map between groups together with whether it fixes `A` pointwise.
#[derive(Clone, Debug)]
pub struct PairMorphism {
    pub map: GroupMap,
    pub stabilizes_a: bool,
}

impl PairMorphism {
    pub fn is_isomorphism_stabilizing_a(&self) -> bool {
        self.map.is_isomorphism() && self.stabilizes_a
    }
}

/// `m_G(a, h) = a·h` from the bicrossed product of the canonical pair into `G`.
pub fn multiplication_map(f: &Factorization, mp: &MatchedPair, limits: &Limits) -> Result<PairMorphism> {
    let product = bicrossed_product(mp, limits)?;
    let g = f.g();
    let n = product.group.order();
    let images: Vec<usize> = (0..n)
        .map(|x| {
            let (i, j) = product.split(x);
            f.compose(i, j)
        })
        .collect();
    let stabilizes_a = (0..f.a.order()).all(|i| images[product.index(i, 0)] == f.a.members()[i]);
    let map = GroupMap::new(&product.group, g, images)?;
    Ok(PairMorphism { map, stabilizes_a })
}

/// One failed compatibility when checking a pair `(r, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    /// `h' ▷' a ≠ r(h') (v(h') ▷ a) r(h' ◁' a)⁻¹`
    LeftCompat { h: usize, a: usize },
    /// `v(h' ◁' a) ≠ v(h') ◁ a`
    RightCompat { h: usize, a: usize },
    /// `r(h'g') ≠ r(h') (v(h') ▷ r(g'))`
    RMultiplicative { h: usize, g: usize },
    /// `v(h'g') ≠ (v(h') ◁ r(g')) v(g')`
    VMultiplicative { h: usize, g: usize },
}

/// All violated compatibilities for `(r, v)` from `(A, H', ▷', ◁')` to `(A, H, ▷, ◁)`.
pub fn morphism_pair_violations(
    src: &MatchedPair,
    tgt: &MatchedPair,
    r: &[usize],
    v: &[usize],
) -> Result<Vec<MorphismViolation>> {
    let a = &*src.a;
    if src.a.order() != tgt.a.order() {
        return Err(Error::Dimension("matched pairs have different A".into()));
    }
    let (na, nh_src, nh_tgt) = (a.order(), src.h.order(), tgt.h.order());
    if r.len() != nh_src || v.len() != nh_src {
        return Err(Error::Dimension(format!("r and v must have length {nh_src}")));
    }
    if r.iter().any(|&x| x >= na) || v.iter().any(|&x| x >= nh_tgt) {
        return Err(Error::Dimension("r or v has an out-of-range entry".into()));
    }
    if r[0] != 0 || v[0] != 0 {
        return Err(Error::Input("r and v must preserve the unit".into()));
    }
    let hs = &*src.h;
    let out = par::flat_map_range(nh_src, |hp| {
        let mut out = Vec::new();
        for x in 0..na {
            let rhs = a.mul(a.mul(r[hp], tgt.left(v[hp], x)), a.inv(r[src.right(hp, x)]));
            if src.left(hp, x) != rhs {
                out.push(MorphismViolation::LeftCompat { h: hp, a: x });
            }
            if v[src.right(hp, x)] != tgt.right(v[hp], x) {
                out.push(MorphismViolation::RightCompat { h: hp, a: x });
            }
        }
        for gp in 0..nh_src {
            let prod = hs.mul(hp, gp);
            if r[prod] != a.mul(r[hp], tgt.left(v[hp], r[gp])) {
                out.push(MorphismViolation::RMultiplicative { h: hp, g: gp });
            }
            if v[prod] != tgt.h.mul(tgt.right(v[hp], r[gp]), v[gp]) {
                out.push(MorphismViolation::VMultiplicative { h: hp, g: gp });
            }
        }
        out
    });
    Ok(out)
}

/// The morphism `ψ(a, h') = (a r(h'), v(h'))` between bicrossed products, if
/// `(r, v)` satisfies all four compatibilities.
pub fn morphism_from_pair(
    src: &MatchedPair,
    tgt: &MatchedPair,
    r: &[usize],
    v: &[usize],
    limits: &Limits,
) -> Result<Option<PairMorphism>> {
    if !morphism_pair_violations(src, tgt, r, v)?.is_empty() {
        return Ok(None);
    }
    let p_src = bicrossed_product(src, limits)?;
    let p_tgt = bicrossed_product(tgt, limits)?;
    let a = &*src.a;
    let images: Vec<usize> = (0..p_src.group.order())
        .map(|x| {
            let (xa, xh) = p_src.split(x);
            p_tgt.index(a.mul(xa, r[xh]), v[xh])
        })
        .collect();
    let stabilizes_a = (0..a.order()).all(|i| images[p_src.index(i, 0)] == p_tgt.index(i, 0));
    let is_morphism_flag = is_morphism(&p_src.group, &p_tgt.group, &images);
    let is_bijective = is_bijection(v, tgt.h.order());
    Ok(Some(PairMorphism {
        map: GroupMap { images, is_morphism: is_morphism_flag, is_bijective },
        stabilizes_a,
    }))
}

/// Prescribed `(h ▷ a, h ◁ a)` for a generator `h` of `H` and a generator `a` of `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorAction {
    pub h: usize,
    pub a: usize,
    pub left: usize,
    pub right: usize,
}

/// Extends actions given on generator pairs to full tables.
///
/// Saturates breadth-first using the action laws and both compatibilities,
/// checking every re-derived entry against the stored one. Entries left open
/// after saturation are guessed and saturated again; only completions passing
/// full validation are kept. Fails with [`Error::ActionConflict`] on an
/// inconsistency, when no completion is valid, or when two valid completions
/// exist, and with [`Error::InvalidMatchedPair`] if tables fixed by the data
/// alone still violate an axiom.
pub fn extend_actions_from_generators(
    a: Arc<FiniteGroup>,
    h: Arc<FiniteGroup>,
    data: &[GeneratorAction],
) -> Result<MatchedPair> {
    let (na, nh) = (a.order(), h.order());
    for d in data {
        if d.h >= nh || d.right >= nh {
            return Err(Error::IndexOutOfRange { index: d.h.max(d.right), order: nh });
        }
        if d.a >= na || d.left >= na {
            return Err(Error::IndexOutOfRange { index: d.a.max(d.left), order: na });
        }
    }
    let mut gens_a: Vec<usize> = data.iter().map(|d| d.a).collect();
    let mut gens_h: Vec<usize> = data.iter().map(|d| d.h).collect();
    gens_a.sort_unstable();
    gens_a.dedup();
    gens_h.sort_unstable();
    gens_h.dedup();
    let is_gen_a: Vec<bool> = (0..na).map(|x| gens_a.binary_search(&x).is_ok()).collect();
    let is_gen_h: Vec<bool> = (0..nh).map(|y| gens_h.binary_search(&y).is_ok()).collect();
    let rules = Rules { a: &a, h: &h, gens_a: &gens_a, gens_h: &gens_h, is_gen_a: &is_gen_a, is_gen_h: &is_gen_h };

    let mut sat = Saturation {
        known: vec![None; na * nh],
        by_right: vec![Vec::new(); nh],
        by_left: vec![Vec::new(); na],
        work: Vec::new(),
        cursor: 0,
    };
    for x in 0..na {
        sat.set(&rules, 0, x, x, 0)?;
    }
    for y in 1..nh {
        sat.set(&rules, y, 0, 0, y)?;
    }
    for d in data {
        sat.set(&rules, d.h, d.a, d.left, d.right)?;
    }
    sat.run(&rules)?;

    if sat.known.iter().all(Option::is_some) {
        let mp = sat.into_pair(&rules);
        let report = validate_matched_pair(&mp);
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidMatchedPair(format!("{v:?} ({} violations)", report.violations.len())));
        }
        return Ok(mp);
    }
    let mut found = Vec::new();
    let mut nodes = 0usize;
    complete(&rules, sat, &mut found, &mut nodes)?;
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(Error::ActionConflict("no completion of the generator data satisfies the axioms".into())),
        _ => Err(Error::ActionConflict("generator data does not determine the actions".into())),
    }
}

/// Search nodes allowed when guessing undetermined entries.
const COMPLETION_NODE_CAP: usize = 1 << 16;

fn complete(rules: &Rules<'_>, sat: Saturation, found: &mut Vec<MatchedPair>, nodes: &mut usize) -> Result<()> {
    let (na, nh) = (rules.a.order(), rules.h.order());
    let Some(pos) = sat.known.iter().position(Option::is_none) else {
        let mp = sat.into_pair(rules);
        if validate_matched_pair(&mp).is_valid() {
            found.push(mp);
        }
        return Ok(());
    };
    let (y, x) = (pos / na, pos % na);
    for l in 0..na {
        for r in 0..nh {
            *nodes += 1;
            if *nodes > COMPLETION_NODE_CAP {
                return Err(Error::ActionConflict(format!(
                    "entry (h={}, a={}) is not determined by the generator data",
                    rules.h.label(y),
                    rules.a.label(x)
                )));
            }
            let mut next = sat.clone();
            if next.set(rules, y, x, l, r).is_err() || next.run(rules).is_err() {
                continue;
            }
            complete(rules, next, found, nodes)?;
            if found.len() > 1 {
                return Ok(());
            }
        }
    }
    Ok(())
}

struct Rules<'a> {
    a: &'a Arc<FiniteGroup>,
    h: &'a Arc<FiniteGroup>,
    gens_a: &'a [usize],
    gens_h: &'a [usize],
    is_gen_a: &'a [bool],
    is_gen_h: &'a [bool],
}

#[derive(Clone)]
struct Saturation {
    known: Vec<Option<(u32, u32)>>,
    by_right: Vec<Vec<(usize, usize)>>,
    by_left: Vec<Vec<(usize, usize)>>,
    work: Vec<(usize, usize)>,
    cursor: usize,
}

impl Saturation {
    fn get(&self, na: usize, y: usize, x: usize) -> Option<(usize, usize)> {
        self.known[y * na + x].map(|(l, r)| (l as usize, r as usize))
    }

    fn set(&mut self, rules: &Rules<'_>, y: usize, x: usize, l: usize, r: usize) -> Result<()> {
        let slot = y * rules.a.order() + x;
        match self.known[slot] {
            Some((l0, r0)) if (l0 as usize, r0 as usize) != (l, r) => Err(Error::ActionConflict(format!(
                "h={}, a={}: derived (h▷a, h◁a) = ({}, {}) but already have ({}, {})",
                rules.h.label(y),
                rules.a.label(x),
                rules.a.label(l),
                rules.h.label(r),
                rules.a.label(l0 as usize),
                rules.h.label(r0 as usize)
            ))),
            Some(_) => Ok(()),
            None => {
                self.known[slot] = Some((l as u32, r as u32));
                self.by_right[r].push((y, x));
                self.by_left[l].push((y, x));
                self.work.push((y, x));
                Ok(())
            }
        }
    }

    fn run(&mut self, rules: &Rules<'_>) -> Result<()> {
        let (a, h) = (&**rules.a, &**rules.h);
        let na = a.order();
        while self.cursor < self.work.len() {
            let (y, x) = self.work[self.cursor];
            self.cursor += 1;
            let (l, r) = self.get(na, y, x).unwrap();
            // h ▷ (xb), h ◁ (xb) from (y, x) and (y ◁ x, b)
            for &b in rules.gens_a {
                if let Some((l2, r2)) = self.get(na, r, b) {
                    self.set(rules, y, a.mul(x, b), a.mul(l, l2), r2)?;
                }
            }
            if rules.is_gen_a[x] {
                let waiting = self.by_right[y].clone();
                for (y1, x1) in waiting {
                    let (l1, _) = self.get(na, y1, x1).unwrap();
                    self.set(rules, y1, a.mul(x1, x), a.mul(l1, l), r)?;
                }
            }
            // (sg) ▷ a, (sg) ◁ a from (g, a) and (s, g ▷ a)
            for &s in rules.gens_h {
                if let Some((l2, r2)) = self.get(na, s, l) {
                    self.set(rules, h.mul(s, y), x, l2, h.mul(r2, r))?;
                }
            }
            if rules.is_gen_h[y] {
                let waiting = self.by_left[x].clone();
                for (y1, x1) in waiting {
                    let (_, r1) = self.get(na, y1, x1).unwrap();
                    self.set(rules, h.mul(y, y1), x1, l, h.mul(r, r1))?;
                }
            }
        }
        Ok(())
    }

    fn into_pair(self, rules: &Rules<'_>) -> MatchedPair {
        let n = self.known.len();
        let mut lact = Vec::with_capacity(n);
        let mut ract = Vec::with_capacity(n);
        for (l, r) in self.known.into_iter().flatten() {
            lact.push(l);
            ract.push(r);
        }
        MatchedPair::from_flat(rules.a.clone(), rules.h.clone(), lact, ract)
    }
}
