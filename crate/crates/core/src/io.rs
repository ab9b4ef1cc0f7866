//! JSON file formats and report structures.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::census::{CensusResult, OracleCensus};
use crate::complement::ComplementSet;
use crate::deformation::{ClassificationResult, DeformedGroup};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Limits, SubgroupHandle};
use crate::matched_pair::{GeneratorAction, MatchedPair, PairReport};
use crate::perm::Perm;

/// A group given by permutation generators or by a Cayley table.
///
/// With `elements`, the roster follows that list (identity first); otherwise
/// it is the closure order of the generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupFile {
    Perm {
        degree: usize,
        generators: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        elements: Option<Vec<String>>,
        /// Display names, in roster order; requires `elements`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Table {
        cayley: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

impl GroupFile {
    pub fn build(&self, limits: &Limits) -> Result<FiniteGroup> {
        match self {
            GroupFile::Perm { degree, generators, elements, labels } => {
                let gens = parse_perms(generators, *degree)?;
                let closed = FiniteGroup::closure(*degree, &gens, limits)?;
                let Some(elements) = elements else {
                    if labels.is_some() {
                        return Err(Error::Input("labels need an explicit element list".into()));
                    }
                    return Ok(closed);
                };
                let listed = parse_perms(elements, *degree)?;
                let mut a: Vec<&Perm> = listed.iter().collect();
                let mut b: Vec<&Perm> = closed.perms().expect("permutation group").iter().collect();
                a.sort();
                b.sort();
                if a != b {
                    return Err(Error::InvalidGroup("listed elements differ from the generated group".into()));
                }
                let mut g = FiniteGroup::from_perm_roster(*degree, listed, limits)?;
                if let Some(labels) = labels {
                    g.set_labels(labels.clone())?;
                }
                Ok(g)
            }
            GroupFile::Table { cayley, labels } => FiniteGroup::from_table(cayley.clone(), labels.clone()),
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        match (g.degree(), g.perms()) {
            (Some(degree), Some(perms)) => {
                let elements: Vec<String> = perms.iter().map(Perm::to_string).collect();
                let labels = (g.labels() != elements.as_slice()).then(|| g.labels().to_vec());
                GroupFile::Perm {
                    degree,
                    generators: g.generating_sequence().iter().map(|&i| perms[i].to_string()).collect(),
                    elements: Some(elements),
                    labels,
                }
            }
            _ => GroupFile::Table { cayley: g.cayley_rows(), labels: Some(g.labels().to_vec()) },
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_perms(texts: &[String], degree: usize) -> Result<Vec<Perm>> {
    texts.iter().map(|t| Perm::parse_cycles(t, degree)).collect()
}

/// Finds an element by cycle notation (permutation groups), label, or index.
pub fn resolve_element(g: &FiniteGroup, text: &str) -> Result<usize> {
    if let Some(degree) = g.degree() {
        if text.trim_start().starts_with('(') || text.trim().is_empty() {
            let p = Perm::parse_cycles(text, degree)?;
            return g
                .index_of_perm(&p)
                .ok_or_else(|| Error::NotASubgroup(format!("{p} is not in the group")));
        }
    }
    if let Some(i) = g.labels().iter().position(|l| l == text) {
        return Ok(i);
    }
    match text.trim().parse::<usize>() {
        Ok(i) if i < g.order() => Ok(i),
        Ok(i) => Err(Error::IndexOutOfRange { index: i, order: g.order() }),
        Err(_) => Err(Error::Input(format!("unknown element {text:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedPairFile {
    #[serde(rename = "A")]
    pub a: GroupFile,
    #[serde(rename = "H")]
    pub h: GroupFile,
    /// `lact[h][a] = h ▷ a`
    pub lact: Vec<Vec<usize>>,
    /// `ract[h][a] = h ◁ a`
    pub ract: Vec<Vec<usize>>,
}

impl MatchedPairFile {
    /// Builds the pair; the axioms are not checked here.
    pub fn build(&self, limits: &Limits) -> Result<MatchedPair> {
        let a = Arc::new(self.a.build(limits)?);
        let h = Arc::new(self.h.build(limits)?);
        MatchedPair::from_tables(a, h, self.lact.clone(), self.ract.clone())
    }

    pub fn from_pair(mp: &MatchedPair) -> Self {
        MatchedPairFile {
            a: GroupFile::from_group(mp.a()),
            h: GroupFile::from_group(mp.h()),
            lact: mp.left_rows(),
            ract: mp.right_rows(),
        }
    }
}

/// One prescribed generator action, elements given as in [`resolve_element`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorActionFile {
    pub h: String,
    pub a: String,
    pub left: String,
    pub right: String,
}

/// A matched pair given only on generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorPairFile {
    #[serde(rename = "A")]
    pub a: GroupFile,
    #[serde(rename = "H")]
    pub h: GroupFile,
    pub generators: Vec<GeneratorActionFile>,
}

impl GeneratorPairFile {
    pub fn build(&self, limits: &Limits) -> Result<(Arc<FiniteGroup>, Arc<FiniteGroup>, Vec<GeneratorAction>)> {
        let a = Arc::new(self.a.build(limits)?);
        let h = Arc::new(self.h.build(limits)?);
        let data = self
            .generators
            .iter()
            .map(|g| {
                Ok(GeneratorAction {
                    h: resolve_element(&h, &g.h)?,
                    a: resolve_element(&a, &g.a)?,
                    left: resolve_element(&a, &g.left)?,
                    right: resolve_element(&h, &g.right)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((a, h, data))
    }
}

/// A group with two subgroups given by generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group: GroupFile,
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<String>>,
}

/// Parent group and subgroups resolved from a [`FactorizationFile`].
#[derive(Clone, Debug)]
pub struct ResolvedFactorization {
    pub g: Arc<FiniteGroup>,
    pub a: SubgroupHandle,
    pub h: Option<SubgroupHandle>,
}

impl FactorizationFile {
    pub fn resolve(&self, limits: &Limits) -> Result<ResolvedFactorization> {
        let g = Arc::new(self.group.build(limits)?);
        let sub = |gens: &[String]| -> Result<SubgroupHandle> {
            let idx = gens.iter().map(|t| resolve_element(&g, t)).collect::<Result<Vec<_>>>()?;
            Ok(SubgroupHandle::generated(&g, &idx))
        };
        let a = sub(&self.a)?;
        let h = self.h.as_deref().map(sub).transpose()?;
        Ok(ResolvedFactorization { g, a, h })
    }
}

/// Where a deformation map file finds its matched pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairSource {
    Path(String),
    Inline(Box<MatchedPairFile>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationMapFile {
    pub pair: PairSource,
    pub r: Vec<usize>,
}

/// An explicit map from a source group onto some target roster.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsomorphismFile {
    pub source: GroupFile,
    pub images: Vec<usize>,
}

/// Shipped data for a worked example. Every part is optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExampleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<MatchedPairFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_pair: Option<GeneratorPairFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<FactorizationFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, Vec<usize>>,
    /// Keyed by the name of the map whose deformation is the target.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub isomorphisms: BTreeMap<String, IsomorphismFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

impl From<&PairReport> for ValidationReport {
    fn from(r: &PairReport) -> Self {
        ValidationReport { valid: r.is_valid(), violations: r.violations.iter().map(|v| format!("{v:?}")).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
    pub element_orders: Vec<usize>,
    pub cayley: Vec<Vec<usize>>,
    pub labels: Vec<String>,
}

impl GroupSummary {
    pub fn of(g: &FiniteGroup) -> Self {
        GroupSummary {
            order: g.order(),
            abelian: g.is_abelian(),
            element_orders: g.element_orders(),
            cayley: g.cayley_rows(),
            labels: g.labels().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformedReport {
    pub r: Vec<usize>,
    pub group: GroupSummary,
    pub inverses: Vec<usize>,
}

impl DeformedReport {
    pub fn of(d: &DeformedGroup) -> Self {
        DeformedReport {
            r: d.map.values().to_vec(),
            group: GroupSummary::of(&d.group),
            inverses: (0..d.group.order()).map(|i| d.group.inv(i)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub representative: Vec<usize>,
    /// Indices into `maps`.
    pub members: Vec<usize>,
    /// `witnesses[k]` maps the deformation of `members[k]` onto the representative's.
    pub witnesses: Vec<Vec<usize>>,
    pub deformed: GroupSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub index: usize,
    pub raw_count: usize,
    pub maps: Vec<Vec<usize>>,
    pub classes: Vec<ClassReport>,
}

impl ClassificationReport {
    pub fn of(c: &ClassificationResult) -> Self {
        ClassificationReport {
            index: c.index(),
            raw_count: c.raw_count(),
            maps: c.all_maps.iter().map(|m| m.values().to_vec()).collect(),
            classes: c
                .classes
                .iter()
                .map(|cl| ClassReport {
                    representative: c.all_maps[cl.representative].values().to_vec(),
                    members: cl.members.clone(),
                    witnesses: cl.witnesses.iter().map(|w| w.sigma.clone()).collect(),
                    deformed: GroupSummary::of(&cl.deformed.group),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusGroup {
    pub cayley: Vec<Vec<usize>>,
    pub r: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub count: usize,
    pub groups: Vec<CensusGroup>,
}

impl CensusReport {
    pub fn of(c: &CensusResult) -> Self {
        CensusReport {
            n: c.n,
            count: c.count,
            groups: c
                .representatives
                .iter()
                .zip(&c.provenance)
                .map(|(g, r)| CensusGroup { cayley: g.cayley_rows(), r: r.values().to_vec() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    pub count: usize,
    pub tables_enumerated: usize,
    pub groups: Vec<Vec<Vec<usize>>>,
}

impl OracleReport {
    pub fn of(o: &OracleCensus) -> Self {
        OracleReport {
            n: o.n,
            count: o.count,
            tables_enumerated: o.tables_enumerated,
            groups: o.representatives.iter().map(FiniteGroup::cayley_rows).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementEntry {
    pub generators: Vec<String>,
    pub order: usize,
    pub class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementClassEntry {
    pub representative: usize,
    pub members: Vec<usize>,
    pub element_orders: Vec<usize>,
    pub abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementReport {
    pub index: usize,
    pub complements: Vec<ComplementEntry>,
    pub classes: Vec<ComplementClassEntry>,
}

impl ComplementReport {
    pub fn of(set: &ComplementSet, limits: &Limits) -> Self {
        let g = set.g();
        let name = |i: usize| match g.perm(i) {
            Some(p) => p.to_string(),
            None => g.label(i).to_string(),
        };
        let groups: Vec<FiniteGroup> = set.complements.iter().map(|k| k.to_group(limits)).collect();
        let complements = set
            .complements
            .iter()
            .zip(&groups)
            .enumerate()
            .map(|(i, (k, grp))| ComplementEntry {
                generators: grp.generating_sequence().iter().map(|&j| name(k.members()[j])).collect(),
                order: k.order(),
                class: set.class_of(i).expect("every complement is classified"),
            })
            .collect();
        let classes = set
            .iso_classes
            .iter()
            .map(|c| {
                let mut element_orders = groups[c.representative].element_orders();
                element_orders.sort_unstable();
                ComplementClassEntry {
                    representative: c.representative,
                    members: c.members.clone(),
                    element_orders,
                    abelian: groups[c.representative].is_abelian(),
                }
            })
            .collect();
        ComplementReport { index: set.index(), complements, classes }
    }
}

/// The two action tables laid out with rows indexed by `H` and columns by `A`.
pub fn render_action_tables(mp: &MatchedPair) -> String {
    let (a, h) = (mp.a(), mp.h());
    let mut out = String::new();
    for (title, right) in [("▷", false), ("◁", true)] {
        let cell = |y: usize, x: usize| {
            if right {
                h.label(mp.right(y, x)).to_string()
            } else {
                a.label(mp.left(y, x)).to_string()
            }
        };
        let mut rows: Vec<Vec<String>> = vec![std::iter::once(title.to_string()).chain(a.labels().iter().cloned()).collect()];
        for y in 0..h.order() {
            rows.push(std::iter::once(h.label(y).to_string()).chain((0..a.order()).map(|x| cell(y, x))).collect());
        }
        out.push_str(&render_grid(&rows));
        out.push('\n');
    }
    out
}

/// Left-aligned columns separated by two spaces.
pub fn render_grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, s) in row.iter().enumerate() {
            let _ = write!(line, "{s:<width$}", width = widths[c]);
            if c + 1 < row.len() {
                line.push_str("  ");
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// A Cayley table with the group's labels on both axes.
pub fn render_cayley(g: &FiniteGroup) -> String {
    let mut rows = vec![std::iter::once("·".to_string()).chain(g.labels().iter().cloned()).collect::<Vec<_>>()];
    for i in 0..g.order() {
        rows.push(std::iter::once(g.label(i).to_string()).chain((0..g.order()).map(|j| g.label(g.mul(i, j)).to_string())).collect());
    }
    render_grid(&rows)
}
