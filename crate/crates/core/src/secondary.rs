//! Vertex vectors of the higher secondary polytopes, k-equivalence quotients
//! of the flip graph, their skeletons, and the level potentials.
//!
//! Two tilings are k-equivalent when a path of flips avoiding level `k`
//! joins them. The skeleton of `Σ_k` is the quotient of the regular tilings
//! by k-equivalence with edges from level-`k` flips; `Σ_k + Σ_{k-1}` uses
//! simultaneous k- and (k-1)-equivalence with edges from either level.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{PointConfig, Rational};
use crate::error::{Error, Result};
use crate::flipgraph::FlipGraph;
use crate::formulas;
use crate::graph::{self, UNREACHED};
use crate::tiling::Tiling;

/// `vert_k(T) = Σ_{Π_{A,B} ∈ T, |A| = k} |a_j − a_i| · e_A`, a length-`n` vector.
pub fn vert_k(config: &PointConfig, tiling: &Tiling, k: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); config.n()];
    for t in tiling.tiles().filter(|t| t.offset.len() == k) {
        let area = config.pair_area(t.i, t.j);
        for m in t.offset.iter() {
            out[m] += &area;
        }
    }
    out
}

/// Which nodes a partition covers.
#[derive(Clone, Copy, Debug)]
pub enum Restrict<'a> {
    All,
    /// Only nodes whose flag is set; classes are still connected through
    /// every tiling.
    Regular(&'a [bool]),
}

impl Restrict<'_> {
    fn keeps(&self, v: u32) -> bool {
        match self {
            Restrict::All => true,
            Restrict::Regular(mask) => mask[v as usize],
        }
    }
}

const NO_CLASS: u32 = u32::MAX;

/// A partition of (a subset of) the nodes. Classes are numbered by their
/// smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
}

impl Partition {
    pub(crate) fn from_labels(labels: &[u32], keep: impl Fn(u32) -> bool) -> Self {
        let mut renumber: HashMap<u32, u32> = HashMap::new();
        let mut class_of = vec![NO_CLASS; labels.len()];
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for (v, &label) in labels.iter().enumerate() {
            if !keep(v as u32) {
                continue;
            }
            let c = *renumber.entry(label).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() as u32 - 1
            });
            class_of[v] = c;
            classes[c as usize].push(v as u32);
        }
        Partition { class_of, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, node: u32) -> Option<u32> {
        let c = self.class_of[node as usize];
        (c != NO_CLASS).then_some(c)
    }

    pub fn members(&self, class: u32) -> &[u32] {
        &self.classes[class as usize]
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }
}

// Component label (smallest node id) of every node, using edges whose level
// is not deleted and whose endpoints both pass `through`.
fn component_labels(graph: &FlipGraph, deleted: &[u8], through: impl Fn(u32) -> bool) -> Vec<u32> {
    let mut label = vec![UNREACHED; graph.len()];
    let mut stack = Vec::new();
    for s in 0..graph.len() as u32 {
        if label[s as usize] != UNREACHED {
            continue;
        }
        label[s as usize] = s;
        if !through(s) {
            continue;
        }
        stack.push(s);
        while let Some(u) = stack.pop() {
            for e in graph.edges(u) {
                if !deleted.contains(&e.level) && label[e.to as usize] == UNREACHED && through(e.to) {
                    label[e.to as usize] = s;
                    stack.push(e.to);
                }
            }
        }
    }
    label
}

/// Connected components after deleting every edge whose level is in
/// `deleted`, then intersected with the restriction.
pub fn equivalence_classes(graph: &FlipGraph, deleted: &[u8], restrict: Restrict<'_>) -> Partition {
    let labels = component_labels(graph, deleted, |_| true);
    Partition::from_labels(&labels, |v| restrict.keeps(v))
}

/// Like [`equivalence_classes`] with `Restrict::Regular`, but paths may only
/// pass through regular tilings.
pub fn regular_path_classes(graph: &FlipGraph, deleted: &[u8], regular: &[bool]) -> Partition {
    let labels = component_labels(graph, deleted, |v| regular[v as usize]);
    Partition::from_labels(&labels, |v| regular[v as usize])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SkeletonMode {
    /// k-classes of regular tilings, level-k edges.
    SigmaK,
    /// Simultaneous {k, k−1}-classes of regular tilings, edges at either level.
    SigmaKPlusPrev,
    /// `SigmaKPlusPrev` over all tilings: the lifting hypertriangulation graph at level k.
    LiftingAll,
    /// `SigmaK` over all tilings: the reduced hypertriangulation graph at level k + 1.
    ReducedAll,
}

impl SkeletonMode {
    pub fn levels(self, k: usize) -> Vec<u8> {
        match self {
            SkeletonMode::SigmaK | SkeletonMode::ReducedAll => vec![k as u8],
            SkeletonMode::SigmaKPlusPrev | SkeletonMode::LiftingAll => {
                if k > 1 {
                    vec![k as u8, k as u8 - 1]
                } else {
                    vec![k as u8]
                }
            }
        }
    }

    pub fn regular_only(self) -> bool {
        matches!(self, SkeletonMode::SigmaK | SkeletonMode::SigmaKPlusPrev)
    }

    pub fn formula(self, n: usize, k: usize) -> i64 {
        match self {
            SkeletonMode::SigmaK | SkeletonMode::ReducedAll => formulas::sigma_k_diameter(n, k),
            SkeletonMode::SigmaKPlusPrev | SkeletonMode::LiftingAll => formulas::sigma_k_plus_prev_diameter(n, k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SkeletonMode::SigmaK => "sigma_k",
            SkeletonMode::SigmaKPlusPrev => "sigma_k_plus_prev",
            SkeletonMode::LiftingAll => "lifting_all",
            SkeletonMode::ReducedAll => "reduced_all",
        }
    }
}

impl fmt::Display for SkeletonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct QuotientSkeleton {
    pub mode: SkeletonMode,
    pub k: usize,
    pub partition: Partition,
    /// Class adjacency, multi-edges collapsed.
    pub adjacency: Vec<Vec<u32>>,
    /// Edge-level flips whose endpoints share a class. Always 0 in practice;
    /// kept as a finding rather than an assertion.
    pub intra_class_edges: usize,
}

impl QuotientSkeleton {
    pub fn class_count(&self) -> usize {
        self.partition.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn diameter(&self) -> Result<graph::Diameter> {
        graph::diameter(&self.adjacency)
    }

    pub fn degree_multiset(&self) -> Vec<usize> {
        graph::degree_multiset(&self.adjacency)
    }

    pub fn edge_set(&self) -> BTreeSet<(u32, u32)> {
        let mut out = BTreeSet::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if (u as u32) < v {
                    out.insert((u as u32, v));
                }
            }
        }
        out
    }
}

/// Quotient skeleton of the given mode. Regular modes need the regularity mask.
pub fn skeleton(graph: &FlipGraph, k: usize, mode: SkeletonMode, regular: Option<&[bool]>) -> Result<QuotientSkeleton> {
    let n = graph.n();
    if k == 0 || k + 2 > n {
        return Err(Error::LevelOutOfRange { level: k, n });
    }
    let restrict = if mode.regular_only() {
        let mask = regular.ok_or_else(|| Error::Invalid(format!("{mode} needs the regularity flags")))?;
        Restrict::Regular(mask)
    } else {
        Restrict::All
    };
    let levels = mode.levels(k);
    let partition = equivalence_classes(graph, &levels, restrict);
    let mut edges = Vec::new();
    let mut intra = 0;
    for u in 0..graph.len() as u32 {
        let Some(cu) = partition.class_of(u) else { continue };
        for e in graph.edges(u).iter().filter(|e| e.to > u && levels.contains(&e.level)) {
            let Some(cv) = partition.class_of(e.to) else { continue };
            if cu == cv {
                intra += 1;
            } else {
                edges.push((cu, cv));
            }
        }
    }
    let adjacency = graph::adjacency_from_edges(partition.len(), edges);
    Ok(QuotientSkeleton {
        mode,
        k,
        partition,
        adjacency,
        intra_class_edges: intra,
    })
}

/// Checks that `opposite` induces an isomorphism from `a` onto `b`, via the
/// class map `class_a(T) ↦ class_b(opposite(T))`.
pub fn opposite_isomorphism(graph: &FlipGraph, a: &QuotientSkeleton, b: &QuotientSkeleton) -> bool {
    if a.class_count() != b.class_count() || a.degree_multiset() != b.degree_multiset() {
        return false;
    }
    let mut map = vec![NO_CLASS; a.class_count()];
    for (c, members) in a.partition.classes().iter().enumerate() {
        for &v in members {
            let Some(image) = b.partition.class_of(graph.opposite_id(v)) else {
                return false;
            };
            if map[c] == NO_CLASS {
                map[c] = image;
            } else if map[c] != image {
                return false;
            }
        }
    }
    let distinct: HashSet<u32> = map.iter().copied().collect();
    if distinct.len() != map.len() {
        return false;
    }
    let mapped: BTreeSet<(u32, u32)> = a
        .edge_set()
        .into_iter()
        .map(|(u, v)| {
            let (x, y) = (map[u as usize], map[v as usize]);
            (x.min(y), x.max(y))
        })
        .collect();
    mapped == b.edge_set()
}

/// Which offset sizes count towards `T⁺_k` and `T⁻_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Threshold {
    /// `|A| ≥ k` and `|A| ≤ k − 2`.
    Definition,
    /// `|A| ≥ n − k − 1` and `|A| ≤ k − 2`, as used for the T_min/T_max count.
    Shifted,
}

impl Threshold {
    fn plus_min(self, n: usize, k: usize) -> usize {
        match self {
            Threshold::Definition => k,
            Threshold::Shifted => (n - 1).saturating_sub(k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Threshold::Definition => "definition",
            Threshold::Shifted => "shifted",
        }
    }
}

fn plus_minus(t: &Tiling, k: usize, threshold: Threshold) -> (u128, u128) {
    let lo = threshold.plus_min(t.n(), k);
    let plus = t.pairs_where(|s| s >= lo);
    let minus = if k >= 2 { t.pairs_where(|s| s + 2 <= k) } else { 0 };
    (plus, minus)
}

fn signed_difference(x: u128, y: u128) -> i64 {
    (x & !y).count_ones() as i64 - (y & !x).count_ones() as i64
}

/// `P_{T,k}(T′)`, or the modified `P̃` which keeps only the `T⁺` term.
pub fn potential_value(reference: &Tiling, other: &Tiling, k: usize, threshold: Threshold, modified: bool) -> i64 {
    let (rp, rm) = plus_minus(reference, k, threshold);
    let (op, om) = plus_minus(other, k, threshold);
    let p = signed_difference(rp, op);
    if modified {
        p
    } else {
        p - signed_difference(rm, om)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialReport {
    pub reference: u32,
    pub k: usize,
    pub threshold: Threshold,
    pub modified: bool,
    pub values: Vec<i64>,
    pub max_edge_delta: i64,
    /// Largest |Δ| over edges whose level is not `k` (relevant for `P̃`).
    pub max_off_level_delta: i64,
}

impl PotentialReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "reference": self.reference,
            "k": self.k,
            "threshold": self.threshold.name(),
            "modified": self.modified,
            "max_edge_delta": self.max_edge_delta,
            "max_off_level_delta": self.max_off_level_delta,
            "values": self.values,
        })
    }
}

fn potential_report(graph: &FlipGraph, reference: u32, k: usize, threshold: Threshold, modified: bool) -> PotentialReport {
    let r = graph.tiling(reference);
    let values: Vec<i64> = graph
        .tilings()
        .par_iter()
        .map(|t| potential_value(r, t, k, threshold, modified))
        .collect();
    let mut max_edge_delta = 0;
    let mut max_off_level_delta = 0;
    for (u, u_val) in values.iter().enumerate() {
        for e in graph.edges(u as u32) {
            let d = (values[e.to as usize] - u_val).abs();
            max_edge_delta = max_edge_delta.max(d);
            if e.level as usize != k {
                max_off_level_delta = max_off_level_delta.max(d);
            }
        }
    }
    PotentialReport {
        reference,
        k,
        threshold,
        modified,
        values,
        max_edge_delta,
        max_off_level_delta,
    }
}

pub fn potential(graph: &FlipGraph, reference: u32, k: usize, threshold: Threshold) -> PotentialReport {
    potential_report(graph, reference, k, threshold, false)
}

pub fn modified_potential(graph: &FlipGraph, reference: u32, k: usize, threshold: Threshold) -> PotentialReport {
    potential_report(graph, reference, k, threshold, true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonStats {
    pub classes: usize,
    pub edges: usize,
    pub diameter: u32,
    pub formula: i64,
    pub intra_class_edges: usize,
}

impl SkeletonStats {
    pub fn matches(&self) -> bool {
        self.diameter as i64 == self.formula
    }

    pub(crate) fn of(s: &QuotientSkeleton, n: usize) -> Result<Self> {
        Ok(SkeletonStats {
            classes: s.class_count(),
            edges: s.edge_count(),
            diameter: s.diameter()?.value,
            formula: s.mode.formula(n, s.k),
            intra_class_edges: s.intra_class_edges,
        })
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "classes": self.classes,
            "edges": self.edges,
            "diameter": self.diameter,
            "formula": self.formula,
            "match": self.matches(),
            "intra_class_edges": self.intra_class_edges,
        })
    }
}

/// Both diameter checks for one `(n, k)` plus the cross-checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiameterReport {
    pub n: usize,
    pub k: usize,
    pub sigma_k: SkeletonStats,
    pub sigma_k_plus_prev: SkeletonStats,
    /// `Σ_k` skeleton ≅ `Σ_{n−1−k}` skeleton through `opposite`.
    pub duality_ok: bool,
    /// vert_k is constant on each `Σ_k` class and separates classes.
    pub vertk_distinct_ok: bool,
    pub distinct_vertk: usize,
    /// Classes built from regular-only paths coincide with the default ones.
    pub regular_paths_agree: bool,
}

impl DiameterReport {
    pub fn all_ok(&self) -> bool {
        self.sigma_k.matches()
            && self.sigma_k_plus_prev.matches()
            && self.duality_ok
            && self.vertk_distinct_ok
            && self.sigma_k.intra_class_edges == 0
            && self.sigma_k_plus_prev.intra_class_edges == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "k": self.k,
            "classes": self.sigma_k.classes,
            "diameter": self.sigma_k.diameter,
            "formula": self.sigma_k.formula,
            "match": self.sigma_k.matches(),
            "sigma_k": self.sigma_k.to_json(),
            "sigma_k_plus_prev": self.sigma_k_plus_prev.to_json(),
            "duality_ok": self.duality_ok,
            "vertk_distinct_ok": self.vertk_distinct_ok,
            "distinct_vertk": self.distinct_vertk,
            "regular_paths_agree": self.regular_paths_agree,
        })
    }
}

pub fn diameter_report(graph: &FlipGraph, config: &PointConfig, regular: &[bool], k: usize) -> Result<DiameterReport> {
    let n = graph.n();
    let sk = skeleton(graph, k, SkeletonMode::SigmaK, Some(regular))?;
    let skp = skeleton(graph, k, SkeletonMode::SigmaKPlusPrev, Some(regular))?;
    let dual = skeleton(graph, n - 1 - k, SkeletonMode::SigmaK, Some(regular))?;
    let duality_ok = opposite_isomorphism(graph, &sk, &dual);

    let per_class: Vec<HashSet<Vec<Rational>>> = sk
        .partition
        .classes()
        .par_iter()
        .map(|members| members.iter().map(|&v| vert_k(config, graph.tiling(v), k)).collect())
        .collect();
    let constant = per_class.iter().all(|s| s.len() == 1);
    let distinct: HashSet<&Vec<Rational>> = per_class.iter().flatten().collect();
    let vertk_distinct_ok = constant && distinct.len() == sk.class_count();

    let alt = regular_path_classes(graph, &[k as u8], regular);
    Ok(DiameterReport {
        n,
        k,
        sigma_k: SkeletonStats::of(&sk, n)?,
        sigma_k_plus_prev: SkeletonStats::of(&skp, n)?,
        duality_ok,
        vertk_distinct_ok,
        distinct_vertk: distinct.len(),
        regular_paths_agree: alt == sk.partition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::rational_from_int;
    use crate::regularity::classify_all;
    use crate::subset::Subset;
    use crate::tiling::{Extreme, Tile};

    fn setup(n: usize) -> (PointConfig, FlipGraph, Vec<bool>) {
        let c = PointConfig::standard(n).unwrap();
        let g = FlipGraph::enumerate(&c, 8).unwrap();
        let r = classify_all(&g, &c);
        (c, g, r)
    }

    #[test]
    fn vert_k_hand_example() {
        let c = PointConfig::new((0..3).map(rational_from_int).collect()).unwrap();
        let t = Tiling::from_tiles(
            3,
            &[
                Tile::new(Subset::EMPTY, 0, 1),
                Tile::new(Subset::from_labels([2]), 0, 2),
                Tile::new(Subset::EMPTY, 1, 2),
            ],
        )
        .unwrap();
        let ints = |v: &[i64]| v.iter().copied().map(rational_from_int).collect::<Vec<_>>();
        assert_eq!(vert_k(&c, &t, 1), ints(&[0, 2, 0]));
        assert_eq!(vert_k(&c, &t, 2), ints(&[0, 0, 0]));
    }

    #[test]
    fn vert_k_entry_sum() {
        let (c, g, _) = setup(5);
        for t in g.tilings() {
            for k in 0..4 {
                let total: Rational = vert_k(&c, t, k).into_iter().sum();
                let expected: Rational = t
                    .tiles()
                    .filter(|x| x.offset.len() == k)
                    .map(|x| c.pair_area(x.i, x.j) * rational_from_int(k as i64))
                    .sum();
                assert_eq!(total, expected);
            }
        }
    }

    #[test]
    fn trivial_partitions() {
        let (_, g, _) = setup(5);
        assert_eq!(equivalence_classes(&g, &[], Restrict::All).len(), 1);
        assert_eq!(equivalence_classes(&g, &[1, 2, 3], Restrict::All).len(), g.len());
    }

    #[test]
    fn sigma_1_is_a_cube() {
        let (_, g, r) = setup(5);
        let p = equivalence_classes(&g, &[1], Restrict::Regular(&r));
        assert_eq!(p.len(), 8);
        let s = skeleton(&g, 1, SkeletonMode::SigmaK, Some(&r)).unwrap();
        assert_eq!(s.class_count(), 8);
        assert_eq!(s.edge_count(), 12);
        assert_eq!(s.degree_multiset(), vec![3; 8]);
        assert_eq!(s.diameter().unwrap().value, 3);
    }

    #[test]
    fn small_diameters() {
        let (_, g, r) = setup(5);
        assert_eq!(skeleton(&g, 2, SkeletonMode::SigmaK, Some(&r)).unwrap().diameter().unwrap().value, 4);
        assert_eq!(
            skeleton(&g, 2, SkeletonMode::SigmaKPlusPrev, Some(&r)).unwrap().diameter().unwrap().value,
            7
        );
        assert!(skeleton(&g, 2, SkeletonMode::SigmaK, None).is_err());
        assert!(skeleton(&g, 4, SkeletonMode::ReducedAll, None).is_err());
    }

    #[test]
    fn potential_basics() {
        let (_, g, _) = setup(5);
        for k in 1..=3 {
            for th in [Threshold::Definition, Threshold::Shifted] {
                let rep = potential(&g, 7, k, th);
                assert_eq!(rep.values[7], 0);
                assert!(rep.max_edge_delta <= 1);
                let m = modified_potential(&g, 7, k, th);
                assert_eq!(m.values[7], 0);
            }
            let m = modified_potential(&g, 0, k, Threshold::Definition);
            assert_eq!(m.max_off_level_delta, 0);
            assert_eq!(m.max_edge_delta, 1);
        }
    }

    #[test]
    fn extreme_potential_definition_thresholds() {
        // chains carry k(n-k-1) level-k and (k-1)(n-k) level-(k-1) flips, and
        // P drops by one at each of them
        for n in 4..=6 {
            let c = PointConfig::standard(n).unwrap();
            let tmin = Tiling::extremal(&c, Extreme::Min);
            let tmax = Tiling::extremal(&c, Extreme::Max);
            for k in 1..=n - 2 {
                let p = potential_value(&tmin, &tmax, k, Threshold::Definition, false);
                assert_eq!(p, formulas::sigma_k_plus_prev_diameter(n, k), "n = {n} k = {k}");
            }
        }
    }

    #[test]
    fn report_n5() {
        let (c, g, r) = setup(5);
        for k in 1..=3 {
            let rep = diameter_report(&g, &c, &r, k).unwrap();
            assert!(rep.all_ok(), "{:?}", rep);
            assert!(rep.regular_paths_agree);
            assert_eq!(rep.to_json()["match"], json!(true));
        }
    }
}
