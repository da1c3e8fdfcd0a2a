//! Level cross-sections of tilings as monotone paths of k-subsets, and the
//! (reduced) lifting hypertriangulation flip graphs built from them.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::flipgraph::{Edge, FlipGraph};
use crate::graph::UNREACHED;
use crate::secondary::{equivalence_classes, skeleton, Partition, Restrict, SkeletonMode, SkeletonStats};
use crate::subset::Subset;
use crate::tiling::{separation_sorted, Tiling};

/// A chain of `k`-subsets ordered by strong separation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotonePath {
    pub k: usize,
    pub vertices: Vec<Subset>,
    pub reduced: bool,
}

impl MonotonePath {
    /// Starts at `[k]`, ends at the top `k`-set, and each step swaps one
    /// element for a larger one.
    pub fn is_monotone(&self, n: usize) -> bool {
        let k = self.k;
        if self.vertices.first() != Some(&Subset::prefix(k)) || self.vertices.last() != Some(&Subset::suffix(n, k)) {
            return false;
        }
        self.vertices.windows(2).all(|w| {
            let out = w[0].difference(w[1]);
            let inn = w[1].difference(w[0]);
            out.len() == 1 && inn.len() == 1 && out.min() < inn.min()
        })
    }

    /// Every consecutive triple meets in exactly `k − 2` elements.
    pub fn triple_condition(&self) -> bool {
        let want = self.k as isize - 2;
        self.vertices
            .windows(3)
            .all(|w| w[0].intersection(w[1]).intersection(w[2]).len() as isize == want)
    }

    pub fn pairwise_separated(&self) -> bool {
        self.vertices
            .iter()
            .enumerate()
            .all(|(i, a)| self.vertices[i + 1..].iter().all(|b| a.strongly_separated(*b)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<Vec<usize>> = self.vertices.iter().map(|s| s.labels()).collect();
        if self.reduced {
            json!({ "k": self.k, "vertices": vertices, "reduced": true })
        } else {
            json!({ "k": self.k, "vertices": vertices })
        }
    }

    /// Compact form such as `12 → 13 → 34` (single-digit labels only).
    pub fn compact(&self) -> String {
        self.vertices
            .iter()
            .map(|s| s.labels().iter().map(|l| l.to_string()).collect::<String>())
            .collect::<Vec<_>>()
            .join(" → ")
    }
}

pub fn strongly_separated(a: Subset, b: Subset) -> bool {
    a.strongly_separated(b)
}

/// Vertices of `T` with `k` elements, ordered by strong separation.
pub fn cross_section(tiling: &Tiling, k: usize) -> Result<MonotonePath> {
    let n = tiling.n();
    if k > n {
        return Err(Error::LevelOutOfRange { level: k, n });
    }
    let level: Vec<Subset> = tiling.vertices().into_iter().filter(|s| s.len() == k).collect();
    let vertices = separation_sorted(level).map_err(|(a, b)| Error::NotSeparated(a.to_string(), b.to_string()))?;
    Ok(MonotonePath {
        k,
        vertices,
        reduced: false,
    })
}

fn intersect_sorted(a: &[Subset], b: &[Subset]) -> Vec<Subset> {
    let keep: HashSet<&Subset> = b.iter().collect();
    a.iter().filter(|s| keep.contains(s)).copied().collect()
}

fn common_vertices(graph: &FlipGraph, members: &[u32], level: usize) -> Result<Vec<Subset>> {
    let mut common = cross_section(graph.tiling(members[0]), level)?.vertices;
    for &v in &members[1..] {
        let here: Vec<Subset> = graph.tiling(v).vertices().into_iter().filter(|s| s.len() == level).collect();
        common = intersect_sorted(&common, &here);
    }
    Ok(common)
}

fn reduce_members(graph: &FlipGraph, members: &[u32], k: usize) -> Result<MonotonePath> {
    Ok(MonotonePath {
        k: k + 1,
        vertices: common_vertices(graph, members, k + 1)?,
        reduced: true,
    })
}

/// Level-`level` vertices shared by every tiling reachable from `node`
/// without flips at level `deleted`. With `deleted = k, level = k + 1` this
/// is [`reduced_cross_section`]; other combinations are for comparison.
pub fn stable_vertices(graph: &FlipGraph, node: u32, deleted: usize, level: usize) -> Result<Vec<Subset>> {
    let n = graph.n();
    if level > n {
        return Err(Error::LevelOutOfRange { level, n });
    }
    let classes = equivalence_classes(graph, &[deleted as u8], Restrict::All);
    let class = classes.class_of(node).ok_or(Error::UnknownNode(node as usize))?;
    common_vertices(graph, classes.members(class), level)
}

/// The reduced path at level `k + 1` of the k-equivalence class of `node`:
/// the level-`(k+1)` vertices shared by every tiling in the class.
pub fn reduced_cross_section(graph: &FlipGraph, node: u32, k: usize) -> Result<MonotonePath> {
    let n = graph.n();
    if k == 0 || k + 2 > n {
        return Err(Error::LevelOutOfRange { level: k, n });
    }
    Ok(MonotonePath {
        k: k + 1,
        vertices: stable_vertices(graph, node, k, k + 1)?,
        reduced: true,
    })
}

/// Reduced paths for every k-class, indexed like the partition.
pub fn reduced_paths(graph: &FlipGraph, k: usize) -> Result<(Partition, Vec<MonotonePath>)> {
    let n = graph.n();
    if k == 0 || k + 2 > n {
        return Err(Error::LevelOutOfRange { level: k, n });
    }
    let classes = equivalence_classes(graph, &[k as u8], Restrict::All);
    let paths = classes
        .classes()
        .par_iter()
        .map(|members| reduce_members(graph, members, k))
        .collect::<Result<Vec<_>>>()?;
    Ok((classes, paths))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperFlipKind {
    /// Induced by a tiling flip at level `k`.
    Upper,
    /// Induced by a tiling flip at level `k − 1`.
    Lower,
}

/// Effect of one tiling flip on the level-`k` path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HyperFlip {
    pub kind: HyperFlipKind,
    pub inserted: Option<Subset>,
    pub removed: Option<Subset>,
}

/// The hypertriangulation flip a tiling edge induces at level `k`, or `None`
/// when the path is unchanged.
pub fn hyper_flip(graph: &FlipGraph, from: u32, edge: &Edge, k: usize) -> Option<HyperFlip> {
    let kind = if edge.level as usize == k {
        HyperFlipKind::Upper
    } else if edge.level as usize + 1 == k {
        HyperFlipKind::Lower
    } else {
        return None;
    };
    let level = |v: u32| -> HashSet<Subset> {
        graph.tiling(v).vertices().into_iter().filter(|s| s.len() == k).collect()
    };
    let (a, b) = (level(from), level(edge.to));
    let inserted: Vec<Subset> = b.difference(&a).copied().collect();
    let removed: Vec<Subset> = a.difference(&b).copied().collect();
    Some(HyperFlip {
        kind,
        inserted: inserted.first().copied(),
        removed: removed.first().copied(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypertriReport {
    pub n: usize,
    pub k: usize,
    /// Lifting hypertriangulations at level `k`.
    pub lifting: SkeletonStats,
    /// Reduced lifting hypertriangulations at level `k + 1`.
    pub reduced: SkeletonStats,
    /// Equal-path quotient at level `k` equals the simultaneous
    /// {k, k−1}-equivalence quotient, as partitions and as graphs.
    pub path_quotient_ok: bool,
    /// Every edge changes the level-`k` path by one vertex iff its level is
    /// `k` or `k − 1`, and leaves it alone otherwise.
    pub vertex_change_ok: bool,
    /// Every reduced path is monotone and satisfies the triple condition.
    pub triple_ok: bool,
    /// Distinct k-classes have distinct reduced paths.
    pub reduced_distinct_ok: bool,
}

impl HypertriReport {
    pub fn all_ok(&self) -> bool {
        self.lifting.matches()
            && self.reduced.matches()
            && self.path_quotient_ok
            && self.vertex_change_ok
            && self.triple_ok
            && self.reduced_distinct_ok
    }

    pub fn to_json(&self) -> serde_json::Value {
        let stats = |s: &SkeletonStats| {
            json!({ "classes": s.classes, "diameter": s.diameter, "formula": s.formula, "match": s.matches() })
        };
        json!({
            "n": self.n,
            "k": self.k,
            "lifting": stats(&self.lifting),
            "reduced": stats(&self.reduced),
            "path_quotient_ok": self.path_quotient_ok,
            "vertex_change_ok": self.vertex_change_ok,
            "triple_ok": self.triple_ok,
            "reduced_distinct_ok": self.reduced_distinct_ok,
        })
    }
}

pub fn hypertri_diameters(graph: &FlipGraph, k: usize) -> Result<HypertriReport> {
    let n = graph.n();
    let lifting = skeleton(graph, k, SkeletonMode::LiftingAll, None)?;
    let reduced = skeleton(graph, k, SkeletonMode::ReducedAll, None)?;

    let paths: Vec<Vec<Subset>> = graph
        .tilings()
        .par_iter()
        .map(|t| cross_section(t, k).map(|p| p.vertices))
        .collect::<Result<_>>()?;
    let mut first: HashMap<&Vec<Subset>, u32> = HashMap::new();
    let mut labels = vec![UNREACHED; graph.len()];
    for (v, p) in paths.iter().enumerate() {
        labels[v] = *first.entry(p).or_insert(v as u32);
    }
    let by_path = Partition::from_labels(&labels, |_| true);
    let mut path_edges = Vec::new();
    let mut vertex_change_ok = true;
    for u in 0..graph.len() as u32 {
        for e in graph.edges(u).iter().filter(|e| e.to > u) {
            let (a, b) = (&paths[u as usize], &paths[e.to as usize]);
            let moves = e.level as usize == k || e.level as usize + 1 == k;
            let delta = a.len().abs_diff(b.len());
            let a_set: HashSet<&Subset> = a.iter().collect();
            let shared = b.iter().filter(|s| a_set.contains(s)).count();
            if moves {
                vertex_change_ok &= delta == 1 && shared == a.len().min(b.len());
            } else {
                vertex_change_ok &= a == b;
            }
            if a != b {
                let (x, y) = (by_path.class_of(u).unwrap(), by_path.class_of(e.to).unwrap());
                path_edges.push((x, y));
            }
        }
    }
    let path_adjacency = crate::graph::adjacency_from_edges(by_path.len(), path_edges);
    let path_quotient_ok = by_path == lifting.partition && path_adjacency == lifting.adjacency;

    let (classes, reduced_list) = reduced_paths(graph, k)?;
    debug_assert_eq!(classes, reduced.partition);
    let triple_ok = reduced_list.iter().all(|p| p.triple_condition() && p.is_monotone(n));
    let distinct: HashSet<&Vec<Subset>> = reduced_list.iter().map(|p| &p.vertices).collect();

    Ok(HypertriReport {
        n,
        k,
        lifting: SkeletonStats::of(&lifting, n)?,
        reduced: SkeletonStats::of(&reduced, n)?,
        path_quotient_ok,
        vertex_change_ok,
        triple_ok,
        reduced_distinct_ok: distinct.len() == reduced_list.len(),
    })
}
