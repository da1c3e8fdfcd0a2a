//! JSON, DOT and SVG output.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::json;

use crate::config::{PointConfig, Rational};
use crate::flipgraph::FlipGraph;
use crate::secondary::QuotientSkeleton;
use crate::tiling::Tiling;

/// `{"points": [...], "nodes": [hex keys], "edges": [[u, v, level], ...]}`.
pub fn graph_json(graph: &FlipGraph, config: &PointConfig) -> serde_json::Value {
    let width = graph.circuit_count().div_ceil(4).max(1);
    let nodes: Vec<String> = (0..graph.len() as u32)
        .map(|v| format!("{:0width$x}", graph.key(v)))
        .collect();
    let edges: Vec<[u32; 3]> = graph
        .edge_list()
        .into_iter()
        .map(|(u, v, l)| [u, v, l as u32])
        .collect();
    json!({
        "points": config.to_json()["points"],
        "nodes": nodes,
        "edges": edges,
    })
}

pub fn graph_dot(graph: &FlipGraph, config: &PointConfig) -> String {
    let width = graph.circuit_count().div_ceil(4).max(1);
    let points: Vec<String> = config.coords().iter().map(|c| c.to_string()).collect();
    let mut out = String::new();
    writeln!(out, "// points: {}", points.join(" ")).unwrap();
    writeln!(out, "graph flips {{").unwrap();
    for v in 0..graph.len() as u32 {
        writeln!(out, "  {v} [label=\"{:0width$x}\"];", graph.key(v)).unwrap();
    }
    for (u, v, l) in graph.edge_list() {
        writeln!(out, "  {u} -- {v} [label=\"level={l}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn skeleton_dot(s: &QuotientSkeleton) -> String {
    let mut out = String::new();
    writeln!(out, "graph {} {{", s.mode.name()).unwrap();
    writeln!(out, "  // k = {}", s.k).unwrap();
    for (c, members) in s.partition.classes().iter().enumerate() {
        writeln!(out, "  {c} [label=\"{c} ({} tilings)\"];", members.len()).unwrap();
    }
    for (u, v) in s.edge_set() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// The tiling drawn with exact integer coordinates: x is scaled by the
/// common denominator of the points, each level is one unit of that
/// denominator high, and the picture is flipped so `∅` sits at the bottom.
pub fn tiling_svg(config: &PointConfig, tiling: &Tiling) -> String {
    let n = config.n();
    let den = config.common_denominator();
    let x: Vec<BigInt> = config
        .coords()
        .iter()
        .map(|c| (c * Rational::from(den.clone())).to_integer())
        .collect();
    let unit = den.clone() * BigInt::from(2);
    let low: BigInt = x.iter().filter(|v| v.sign() == num_bigint::Sign::Minus).sum();
    let high: BigInt = x.iter().filter(|v| v.sign() == num_bigint::Sign::Plus).sum();
    let margin = unit.clone() / BigInt::from(4) + BigInt::from(1);
    let height = &unit * BigInt::from(n as i64);
    let point = |sx: &BigInt, level: usize| -> String {
        let px = sx - &low + &margin;
        let py = &height - &unit * BigInt::from(level as i64) + &margin;
        format!("{px},{py}")
    };
    let mut out = String::new();
    let points: Vec<String> = config.coords().iter().map(|c| c.to_string()).collect();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">",
        &high - &low + &margin * BigInt::from(2),
        &height + &margin * BigInt::from(2)
    )
    .unwrap();
    writeln!(out, "  <!-- points: {} -->", points.join(" ")).unwrap();
    for t in tiling.sorted_tiles() {
        let base: BigInt = t.offset.iter().map(|m| x[m].clone()).sum();
        let lvl = t.offset.len();
        let corners = [
            point(&base, lvl),
            point(&(&base + &x[t.i]), lvl + 1),
            point(&(&base + &x[t.i] + &x[t.j]), lvl + 2),
            point(&(&base + &x[t.j]), lvl + 1),
        ];
        writeln!(
            out,
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" vector-effect=\"non-scaling-stroke\"><title>{t}</title></polygon>",
            corners.join(" ")
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    debug_assert!(!den.is_zero());
    out
}
