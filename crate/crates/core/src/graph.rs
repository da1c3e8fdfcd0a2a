//! Breadth-first search and diameters over plain adjacency lists.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const UNREACHED: u32 = u32::MAX;

/// BFS distances from `source`; unreachable nodes get [`UNREACHED`].
pub fn bfs_distances(adj: &[Vec<u32>], source: u32) -> Vec<u32> {
    let mut dist = vec![UNREACHED; adj.len()];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize] + 1;
        for &v in &adj[u as usize] {
            if dist[v as usize] == UNREACHED {
                dist[v as usize] = d;
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn distance(adj: &[Vec<u32>], u: u32, v: u32) -> Option<u32> {
    let d = bfs_distances(adj, u)[v as usize];
    (d != UNREACHED).then_some(d)
}

pub fn is_connected(adj: &[Vec<u32>]) -> bool {
    adj.is_empty() || bfs_distances(adj, 0).iter().all(|&d| d != UNREACHED)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Diameter {
    pub value: u32,
    /// A pair of nodes realizing the diameter (smallest source, then smallest target).
    pub witness: (u32, u32),
}

/// Exact diameter by BFS from every node, parallel over sources.
pub fn diameter(adj: &[Vec<u32>]) -> Result<Diameter> {
    if adj.is_empty() {
        return Err(Error::Invalid("empty graph has no diameter".into()));
    }
    let per_source: Vec<Option<(u32, u32)>> = (0..adj.len() as u32)
        .into_par_iter()
        .map(|s| {
            let dist = bfs_distances(adj, s);
            let mut best = (0u32, s);
            for (v, &d) in dist.iter().enumerate() {
                if d == UNREACHED {
                    return None;
                }
                if d > best.0 {
                    best = (d, v as u32);
                }
            }
            Some(best)
        })
        .collect();
    let mut out = Diameter {
        value: 0,
        witness: (0, 0),
    };
    for (s, r) in per_source.into_iter().enumerate() {
        let (d, t) = r.ok_or(Error::Disconnected)?;
        if d > out.value {
            out = Diameter {
                value: d,
                witness: (s as u32, t),
            };
        }
    }
    Ok(out)
}

/// Sorted, deduplicated adjacency lists from an undirected edge list.
pub fn adjacency_from_edges(nodes: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); nodes];
    for (u, v) in edges {
        if u != v {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Sorted degree sequence.
pub fn degree_multiset(adj: &[Vec<u32>]) -> Vec<usize> {
    let mut d: Vec<usize> = adj.iter().map(Vec::len).collect();
    d.sort_unstable();
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(m: u32) -> Vec<Vec<u32>> {
        adjacency_from_edges(m as usize + 1, (0..m).map(|i| (i, i + 1)))
    }

    #[test]
    fn single_node() {
        let d = diameter(&[vec![]]).unwrap();
        assert_eq!(d.value, 0);
        assert_eq!(d.witness, (0, 0));
    }

    #[test]
    fn path_graph() {
        for m in 1..12 {
            let d = diameter(&path(m)).unwrap();
            assert_eq!(d.value, m);
            assert_eq!(d.witness, (0, m));
        }
    }

    #[test]
    fn cycle_and_disconnected() {
        let cycle = adjacency_from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)));
        assert_eq!(diameter(&cycle).unwrap().value, 3);
        assert_eq!(distance(&cycle, 1, 5), Some(2));
        let two = adjacency_from_edges(4, [(0, 1), (2, 3)]);
        assert_eq!(diameter(&two), Err(Error::Disconnected));
        assert!(!is_connected(&two));
        assert_eq!(distance(&two, 0, 3), None);
    }

    #[test]
    fn multi_edges_collapse() {
        let adj = adjacency_from_edges(3, [(0, 1), (1, 0), (0, 1), (2, 2), (1, 2)]);
        assert_eq!(adj, vec![vec![1], vec![0, 2], vec![1]]);
        assert_eq!(degree_multiset(&adj), vec![1, 1, 2]);
    }
}
