//! The graph of all fine zonotopal tilings and their flips.
//!
//! Nodes are keyed by the orientation bitvector (bit set = circuit oriented
//! negatively), which fits one `u64` for `n ≤ 8`. `T_min` has key 0 and every
//! raising flip sets exactly one bit, so a node's rank is its popcount.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::PointConfig;
use crate::error::{Error, Result};
use crate::graph;
use crate::tiling::{Direction, Extreme, Tiling};

/// `n = 8` has 1,232,944 tilings; `--cap 8` allows it at the cost of a lot of memory.
pub const DEFAULT_CAP: usize = 7;
/// Largest `n` whose orientation vectors fit a single `u64` key.
pub const MAX_KEYED_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub to: u32,
    pub level: u8,
    pub circuit: u16,
    pub direction: Direction,
}

#[derive(Clone, Debug)]
pub struct FlipGraph {
    n: usize,
    keys: Vec<u64>,
    tilings: Vec<Tiling>,
    edges: Vec<Vec<Edge>>,
    index: HashMap<u64, u32>,
}

impl FlipGraph {
    /// Enumerates every tiling reachable from `T_min` by flips, in BFS order
    /// with each frontier sorted by key, so node ids do not depend on the
    /// thread count.
    pub fn enumerate(config: &PointConfig, cap: usize) -> Result<Self> {
        let n = config.n();
        let cap = cap.min(MAX_KEYED_N);
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let start = Tiling::extremal(config, Extreme::Min);
        let start_key = start.orientation().as_u64().expect("n ≤ 8 fits one word");

        let mut keys = vec![start_key];
        let mut tilings = vec![start];
        let mut index = HashMap::from([(start_key, 0u32)]);
        let mut frontier = 0..1usize;
        while !frontier.is_empty() {
            let mut found: Vec<(u64, Tiling)> = frontier
                .clone()
                .into_par_iter()
                .flat_map_iter(|id| {
                    let (key, t) = (keys[id], &tilings[id]);
                    let index = &index;
                    t.available_flips().into_iter().filter_map(move |m| {
                        let next = key ^ (1u64 << m.circuit_rank());
                        (!index.contains_key(&next)).then(|| (next, t.apply_flip_unchecked(&m)))
                    })
                })
                .collect();
            found.par_sort_unstable_by_key(|(k, _)| *k);
            found.dedup_by_key(|(k, _)| *k);
            let begin = keys.len();
            for (key, t) in found {
                index.insert(key, keys.len() as u32);
                keys.push(key);
                tilings.push(t);
            }
            frontier = begin..keys.len();
        }

        let edges = (0..keys.len())
            .into_par_iter()
            .map(|id| {
                tilings[id]
                    .available_flips()
                    .into_iter()
                    .map(|m| {
                        let rank = m.circuit_rank();
                        Edge {
                            to: index[&(keys[id] ^ (1u64 << rank))],
                            level: m.level() as u8,
                            circuit: rank as u16,
                            direction: m.direction,
                        }
                    })
                    .collect()
            })
            .collect();

        Ok(FlipGraph {
            n,
            keys,
            tilings,
            edges,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn circuit_count(&self) -> usize {
        crate::binomial(self.n, 3)
    }

    pub fn key(&self, id: u32) -> u64 {
        self.keys[id as usize]
    }

    pub fn tiling(&self, id: u32) -> &Tiling {
        &self.tilings[id as usize]
    }

    pub fn tilings(&self) -> &[Tiling] {
        &self.tilings
    }

    pub fn edges(&self, id: u32) -> &[Edge] {
        &self.edges[id as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Every undirected edge once, as `(u, v, level)` with `u < v`.
    pub fn edge_list(&self) -> Vec<(u32, u32, u8)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.edges.iter().enumerate() {
            for e in list {
                if (u as u32) < e.to {
                    out.push((u as u32, e.to, e.level));
                }
            }
        }
        out
    }

    pub fn id_of_key(&self, key: u64) -> Option<u32> {
        self.index.get(&key).copied()
    }

    pub fn id_of(&self, t: &Tiling) -> Option<u32> {
        let id = self.id_of_key(t.orientation().as_u64()?)?;
        (self.tiling(id) == t).then_some(id)
    }

    pub fn min_id(&self) -> u32 {
        0
    }

    pub fn max_id(&self) -> u32 {
        let all = if self.circuit_count() == 64 {
            u64::MAX
        } else {
            (1u64 << self.circuit_count()) - 1
        };
        self.index[&all]
    }

    /// Number of negatively oriented circuits, i.e. the distance from `T_min`.
    pub fn rank(&self, id: u32) -> usize {
        self.key(id).count_ones() as usize
    }

    /// Node id of the opposite tiling (all circuit signs reversed).
    pub fn opposite_id(&self, id: u32) -> u32 {
        let mask = if self.circuit_count() == 64 {
            u64::MAX
        } else {
            (1u64 << self.circuit_count()) - 1
        };
        self.index[&(self.key(id) ^ mask)]
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        self.adjacency_where(|_, _| true)
    }

    /// Adjacency lists keeping only edges accepted by `keep(from, edge)`.
    pub fn adjacency_where(&self, keep: impl Fn(u32, &Edge) -> bool) -> Vec<Vec<u32>> {
        self.edges
            .iter()
            .enumerate()
            .map(|(u, list)| {
                let mut out: Vec<u32> = list.iter().filter(|e| keep(u as u32, e)).map(|e| e.to).collect();
                out.sort_unstable();
                out
            })
            .collect()
    }

    pub fn distance(&self, u: u32, v: u32) -> Result<u32> {
        for id in [u, v] {
            if id as usize >= self.len() {
                return Err(Error::UnknownNode(id as usize));
            }
        }
        graph::distance(&self.adjacency(), u, v).ok_or(Error::Disconnected)
    }

    /// Greedy raising walk from `T_min`, choosing uniformly among the raising
    /// flips at each step. A walk that stops before `T_max` is returned as
    /// [`StuckChain`].
    pub fn sample_chain(&self, seed: u64) -> std::result::Result<Chain, StuckChain> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chain = Chain {
            nodes: vec![self.min_id()],
            levels: Vec::new(),
        };
        let mut current = self.min_id();
        loop {
            let raising: Vec<&Edge> = self
                .edges(current)
                .iter()
                .filter(|e| e.direction == Direction::Raising)
                .collect();
            match raising.choose(&mut rng) {
                Some(e) => {
                    chain.nodes.push(e.to);
                    chain.levels.push(e.level);
                    current = e.to;
                }
                None => break,
            }
        }
        if current == self.max_id() && chain.len() == self.circuit_count() {
            Ok(chain)
        } else {
            Err(StuckChain { partial: chain })
        }
    }

    /// A maximal chain `T_min → T_max` through `node`. With `allowed`, every
    /// node on the chain must be allowed (e.g. regular). `None` if no such
    /// chain exists.
    pub fn max_chain_through(&self, node: u32, allowed: Option<&[bool]>) -> Option<Chain> {
        let ok = |v: u32| allowed.is_none_or(|a| a[v as usize]);
        if !ok(node) {
            return None;
        }
        let down = self.monotone_path(node, self.min_id(), Direction::Lowering, &ok)?;
        let up = self.monotone_path(node, self.max_id(), Direction::Raising, &ok)?;
        let mut nodes: Vec<u32> = down.iter().rev().map(|&(v, _)| v).collect();
        // down[i].1 labels the step between down[i - 1] and down[i]
        let mut levels: Vec<u8> = down[1..].iter().rev().map(|&(_, l)| l).collect();
        for &(v, l) in up.iter().skip(1) {
            nodes.push(v);
            levels.push(l);
        }
        Some(Chain { nodes, levels })
    }

    // BFS from `from` to `to` along edges of one direction. Returns the path
    // as (node, level of the edge used to reach it).
    fn monotone_path(&self, from: u32, to: u32, dir: Direction, ok: &impl Fn(u32) -> bool) -> Option<Vec<(u32, u8)>> {
        let mut parent: HashMap<u32, (u32, u8)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut reached = from == to;
        while let Some(u) = queue.pop_front() {
            if reached {
                break;
            }
            for e in self.edges(u).iter().filter(|e| e.direction == dir) {
                if e.to != from && ok(e.to) && !parent.contains_key(&e.to) {
                    parent.insert(e.to, (u, e.level));
                    if e.to == to {
                        reached = true;
                        break;
                    }
                    queue.push_back(e.to);
                }
            }
        }
        if !reached {
            return None;
        }
        let mut path = vec![];
        let mut v = to;
        while v != from {
            let (u, l) = parent[&v];
            path.push((v, l));
            v = u;
        }
        path.push((from, 0));
        path.reverse();
        Some(path)
    }
}

/// A saturated chain of raising flips, `nodes.len() == levels.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub nodes: Vec<u32>,
    pub levels: Vec<u8>,
}

impl Chain {
    /// Number of flips.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Flip counts per level `1..=n-2` (index 0 is level 1).
    pub fn level_census(&self, n: usize) -> Vec<usize> {
        let mut census = vec![0; n.saturating_sub(2)];
        for &l in &self.levels {
            census[l as usize - 1] += 1;
        }
        census
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StuckChain {
    pub partial: Chain,
}
