//! Exact combinatorics of fine zonotopal tilings for points on a line.
//!
//! A configuration of `n` distinct rationals `a_1 < ... < a_n` lifts to the
//! vectors `v_i = (a_i, 1)`, whose Minkowski sum is a centrally symmetric
//! `2n`-gon. A fine zonotopal tiling splits it into `C(n, 2)` parallelograms
//! `Π_{A,B}`, one per pair `B`. This crate builds those tilings, flips them,
//! enumerates the full flip graph, decides regularity exactly, and builds the
//! quotient skeletons of the higher secondary polytopes `Σ_k` and
//! `Σ_k + Σ_{k-1}` together with the lifting hypertriangulation flip graphs.

pub mod audit;
pub mod config;
pub mod error;
pub mod export;
pub mod flipgraph;
pub mod graph;
pub mod hypertri;
pub mod oracle;
pub mod regularity;
pub mod secondary;
pub mod simplex;
pub mod subset;
pub mod tiling;

pub use config::{Circuit, HeightVector, OrientationVector, PointConfig, Rational, Sign};
pub use error::{Error, Result};
pub use flipgraph::{Chain, FlipGraph};
pub use subset::Subset;
pub use tiling::{Direction, Extreme, FlipMove, Tile, Tiling};

/// Binomial coefficient for the small arguments used throughout.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Closed forms the experiments are checked against.
pub mod formulas {
    /// Diameter of the `Σ_k` skeleton and of the reduced hypertriangulation
    /// flip graph at level `k + 1`.
    pub fn sigma_k_diameter(n: usize, k: usize) -> i64 {
        let (n, k) = (n as i64, k as i64);
        k * (n - k - 1)
    }

    /// Diameter of the `Σ_k + Σ_{k-1}` skeleton and of the lifting
    /// hypertriangulation flip graph at level `k`.
    pub fn sigma_k_plus_prev_diameter(n: usize, k: usize) -> i64 {
        let (n, k) = (n as i64, k as i64);
        2 * k * (n - k) - n
    }

    /// Number of level-`k` flips on every maximal chain.
    pub fn chain_level_count(n: usize, k: usize) -> i64 {
        sigma_k_diameter(n, k)
    }
}
