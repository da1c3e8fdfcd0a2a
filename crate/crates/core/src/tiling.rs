//! Fine zonotopal tilings, stored as one offset set per pair `B = {i, j}`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{pair_rank, pairs, triple_rank, triples, HeightVector, OrientationVector, PointConfig, Rational, Sign};
use crate::error::{Error, Result};
use crate::subset::Subset;

/// The parallelogram `Π_{A,B}` with `B = {i, j}`, `i < j` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub i: usize,
    pub j: usize,
    pub offset: Subset,
}

impl Tile {
    pub fn new(offset: Subset, i: usize, j: usize) -> Self {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Tile { i, j, offset }
    }

    pub fn pair(&self) -> Subset {
        Subset::from_indices([self.i, self.j])
    }

    /// `A`, `A ∪ {i}`, `A ∪ {j}`, `A ∪ {i, j}`.
    pub fn vertices(&self) -> [Subset; 4] {
        let a = self.offset;
        [a, a.with(self.i), a.with(self.j), a.with(self.i).with(self.j)]
    }

    pub fn area(&self, config: &PointConfig) -> Rational {
        config.pair_area(self.i, self.j)
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Π_{{{},{{{},{}}}}}", self.offset, self.i + 1, self.j + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    Min,
    Max,
}

/// Raising moves point from `T_min` towards `T_max`: the flipped circuit goes
/// from `+1` to `-1`. Lowering moves are their inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Raising,
    Lowering,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::Raising => Direction::Lowering,
            Direction::Lowering => Direction::Raising,
        }
    }
}

/// A flip along the circuit `({p, r}, {q})` with offset `A(F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FlipMove {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub offset: Subset,
    pub direction: Direction,
}

impl FlipMove {
    /// `|A(F)| + 1`.
    pub fn level(&self) -> usize {
        self.offset.len() + 1
    }

    pub fn circuit_rank(&self) -> usize {
        triple_rank(self.p, self.q, self.r)
    }

    /// The three tiles present before the move.
    pub fn removed_tiles(&self) -> [Tile; 3] {
        match self.direction {
            Direction::Raising => positive_triple(self.p, self.q, self.r, self.offset),
            Direction::Lowering => negative_triple(self.p, self.q, self.r, self.offset),
        }
    }

    /// The three tiles present after the move.
    pub fn inserted_tiles(&self) -> [Tile; 3] {
        match self.direction {
            Direction::Raising => negative_triple(self.p, self.q, self.r, self.offset),
            Direction::Lowering => positive_triple(self.p, self.q, self.r, self.offset),
        }
    }
}

impl fmt::Display for FlipMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} flip along ({{{},{}}},{{{}}}) with offset {} at level {}",
            self.direction,
            self.p + 1,
            self.r + 1,
            self.q + 1,
            self.offset,
            self.level()
        )
    }
}

// Hexagon tiled so that the circuit is oriented positively.
fn positive_triple(p: usize, q: usize, r: usize, a: Subset) -> [Tile; 3] {
    [Tile::new(a.with(p), q, r), Tile::new(a.with(r), p, q), Tile::new(a, p, r)]
}

fn negative_triple(p: usize, q: usize, r: usize, a: Subset) -> [Tile; 3] {
    [Tile::new(a, q, r), Tile::new(a, p, q), Tile::new(a.with(q), p, r)]
}

/// A fine zonotopal tiling of the zonotope of `n` points on a line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tiling {
    n: usize,
    offsets: Vec<Subset>,
}

impl Tiling {
    /// Builds from a tile list, rejecting anything that fails the
    /// combinatorial checks of [`validate_tiles`].
    pub fn from_tiles(n: usize, tiles: &[Tile]) -> Result<Self> {
        let report = structural_report(n, tiles);
        if !report.is_ok() {
            return Err(Error::CorruptTiling(report.to_string()));
        }
        Ok(Self::from_tiles_unchecked(n, tiles))
    }

    fn from_tiles_unchecked(n: usize, tiles: &[Tile]) -> Self {
        let mut offsets = vec![Subset::EMPTY; crate::binomial(n, 2)];
        for t in tiles {
            offsets[pair_rank(t.i, t.j)] = t.offset;
        }
        Tiling { n, offsets }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Offset of the tile with pair `{i, j}` (0-based, any order).
    #[inline]
    pub fn offset(&self, i: usize, j: usize) -> Subset {
        if i < j {
            self.offsets[pair_rank(i, j)]
        } else {
            self.offsets[pair_rank(j, i)]
        }
    }

    pub fn tiles(&self) -> impl Iterator<Item = Tile> + '_ {
        pairs(self.n).map(move |(i, j)| Tile::new(self.offset(i, j), i, j))
    }

    /// Tiles sorted lexicographically by `B`.
    pub fn sorted_tiles(&self) -> Vec<Tile> {
        let mut tiles: Vec<Tile> = self.tiles().collect();
        tiles.sort_by_key(|t| (t.i, t.j));
        tiles
    }

    /// Number of tiles with `|A| = ℓ` for `ℓ = 0..=n-2`.
    pub fn level_census(&self) -> Vec<usize> {
        let mut census = vec![0; self.n.saturating_sub(1)];
        for a in &self.offsets {
            census[a.len()] += 1;
        }
        census
    }

    /// Tiling `T_h` of a generic height vector: for each pair the offset is
    /// the set of points lying strictly above the line through the two
    /// lifted points `(a_i, h_i)` and `(a_j, h_j)`.
    pub fn from_heights(config: &PointConfig, h: &HeightVector) -> Result<Self> {
        config.check_height(h)?;
        let n = config.n();
        let a = config.coords();
        let h = &h.0;
        let mut offsets = Vec::with_capacity(crate::binomial(n, 2));
        for (i, j) in pairs(n) {
            let da = &a[j] - &a[i];
            let dh = &h[j] - &h[i];
            let mut offset = Subset::EMPTY;
            for m in (0..n).filter(|&m| m != i && m != j) {
                // sign of h_m - line(a_m), scaled by a_j - a_i > 0
                let side: Rational = (&h[m] - &h[i]) * &da - &dh * (&a[m] - &a[i]);
                if side.is_zero() {
                    let mut t = [i, j, m];
                    t.sort_unstable();
                    return Err(Error::NonGenericHeight {
                        p: t[0] + 1,
                        q: t[1] + 1,
                        r: t[2] + 1,
                    });
                }
                if side.is_positive() {
                    offset = offset.with(m);
                }
            }
            offsets.push(offset);
        }
        Ok(Tiling { n, offsets })
    }

    /// Height vector whose regular tiling is `T_min` (`Min`) or `T_max`
    /// (`Max`): `h_i = a_i²` or `h_i = -a_i²`.
    pub fn extremal_heights(config: &PointConfig, which: Extreme) -> HeightVector {
        let squares = HeightVector(config.coords().iter().map(|x| x * x).collect());
        match which {
            Extreme::Min => squares,
            Extreme::Max => squares.negated(),
        }
    }

    /// `T_min` has `ℓ + 1` tiles with `|A| = ℓ`; `T_max` has `n - 1 - ℓ`.
    pub fn extremal(config: &PointConfig, which: Extreme) -> Self {
        let n = config.n();
        let heights = Self::extremal_heights(config, which);
        let t = Self::from_heights(config, &heights).expect("squared heights are generic");
        let expected: Vec<usize> = (0..n - 1)
            .map(|l| match which {
                Extreme::Min => l + 1,
                Extreme::Max => n - 1 - l,
            })
            .collect();
        assert_eq!(t.level_census(), expected, "extremal tiling has the wrong count signature");
        t
    }

    /// The extremal tiling built purely combinatorially, without a
    /// configuration: `T_min` puts every point outside `[i, j]` above the
    /// chord of `{i, j}`, `T_max` every point strictly between them.
    pub fn extremal_combinatorial(n: usize, which: Extreme) -> Self {
        let offsets = pairs(n)
            .map(|(i, j)| match which {
                Extreme::Min => Subset::from_indices((0..i).chain(j + 1..n)),
                Extreme::Max => Subset::from_indices(i + 1..j),
            })
            .collect();
        Tiling { n, offsets }
    }

    /// `σ_T`: `+1` on `(p, q, r)` iff `q` is not in the offset of the `{p, r}` tile.
    pub fn orientation(&self) -> OrientationVector {
        let mut v = OrientationVector::all_positive(crate::binomial(self.n, 3));
        for (rank, (p, q, r)) in triples(self.n).enumerate() {
            if self.offset(p, r).contains(q) {
                v.set(rank, Sign::Neg);
            }
        }
        v
    }

    /// Orientation computed from the vertex set `V(T)`, checking that every
    /// circuit is witnessed in exactly one direction and that the result
    /// agrees with [`Tiling::orientation`].
    pub fn orientation_of(&self) -> Result<OrientationVector> {
        let from_vertices = orientation_from_vertices(self.n, &self.vertices())?;
        if from_vertices != self.orientation() {
            return Err(Error::CorruptTiling(
                "vertex-set orientation disagrees with the tile rule".into(),
            ));
        }
        Ok(from_vertices)
    }

    /// `V(T)`, sorted and deduplicated.
    pub fn vertices(&self) -> Vec<Subset> {
        vertex_set(self.tiles())
    }

    pub fn available_flips(&self) -> Vec<FlipMove> {
        let mut moves = Vec::new();
        for (p, q, r) in triples(self.n) {
            if let Some(m) = self.flip_at(p, q, r) {
                moves.push(m);
            }
        }
        moves
    }

    /// The flip along circuit `(p, q, r)` if the hexagon is present.
    #[inline]
    pub fn flip_at(&self, p: usize, q: usize, r: usize) -> Option<FlipMove> {
        let apr = self.offset(p, r);
        if !apr.contains(q) {
            let a = apr;
            (self.offset(q, r) == a.with(p) && self.offset(p, q) == a.with(r)).then_some(FlipMove {
                p,
                q,
                r,
                offset: a,
                direction: Direction::Raising,
            })
        } else {
            let a = apr.without(q);
            (self.offset(q, r) == a && self.offset(p, q) == a).then_some(FlipMove {
                p,
                q,
                r,
                offset: a,
                direction: Direction::Lowering,
            })
        }
    }

    pub fn apply_flip(&self, m: &FlipMove) -> Result<Tiling> {
        let present = m
            .removed_tiles()
            .iter()
            .all(|t| t.j < self.n && self.offset(t.i, t.j) == t.offset);
        if !present {
            return Err(Error::FlipUnavailable(m.to_string()));
        }
        Ok(self.apply_flip_unchecked(m))
    }

    pub(crate) fn apply_flip_unchecked(&self, m: &FlipMove) -> Tiling {
        let mut out = self.clone();
        for t in m.inserted_tiles() {
            out.offsets[pair_rank(t.i, t.j)] = t.offset;
        }
        out
    }

    /// `Π_{A,B} ↦ Π_{[n]∖(A∪B), B}`, the tiling rotated by 180 degrees.
    pub fn opposite(&self) -> Tiling {
        let offsets = pairs(self.n)
            .map(|(i, j)| self.offset(i, j).union(Subset::from_indices([i, j])).complement(self.n))
            .collect();
        Tiling { n: self.n, offsets }
    }

    /// `T⁺` style selection: pairs whose tile offset size satisfies `pred`,
    /// as a bitmask over pair ranks.
    pub fn pairs_where(&self, pred: impl Fn(usize) -> bool) -> u128 {
        assert!(self.offsets.len() <= 128);
        self.offsets
            .iter()
            .enumerate()
            .filter(|(_, a)| pred(a.len()))
            .fold(0u128, |acc, (rank, _)| acc | 1 << rank)
    }

    pub fn validate(&self, config: &PointConfig) -> ValidationReport {
        let tiles: Vec<Tile> = self.tiles().collect();
        validate_tiles(self.n, &tiles, config)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let tiles: Vec<TileJson> = self
            .sorted_tiles()
            .into_iter()
            .map(|t| TileJson {
                a: t.offset.labels(),
                b: [t.i + 1, t.j + 1],
            })
            .collect();
        serde_json::to_value(TilingJson { n: self.n, tiles }).expect("tiling serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let parsed: TilingJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        let n = parsed.n;
        let mut tiles = Vec::with_capacity(parsed.tiles.len());
        for t in parsed.tiles {
            let [i, j] = t.b;
            if i == 0 || j == 0 || i > n || j > n || i == j || t.a.iter().any(|&x| x == 0 || x > n) {
                return Err(Error::Invalid(format!("tile labels out of range for n = {n}")));
            }
            tiles.push(Tile::new(Subset::from_labels(t.a), i - 1, j - 1));
        }
        Tiling::from_tiles(n, &tiles)
    }
}

#[derive(Serialize, Deserialize)]
struct TileJson {
    #[serde(rename = "A")]
    a: Vec<usize>,
    #[serde(rename = "B")]
    b: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct TilingJson {
    n: usize,
    tiles: Vec<TileJson>,
}

fn vertex_set(tiles: impl Iterator<Item = Tile>) -> Vec<Subset> {
    let mut v: Vec<Subset> = tiles.flat_map(|t| t.vertices()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn orientation_from_vertices(n: usize, vertices: &[Subset]) -> Result<OrientationVector> {
    let mut out = OrientationVector::all_positive(crate::binomial(n, 3));
    for (rank, (p, q, r)) in triples(n).enumerate() {
        let plus = Subset::from_indices([p, r]);
        let minus = Subset::singleton(q);
        let pos = vertices.iter().any(|s| plus.is_subset_of(*s) && s.is_disjoint(minus));
        let neg = vertices.iter().any(|s| minus.is_subset_of(*s) && s.is_disjoint(plus));
        match (pos, neg) {
            (true, false) => {}
            (false, true) => out.set(rank, Sign::Neg),
            _ => {
                return Err(Error::CorruptTiling(format!(
                    "circuit ({{{},{}}},{{{}}}) is oriented {}",
                    p + 1,
                    r + 1,
                    q + 1,
                    if pos { "both ways" } else { "neither way" }
                )))
            }
        }
    }
    Ok(out)
}

/// Vertices of size `k` sorted by the strong-separation order, or the first
/// non-separated pair.
pub(crate) fn separation_sorted(mut level: Vec<Subset>) -> std::result::Result<Vec<Subset>, (Subset, Subset)> {
    for (x, a) in level.iter().enumerate() {
        for b in &level[x + 1..] {
            if !a.strongly_separated(*b) {
                return Err((*a, *b));
            }
        }
    }
    level.sort_by(|a, b| a.separation_cmp(*b).unwrap_or(Ordering::Equal));
    Ok(level)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    BadTile(String),
    MissingPair(usize, usize),
    DuplicatePair(usize, usize),
    AreaMismatch { tiles: String, zonotope: String },
    VertexCount { expected: usize, got: usize },
    Orientation(String),
    LevelChain { k: usize, detail: String },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFailure::BadTile(s) => write!(f, "bad tile: {s}"),
            ValidationFailure::MissingPair(i, j) => write!(f, "no tile with B = {{{i},{j}}}"),
            ValidationFailure::DuplicatePair(i, j) => write!(f, "several tiles with B = {{{i},{j}}}"),
            ValidationFailure::AreaMismatch { tiles, zonotope } => {
                write!(f, "tile area {tiles} differs from zonotope area {zonotope}")
            }
            ValidationFailure::VertexCount { expected, got } => {
                write!(f, "{got} vertices, expected {expected}")
            }
            ValidationFailure::Orientation(s) => write!(f, "orientation: {s}"),
            ValidationFailure::LevelChain { k, detail } => write!(f, "level {k}: {detail}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.failures.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks a raw tile list: pair uniqueness, area conservation, the vertex
/// count `C(n,2) + n + 1`, well-defined circuit orientations, and that each
/// level of `V(T)` is a monotone chain of strongly separated sets.
pub fn validate_tiles(n: usize, tiles: &[Tile], config: &PointConfig) -> ValidationReport {
    let mut report = structural_report(n, tiles);
    if config.n() != n {
        report
            .failures
            .push(ValidationFailure::BadTile(format!("configuration has {} points, tiling has {n}", config.n())));
        return report;
    }
    if tiles.iter().all(|t| t.j < n) {
        let area: Rational = tiles.iter().map(|t| t.area(config)).sum();
        let total = config.total_area();
        if area != total {
            report.failures.push(ValidationFailure::AreaMismatch {
                tiles: area.to_string(),
                zonotope: total.to_string(),
            });
        }
    }
    report
}

fn structural_report(n: usize, tiles: &[Tile]) -> ValidationReport {
    let mut failures = Vec::new();
    if !(2..=crate::subset::MAX_ELEMENTS).contains(&n) {
        failures.push(ValidationFailure::BadTile(format!("unsupported n = {n}")));
        return ValidationReport { failures };
    }
    let full = Subset::full(n);
    let mut seen = vec![0usize; crate::binomial(n, 2)];
    for t in tiles {
        if t.i >= t.j || t.j >= n || !t.offset.is_subset_of(full) {
            failures.push(ValidationFailure::BadTile(t.to_string()));
            continue;
        }
        if !t.offset.is_disjoint(t.pair()) {
            failures.push(ValidationFailure::BadTile(format!("{t}: A meets B")));
        }
        seen[pair_rank(t.i, t.j)] += 1;
    }
    for (i, j) in pairs(n) {
        match seen[pair_rank(i, j)] {
            0 => failures.push(ValidationFailure::MissingPair(i + 1, j + 1)),
            1 => {}
            _ => failures.push(ValidationFailure::DuplicatePair(i + 1, j + 1)),
        }
    }
    if !failures.is_empty() {
        return ValidationReport { failures };
    }

    let vertices = vertex_set(tiles.iter().copied());
    let expected = crate::binomial(n, 2) + n + 1;
    if vertices.len() != expected {
        failures.push(ValidationFailure::VertexCount {
            expected,
            got: vertices.len(),
        });
    }
    match orientation_from_vertices(n, &vertices) {
        Ok(from_vertices) => {
            let t = Tiling::from_tiles_unchecked(n, tiles);
            if from_vertices != t.orientation() {
                failures.push(ValidationFailure::Orientation(
                    "vertex witnesses disagree with the tile rule".into(),
                ));
            }
        }
        Err(e) => failures.push(ValidationFailure::Orientation(e.to_string())),
    }
    let distinct: HashSet<Subset> = vertices.iter().copied().collect();
    for k in 0..=n {
        let level: Vec<Subset> = distinct.iter().copied().filter(|s| s.len() == k).collect();
        match separation_sorted(level) {
            Err((a, b)) => failures.push(ValidationFailure::LevelChain {
                k,
                detail: format!("{a} and {b} are not strongly separated"),
            }),
            Ok(chain) => {
                if chain.first() != Some(&Subset::prefix(k)) || chain.last() != Some(&Subset::suffix(n, k)) {
                    failures.push(ValidationFailure::LevelChain {
                        k,
                        detail: "chain does not run from the bottom set to the top set".into(),
                    });
                } else if let Some(w) = chain.windows(2).find(|w| w[0].difference(w[1]).len() != 1) {
                    failures.push(ValidationFailure::LevelChain {
                        k,
                        detail: format!("{} -> {} is not a single exchange", w[0], w[1]),
                    });
                }
            }
        }
    }
    ValidationReport { failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_rational;
    use proptest::prelude::*;

    fn tile(a: &[usize], i: usize, j: usize) -> Tile {
        Tile::new(Subset::from_labels(a.iter().copied()), i - 1, j - 1)
    }

    fn cfg(points: &[&str]) -> PointConfig {
        PointConfig::from_strs(points).unwrap()
    }

    // n = 3 has exactly two tilings: the hexagon cut one way or the other.
    fn n3_neg() -> Tiling {
        Tiling::from_tiles(3, &[tile(&[], 1, 2), tile(&[2], 1, 3), tile(&[], 2, 3)]).unwrap()
    }

    fn n3_pos() -> Tiling {
        Tiling::from_tiles(3, &[tile(&[3], 1, 2), tile(&[], 1, 3), tile(&[1], 2, 3)]).unwrap()
    }

    #[test]
    fn two_points_single_tile() {
        let c = cfg(&["0", "1"]);
        for h in [[0, 0], [5, -3]] {
            let t = Tiling::from_heights(&c, &HeightVector::from_ints(&h)).unwrap();
            assert_eq!(t.sorted_tiles(), vec![tile(&[], 1, 2)]);
        }
        assert!(Tiling::extremal(&c, Extreme::Min).available_flips().is_empty());
        assert_eq!(Tiling::extremal(&c, Extreme::Min), Tiling::extremal(&c, Extreme::Max));
    }

    #[test]
    fn from_heights_three_points() {
        let c = cfg(&["0", "1", "2"]);
        // <h, α> = 2 > 0: the chord {1,3} passes above point 2
        let t = Tiling::from_heights(&c, &HeightVector::from_ints(&[0, 1, 4])).unwrap();
        assert_eq!(t, n3_pos());
        assert_eq!(t.orientation(), c.sigma_h(&HeightVector::from_ints(&[0, 1, 4])).unwrap());
        // <h, α> = -2 < 0
        let t = Tiling::from_heights(&c, &HeightVector::from_ints(&[0, 1, 0])).unwrap();
        assert_eq!(t, n3_neg());
        assert_eq!(
            Tiling::from_heights(&c, &HeightVector::from_ints(&[0, 1, 2])),
            Err(Error::NonGenericHeight { p: 1, q: 2, r: 3 })
        );
    }

    #[test]
    fn orientation_of_examples() {
        assert_eq!(n3_neg().orientation_of().unwrap().signs(), vec![Sign::Neg]);
        assert_eq!(n3_pos().orientation_of().unwrap().signs(), vec![Sign::Pos]);
    }

    #[test]
    fn extremal_signatures() {
        let c = PointConfig::standard(3).unwrap();
        let min = Tiling::extremal(&c, Extreme::Min);
        assert_eq!(min.level_census(), vec![1, 2]);
        assert_eq!(min, n3_pos());
        assert_eq!(Tiling::extremal(&c, Extreme::Max), n3_neg());

        for n in 2..=8 {
            let c = PointConfig::standard(n).unwrap();
            let min = Tiling::extremal(&c, Extreme::Min);
            let max = Tiling::extremal(&c, Extreme::Max);
            assert_eq!(min, Tiling::extremal_combinatorial(n, Extreme::Min));
            assert_eq!(max, Tiling::extremal_combinatorial(n, Extreme::Max));
            assert_eq!(min.orientation().negated(), max.orientation());
            assert_eq!(min.orientation().count_negative(), 0);
            assert_eq!(min.opposite(), max);
        }
        let c = PointConfig::standard(5).unwrap();
        let min = Tiling::extremal(&c, Extreme::Min).orientation();
        let max = Tiling::extremal(&c, Extreme::Max).orientation();
        assert_eq!(min.hamming(&max), 10);
    }

    #[test]
    fn three_point_flip() {
        let c = PointConfig::standard(3).unwrap();
        let min = Tiling::extremal(&c, Extreme::Min);
        let moves = min.available_flips();
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].direction, Direction::Raising);
        assert_eq!(moves[0].level(), 1);
        let max = min.apply_flip(&moves[0]).unwrap();
        assert_eq!(max, Tiling::extremal(&c, Extreme::Max));
        let back = max.available_flips();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].direction, Direction::Lowering);
        assert_eq!(max.apply_flip(&back[0]).unwrap(), min);
        assert!(matches!(min.apply_flip(&back[0]), Err(Error::FlipUnavailable(_))));
    }

    #[test]
    fn flip_exchanges_hexagon_tiles() {
        // A flip along ({1,4},{2}) for the configuration {-1, 0, 1, 2}.
        let c = cfg(&["-1", "0", "1", "2"]);
        let mut found = false;
        for h in [[0, 0, 5, 1], [3, 0, 0, 1], [0, 1, 0, 7], [1, 0, 2, 0]] {
            let t = Tiling::from_heights(&c, &HeightVector::from_ints(&h)).unwrap();
            if let Some(m) = t.flip_at(0, 1, 3) {
                found = true;
                let u = t.apply_flip(&m).unwrap();
                let before: HashSet<Tile> = t.tiles().collect();
                let after: HashSet<Tile> = u.tiles().collect();
                assert_eq!(before.difference(&after).count(), 3);
                let removed: HashSet<Tile> = m.removed_tiles().into_iter().collect();
                assert_eq!(before.difference(&after).copied().collect::<HashSet<_>>(), removed);
                assert_eq!(t.orientation().hamming(&u.orientation()), 1);
            }
        }
        assert!(found);
    }

    #[test]
    fn opposite_examples() {
        assert_eq!(n3_neg().opposite(), n3_pos());
        assert_eq!(
            n3_neg().opposite().sorted_tiles(),
            vec![tile(&[3], 1, 2), tile(&[], 1, 3), tile(&[1], 2, 3)]
        );
    }

    #[test]
    fn validate_detects_failures() {
        let c = PointConfig::standard(3).unwrap();
        assert!(n3_neg().validate(&c).is_ok());
        let bad = [tile(&[], 1, 2), tile(&[3], 1, 2), tile(&[], 2, 3)];
        let report = validate_tiles(3, &bad, &c);
        assert!(report.failures.contains(&ValidationFailure::DuplicatePair(1, 2)));
        assert!(report.failures.contains(&ValidationFailure::MissingPair(1, 3)));
        assert!(Tiling::from_tiles(3, &bad).is_err());

        // right pairs, wrong offsets
        let bad = [tile(&[3], 1, 2), tile(&[2], 1, 3), tile(&[], 2, 3)];
        let report = validate_tiles(3, &bad, &c);
        assert!(!report.is_ok());
        // the vertex count happens to be right; the witnesses disagree
        assert!(report.failures.iter().any(|f| matches!(f, ValidationFailure::Orientation(_))));
        assert!(report.failures.iter().any(|f| matches!(f, ValidationFailure::LevelChain { k: 1, .. })));
    }

    #[test]
    fn vertex_count_by_brute_force() {
        let c = cfg(&["-1", "0", "1", "2"]);
        let t = Tiling::extremal(&c, Extreme::Min);
        // enumerate all subsets S and test A ⊆ S ⊆ A∪B against every tile
        let brute = (0u32..16)
            .filter(|&s| {
                t.tiles().any(|tile| {
                    let s = Subset(s);
                    tile.offset.is_subset_of(s) && s.is_subset_of(tile.offset.union(tile.pair()))
                })
            })
            .count();
        assert_eq!(brute, 11);
        assert_eq!(t.vertices().len(), 11);
        assert!(t.validate(&c).is_ok());
    }

    #[test]
    fn json_roundtrip() {
        let t = n3_neg();
        let v = t.to_json();
        assert_eq!(
            v,
            serde_json::json!({"n": 3, "tiles": [
                {"A": [], "B": [1, 2]}, {"A": [2], "B": [1, 3]}, {"A": [], "B": [2, 3]}
            ]})
        );
        assert_eq!(Tiling::from_json(&v).unwrap(), t);
        assert!(Tiling::from_json(&serde_json::json!({"n": 3, "tiles": []})).is_err());
    }

    fn random_heights(n: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-1000i64..1000, n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn regular_roundtrip(h in random_heights(6)) {
            let c = cfg(&["-3", "-1/2", "0", "2/3", "5", "11"]);
            let h = HeightVector::from_ints(&h);
            if let Ok(sigma) = c.sigma_h(&h) {
                let t = Tiling::from_heights(&c, &h).unwrap();
                prop_assert_eq!(t.orientation_of().unwrap(), sigma);
                prop_assert!(t.validate(&c).is_ok());
            } else {
                prop_assert!(Tiling::from_heights(&c, &h).is_err());
            }
        }

        #[test]
        fn flips_are_sound(h in random_heights(7)) {
            let c = PointConfig::standard(7).unwrap();
            let h = HeightVector::from_ints(&h);
            prop_assume!(c.is_generic_height(&h));
            let t = Tiling::from_heights(&c, &h).unwrap();
            for m in t.available_flips() {
                let u = t.apply_flip(&m).unwrap();
                prop_assert!(u.validate(&c).is_ok());
                prop_assert_eq!(t.orientation().hamming(&u.orientation()), 1);
                let changed: Vec<Tile> = t.tiles().filter(|x| u.offset(x.i, x.j) != x.offset).collect();
                prop_assert_eq!(changed.len(), 3);
                // only offsets of sizes level-1 and level are touched
                let l = m.level();
                for x in changed {
                    prop_assert!(x.offset.len() == l - 1 || x.offset.len() == l);
                    let y = u.offset(x.i, x.j);
                    prop_assert!(y.len() == l - 1 || y.len() == l);
                }
                let reverse = u.available_flips().into_iter()
                    .find(|r| r.circuit_rank() == m.circuit_rank()).unwrap();
                prop_assert_eq!(reverse.direction, m.direction.reverse());
                prop_assert_eq!(u.apply_flip(&reverse).unwrap(), t.clone());
            }
        }

        #[test]
        fn opposite_properties(h in random_heights(6)) {
            let c = PointConfig::standard(6).unwrap();
            let h = HeightVector::from_ints(&h);
            prop_assume!(c.is_generic_height(&h));
            let t = Tiling::from_heights(&c, &h).unwrap();
            let o = t.opposite();
            prop_assert_eq!(o.opposite(), t.clone());
            prop_assert!(o.validate(&c).is_ok());
            prop_assert_eq!(o.orientation(), t.orientation().negated());
            prop_assert_eq!(o.clone(), Tiling::from_heights(&c, &h.negated()).unwrap());
            let mut census = t.level_census();
            census.reverse();
            prop_assert_eq!(o.level_census(), census);
            let mut levels: Vec<usize> = t.available_flips().iter().map(|m| 6 - 1 - m.level()).collect();
            let mut opposite_levels: Vec<usize> = o.available_flips().iter().map(|m| m.level()).collect();
            levels.sort_unstable();
            opposite_levels.sort_unstable();
            prop_assert_eq!(levels, opposite_levels);
        }
    }

    #[test]
    fn rational_heights_are_exact() {
        let c = cfg(&["0", "1/3", "2/3", "1"]);
        let h = HeightVector(["0", "1/9", "4/9", "1"].iter().map(|s| parse_rational(s).unwrap()).collect());
        // points on a parabola: same tiling as squared heights
        assert_eq!(Tiling::from_heights(&c, &h).unwrap(), Tiling::extremal(&c, Extreme::Min));
    }
}
