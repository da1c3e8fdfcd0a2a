//! Point configurations on a line, their lifted vectors, circuits, and the
//! sign vectors attached to tilings and height vectors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::MAX_ELEMENTS;

pub type Rational = BigRational;

/// Parses `"p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::BadRational(s.to_string()))
}

pub fn rational_from_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Rank of the pair `i < j` (0-based) in colexicographic order.
#[inline]
pub fn pair_rank(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Rank of the triple `p < q < r` (0-based) in colexicographic order.
#[inline]
pub fn triple_rank(p: usize, q: usize, r: usize) -> usize {
    debug_assert!(p < q && q < r);
    r * (r - 1) * (r - 2) / 6 + q * (q - 1) / 2 + p
}

/// All pairs `i < j < n` in colexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

/// All triples `p < q < r < n` in colexicographic order.
pub fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (2..n).flat_map(|r| (1..r).flat_map(move |q| (0..q).map(move |p| (p, q, r))))
}

/// `n` strictly increasing rationals `a_1 < ... < a_n`, lifted to `v_i = (a_i, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    coords: Vec<Rational>,
}

impl PointConfig {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::TooFewPoints(coords.len()));
        }
        if coords.len() > MAX_ELEMENTS {
            return Err(Error::TooManyPoints {
                got: coords.len(),
                max: MAX_ELEMENTS,
            });
        }
        for (i, w) in coords.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::NotStrictlyIncreasing {
                    index: i + 2,
                    value: w[1].to_string(),
                });
            }
        }
        Ok(PointConfig { coords })
    }

    /// `a_i = i` for `i = 1..=n`.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new((1..=n as i64).map(rational_from_int).collect())
    }

    pub fn from_strs<S: AsRef<str>>(points: &[S]) -> Result<Self> {
        let coords = points
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Coordinate of point `i` (0-based).
    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    /// Lifted vector `v_i = (a_i, 1)` (0-based).
    pub fn lift(&self, i: usize) -> (Rational, Rational) {
        (self.coords[i].clone(), rational_from_int(1))
    }

    /// `|det(v_i, v_j)| = a_j - a_i`, the area of any tile with pair `{i, j}`.
    pub fn pair_area(&self, i: usize, j: usize) -> Rational {
        (&self.coords[j] - &self.coords[i]).abs()
    }

    /// Area of the whole zonotope, `Σ_{i<j} (a_j - a_i)`.
    pub fn total_area(&self) -> Rational {
        pairs(self.n()).map(|(i, j)| self.pair_area(i, j)).sum()
    }

    pub fn circuit(&self, p: usize, q: usize, r: usize) -> Circuit {
        let a = &self.coords;
        Circuit {
            p,
            q,
            r,
            alpha: [&a[r] - &a[q], &a[p] - &a[r], &a[q] - &a[p]],
        }
    }

    /// All `C(n,3)` circuits in colexicographic order of `(p, q, r)`.
    pub fn circuits(&self) -> Vec<Circuit> {
        triples(self.n()).map(|(p, q, r)| self.circuit(p, q, r)).collect()
    }

    pub fn circuit_count(&self) -> usize {
        crate::binomial(self.n(), 3)
    }

    /// `σ_h`: the sign of `<h, α(C)>` on every circuit.
    pub fn sigma_h(&self, h: &HeightVector) -> Result<OrientationVector> {
        self.check_height(h)?;
        let mut out = OrientationVector::all_positive(self.circuit_count());
        for (rank, c) in self.circuits().iter().enumerate() {
            let v = c.pairing(h);
            if v.is_zero() {
                return Err(Error::NonGenericHeight {
                    p: c.p + 1,
                    q: c.q + 1,
                    r: c.r + 1,
                });
            }
            if v.is_negative() {
                out.set(rank, Sign::Neg);
            }
        }
        Ok(out)
    }

    pub fn is_generic_height(&self, h: &HeightVector) -> bool {
        self.sigma_h(h).is_ok()
    }

    pub(crate) fn check_height(&self, h: &HeightVector) -> Result<()> {
        if h.len() != self.n() {
            return Err(Error::HeightLength {
                got: h.len(),
                expected: self.n(),
            });
        }
        Ok(())
    }

    /// Lowest common denominator of the coordinates.
    pub fn common_denominator(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::from(1), |acc, c| num_integer::lcm(acc, c.denom().clone()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ConfigJson {
            points: self.coords.iter().map(|c| c.to_string()).collect(),
        })
        .expect("string vector serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let parsed: ConfigJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_strs(&parsed.points)
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    points: Vec<String>,
}

/// A three-element circuit `({p, r}, {q})` with `p < q < r` (0-based) and
/// coefficients `α = (a_r - a_q, a_p - a_r, a_q - a_p)` at `(p, q, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub alpha: [Rational; 3],
}

impl Circuit {
    pub fn rank(&self) -> usize {
        triple_rank(self.p, self.q, self.r)
    }

    /// `(C⁺, C⁻)` as 1-based labels.
    pub fn parts(&self) -> ([usize; 2], [usize; 1]) {
        ([self.p + 1, self.r + 1], [self.q + 1])
    }

    /// `<h, α(C)>`.
    pub fn pairing(&self, h: &HeightVector) -> Rational {
        &self.alpha[0] * &h.0[self.p] + &self.alpha[1] * &h.0[self.q] + &self.alpha[2] * &h.0[self.r]
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({{{},{}}},{{{}}})", self.p + 1, self.r + 1, self.q + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightVector(pub Vec<Rational>);

impl HeightVector {
    pub fn from_ints(v: &[i64]) -> Self {
        HeightVector(v.iter().copied().map(rational_from_int).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, by: &Rational) -> Self {
        HeightVector(self.0.iter().map(|x| x * by).collect())
    }

    pub fn negated(&self) -> Self {
        HeightVector(self.0.iter().map(|x| -x).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// One sign per circuit, indexed by colexicographic rank. A set bit means `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientationVector {
    len: usize,
    words: Vec<u64>,
}

impl OrientationVector {
    pub fn all_positive(len: usize) -> Self {
        OrientationVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn all_negative(len: usize) -> Self {
        let mut v = Self::all_positive(len);
        for i in 0..len {
            v.set(i, Sign::Neg);
        }
        v
    }

    pub fn from_signs(signs: &[Sign]) -> Self {
        let mut v = Self::all_positive(signs.len());
        for (i, s) in signs.iter().enumerate() {
            v.set(i, *s);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sign(&self, i: usize) -> Sign {
        assert!(i < self.len);
        if self.words[i / 64] >> (i % 64) & 1 == 1 {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }

    pub fn set(&mut self, i: usize, s: Sign) {
        assert!(i < self.len);
        let bit = 1u64 << (i % 64);
        match s {
            Sign::Neg => self.words[i / 64] |= bit,
            Sign::Pos => self.words[i / 64] &= !bit,
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn negated(&self) -> Self {
        let mut v = self.clone();
        for i in 0..self.len {
            v.toggle(i);
        }
        v
    }

    pub fn signs(&self) -> Vec<Sign> {
        (0..self.len).map(|i| self.sign(i)).collect()
    }

    pub fn count_negative(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Single-word key, available when there are at most 64 circuits (`n ≤ 8`).
    pub fn as_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn from_u64(len: usize, key: u64) -> Self {
        assert!(len <= 64);
        let mut v = Self::all_positive(len);
        if len > 0 {
            v.words[0] = key;
        }
        v
    }

    /// Lowercase hex, most significant word first, zero-padded to the
    /// vector's length.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        let mut s = String::new();
        for w in self.words.iter().rev() {
            s.push_str(&format!("{w:016x}"));
        }
        if s.is_empty() {
            s.push('0');
        }
        s[s.len() - digits.min(s.len())..].to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn make_config_examples() {
        let c = PointConfig::from_strs(&["-1", "0", "1", "2"]).unwrap();
        assert_eq!(c.n(), 4);
        assert_eq!(c.lift(0), (q("-1"), q("1")));

        let c = PointConfig::from_strs(&["0", "1"]).unwrap();
        assert_eq!(c.n(), 2);
        assert!(c.circuits().is_empty());

        assert!(matches!(
            PointConfig::from_strs(&["0", "0", "1"]),
            Err(Error::NotStrictlyIncreasing { index: 2, .. })
        ));
        assert!(matches!(PointConfig::from_strs(&["1", "0"]), Err(Error::NotStrictlyIncreasing { .. })));
        assert_eq!(PointConfig::from_strs(&["3"]), Err(Error::TooFewPoints(1)));
        assert!(matches!(PointConfig::from_strs(&["x", "1"]), Err(Error::BadRational(_))));
    }

    // Independent route: solve α_p v_p + α_q v_q + α_r v_r = 0 with α_q = -1
    // by Cramer's rule on the 2x2 system in (α_p, α_r).
    fn cramer_alpha(a: &[Rational], p: usize, q: usize, r: usize) -> [Rational; 3] {
        // α_p a_p + α_r a_r = a_q ; α_p + α_r = 1
        let det = &a[p] - &a[r];
        let ap = (&a[q] - &a[r]) / &det;
        let ar = (&a[p] - &a[q]) / &det;
        [ap, q_neg_one(), ar]
    }

    fn q_neg_one() -> Rational {
        rational_from_int(-1)
    }

    #[test]
    fn circuit_alpha_matches_linear_solve() {
        let c = PointConfig::from_strs(&["0", "1", "2"]).unwrap();
        let circ = c.circuit(0, 1, 2);
        assert_eq!(circ.alpha, [q("1"), q("-2"), q("1")]);
        assert_eq!(circ.parts(), ([1, 3], [2]));

        let c = PointConfig::from_strs(&["-1", "0", "1", "2"]).unwrap();
        let circ = c.circuit(0, 1, 3);
        assert_eq!(circ.alpha, [q("2"), q("-3"), q("1")]);
        assert_eq!(circ.parts(), ([1, 4], [2]));

        // proportional to the Cramer solution, with positive factor -α_q
        let coords = c.coords().to_vec();
        for circ in c.circuits() {
            let base = cramer_alpha(&coords, circ.p, circ.q, circ.r);
            let scale = -circ.alpha[1].clone();
            for (x, y) in circ.alpha.iter().zip(base.iter()) {
                assert_eq!(x, &(y * &scale));
            }
        }
    }

    #[test]
    fn circuits_are_colex_ordered() {
        let c = PointConfig::standard(5).unwrap();
        let cs = c.circuits();
        assert_eq!(cs.len(), 10);
        for (i, circ) in cs.iter().enumerate() {
            assert_eq!(circ.rank(), i);
        }
        assert_eq!((cs[1].p, cs[1].q, cs[1].r), (0, 1, 3));
    }

    #[test]
    fn sigma_h_examples() {
        let c = PointConfig::from_strs(&["0", "1", "2"]).unwrap();
        let s = c.sigma_h(&HeightVector::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(s.signs(), vec![Sign::Pos]);
        let s = c.sigma_h(&HeightVector::from_ints(&[1, 0, 0])).unwrap();
        assert_eq!(s.signs(), vec![Sign::Pos]);
        let s = c.sigma_h(&HeightVector::from_ints(&[0, 1, 0])).unwrap();
        assert_eq!(s.signs(), vec![Sign::Neg]);
        assert_eq!(
            c.sigma_h(&HeightVector::from_ints(&[0, 1, 2])),
            Err(Error::NonGenericHeight { p: 1, q: 2, r: 3 })
        );
        assert!(matches!(
            c.sigma_h(&HeightVector::from_ints(&[0, 1])),
            Err(Error::HeightLength { .. })
        ));
    }

    #[test]
    fn config_json_roundtrip() {
        let c = PointConfig::from_strs(&["-1", "1/2", "3"]).unwrap();
        let v = c.to_json();
        assert_eq!(v, serde_json::json!({"points": ["-1", "1/2", "3"]}));
        assert_eq!(PointConfig::from_json(&v).unwrap(), c);
    }

    #[test]
    fn hex_keys() {
        let mut v = OrientationVector::all_positive(10);
        assert_eq!(v.to_hex(), "000");
        v.set(0, Sign::Neg);
        v.set(9, Sign::Neg);
        assert_eq!(v.to_hex(), "201");
        assert_eq!(OrientationVector::all_positive(0).to_hex(), "0");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..7).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    proptest! {
        #[test]
        fn alpha_relations_hold(raw in proptest::collection::btree_set(-40i64..40, 3..7)) {
            let c = PointConfig::new(raw.iter().map(|&x| rational_from_int(x)).collect()).unwrap();
            for circ in c.circuits() {
                let [ap, aq, ar] = &circ.alpha;
                prop_assert!(ap.is_positive() && ar.is_positive() && aq.is_negative());
                prop_assert!((ap + aq + ar).is_zero());
                let a = c.coords();
                prop_assert!((ap * &a[circ.p] + aq * &a[circ.q] + ar * &a[circ.r]).is_zero());
            }
        }

        #[test]
        fn sigma_h_scaling(h in proptest::collection::vec(small_rational(), 5), lam in 1i64..9) {
            let c = PointConfig::from_strs(&["-2", "0", "1/3", "4", "5"]).unwrap();
            let h = HeightVector(h);
            if let Ok(s) = c.sigma_h(&h) {
                let lam = rational_from_int(lam);
                prop_assert_eq!(c.sigma_h(&h.scaled(&lam)).unwrap(), s.clone());
                prop_assert_eq!(c.sigma_h(&h.negated()).unwrap(), s.negated());
            }
        }
    }
}
