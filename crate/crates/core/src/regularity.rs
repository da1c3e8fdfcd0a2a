//! Exact regularity test for tilings.
//!
//! A tiling `T` is regular iff some height vector `h` satisfies
//! `σ_T(C)·<h, α(C)> > 0` on every circuit. The system is invariant under
//! `h ↦ h + c·1 + d·a`, so we fix `h_1 = h_2 = 0`, box the remaining heights
//! into `[-1, 1]`, and maximize the common slack `t ≤ 1` with the rational
//! simplex. The tiling is regular iff the optimum is positive.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{HeightVector, PointConfig, Rational, Sign};
use crate::flipgraph::FlipGraph;
use crate::simplex::{self, LpOutcome};
use crate::tiling::Tiling;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub regular: bool,
    /// Present iff `regular`; reproduces the tiling through [`Tiling::from_heights`].
    pub witness: Option<HeightVector>,
    /// Optimal margin `min_C σ_T(C)·<h, α(C)>` over the normalized region.
    pub slack: Rational,
}

impl RegularityCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({ "regular": self.regular, "slack": self.slack.to_string() });
        if let Some(h) = &self.witness {
            v["h"] = json!(h.0.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        }
        v
    }
}

pub fn classify(config: &PointConfig, tiling: &Tiling) -> RegularityCertificate {
    assert_eq!(config.n(), tiling.n(), "configuration and tiling sizes differ");
    let n = config.n();
    let free = n - 2;
    let vars = 2 * free + 1;
    let t_var = 2 * free;
    let sigma = tiling.orientation();

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (rank, circuit) in config.circuits().iter().enumerate() {
        let sign = match sigma.sign(rank) {
            Sign::Pos => Rational::one(),
            Sign::Neg => -Rational::one(),
        };
        let mut row = vec![Rational::zero(); vars];
        for (idx, coeff) in [circuit.p, circuit.q, circuit.r].into_iter().zip(&circuit.alpha) {
            if idx >= 2 {
                let k = idx - 2;
                row[k] -= &sign * coeff;
                row[free + k] += &sign * coeff;
            }
        }
        row[t_var] = Rational::one();
        rows.push(row);
        rhs.push(Rational::zero());
    }
    for var in 0..vars {
        let mut row = vec![Rational::zero(); vars];
        row[var] = Rational::one();
        rows.push(row);
        rhs.push(Rational::one());
    }
    let mut objective = vec![Rational::zero(); vars];
    objective[t_var] = Rational::one();

    let LpOutcome::Optimal { value, x } = simplex::maximize(&objective, &rows, &rhs).expect("well-formed program")
    else {
        unreachable!("every variable is boxed");
    };
    if !value.is_positive() {
        return RegularityCertificate {
            regular: false,
            witness: None,
            slack: value,
        };
    }
    let mut h = vec![Rational::zero(); n];
    for k in 0..free {
        h[k + 2] = &x[k] - &x[free + k];
    }
    let witness = HeightVector(h);
    let rebuilt = Tiling::from_heights(config, &witness).expect("positive slack makes the witness generic");
    assert_eq!(&rebuilt, tiling, "regularity witness does not reproduce the tiling");
    RegularityCertificate {
        regular: true,
        witness: Some(witness),
        slack: value,
    }
}

/// Regularity flag for every node of the graph.
pub fn classify_all(graph: &FlipGraph, config: &PointConfig) -> Vec<bool> {
    graph.tilings().par_iter().map(|t| classify(config, t).regular).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::Extreme;

    #[test]
    fn extremes_are_regular() {
        for n in 2..=7 {
            let c = PointConfig::standard(n).unwrap();
            for which in [Extreme::Min, Extreme::Max] {
                let cert = classify(&c, &Tiling::extremal(&c, which));
                assert!(cert.regular, "n = {n} {which:?}");
                assert!(cert.slack.is_positive());
            }
        }
    }

    #[test]
    fn certificate_json() {
        let c = PointConfig::standard(3).unwrap();
        let cert = classify(&c, &Tiling::extremal(&c, Extreme::Min));
        let v = cert.to_json();
        assert_eq!(v["regular"], json!(true));
        assert_eq!(v["h"].as_array().unwrap().len(), 3);
        assert_eq!(v["h"][0], json!("0"));
    }

    #[test]
    fn everything_regular_below_six_points() {
        let c = PointConfig::standard(5).unwrap();
        let g = FlipGraph::enumerate(&c, 8).unwrap();
        assert!(classify_all(&g, &c).into_iter().all(|r| r));
    }
}
