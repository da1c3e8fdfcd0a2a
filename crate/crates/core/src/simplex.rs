//! Dense primal simplex over exact rationals.
//!
//! Solves `maximize c·x subject to A x ≤ b, x ≥ 0` when `b ≥ 0`, so the slack
//! basis is feasible from the start. Bland's rule picks both the entering and
//! the leaving variable, which rules out cycling on degenerate problems.

use num_traits::{One, Signed, Zero};

use crate::config::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Unbounded,
}

pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpOutcome> {
    let vars = c.len();
    let rows = a.len();
    if b.len() != rows || a.iter().any(|row| row.len() != vars) {
        return Err(Error::Invalid("constraint matrix shape mismatch".into()));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::Invalid("right-hand side must be nonnegative".into()));
    }
    let cols = vars + rows;
    // tableau rows: [A | I | b]; objective row holds reduced costs and -value
    let mut t: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut obj: Vec<Rational> = c.iter().map(|x| -x).collect();
    obj.extend(std::iter::repeat_n(Rational::zero(), rows + 1));
    let mut basis: Vec<usize> = (vars..cols).collect();

    loop {
        let Some(enter) = (0..cols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[cols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return Ok(LpOutcome::Unbounded);
        };

        let pivot = t[pr][enter].clone();
        for v in t[pr].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (v, p) in obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        basis[pr] = enter;
    }

    let mut x = vec![Rational::zero(); vars];
    for (i, &var) in basis.iter().enumerate() {
        if var < vars {
            x[var] = t[i][cols].clone();
        }
    }
    Ok(LpOutcome::Optimal {
        value: obj[cols].clone(),
        x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_rational, rational_from_int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().copied().map(rational_from_int).collect()
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), value 36
        let out = maximize(&ints(&[3, 5]), &[ints(&[1, 0]), ints(&[0, 2]), ints(&[3, 2])], &ints(&[4, 12, 18])).unwrap();
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: rational_from_int(36),
                x: ints(&[2, 6])
            }
        );
    }

    #[test]
    fn fractional_optimum() {
        // max x + y, 3x + y ≤ 2, x + 3y ≤ 2 → (1/2, 1/2)
        let out = maximize(&ints(&[1, 1]), &[ints(&[3, 1]), ints(&[1, 3])], &ints(&[2, 2])).unwrap();
        let half = parse_rational("1/2").unwrap();
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: rational_from_int(1),
                x: vec![half.clone(), half]
            }
        );
    }

    #[test]
    fn unbounded_and_degenerate() {
        assert_eq!(maximize(&ints(&[1, 0]), &[ints(&[-1, 1])], &ints(&[0])).unwrap(), LpOutcome::Unbounded);
        // all-zero right-hand side: optimum 0 at the origin
        let out = maximize(&ints(&[1, 1]), &[ints(&[1, -1]), ints(&[-1, 1]), ints(&[1, 1])], &ints(&[0, 0, 0])).unwrap();
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value.is_zero()));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(maximize(&ints(&[1]), &[ints(&[1])], &ints(&[-1])).is_err());
        assert!(maximize(&ints(&[1, 2]), &[ints(&[1])], &ints(&[1])).is_err());
    }

    #[test]
    fn matches_vertex_enumeration() {
        // brute force over all vertices of a small polygon
        // max 2x + 3y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let a = [ints(&[1, 1]), ints(&[1, 3]), ints(&[1, 0])];
        let b = ints(&[4, 6, 3]);
        let LpOutcome::Optimal { value, .. } = maximize(&ints(&[2, 3]), &a, &b).unwrap() else {
            panic!()
        };
        let mut best = rational_from_int(0);
        let mut lines = a.to_vec();
        let mut rhs = b.clone();
        lines.push(ints(&[-1, 0]));
        rhs.push(rational_from_int(0));
        lines.push(ints(&[0, -1]));
        rhs.push(rational_from_int(0));
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let det = &lines[i][0] * &lines[j][1] - &lines[i][1] * &lines[j][0];
                if det.is_zero() {
                    continue;
                }
                let x = (&rhs[i] * &lines[j][1] - &lines[i][1] * &rhs[j]) / &det;
                let y = (&lines[i][0] * &rhs[j] - &rhs[i] * &lines[j][0]) / &det;
                let feasible = lines.iter().zip(&rhs).all(|(l, r)| &l[0] * &x + &l[1] * &y <= *r);
                if feasible {
                    let v = rational_from_int(2) * &x + rational_from_int(3) * &y;
                    if v > best {
                        best = v;
                    }
                }
            }
        }
        assert_eq!(value, best);
    }
}
