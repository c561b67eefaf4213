//! Pareto dominance for minimization.

use crate::error::{Error, Result};

/// Relation of `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// `a` is no worse everywhere and strictly better somewhere.
    Dominates,
    /// `b` dominates `a`.
    DominatedBy,
    Equal,
    Indifferent,
}

pub fn dominates(a: &[f64], b: &[f64]) -> Result<Dominance> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(relation(a, b))
}

/// `a` is no worse than `b` in every objective.
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn relation(a: &[f64], b: &[f64]) -> Dominance {
    let mut a_better = false;
    let mut b_better = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            a_better = true;
        } else if y < x {
            b_better = true;
        }
        if a_better && b_better {
            return Dominance::Indifferent;
        }
    }
    match (a_better, b_better) {
        (true, false) => Dominance::Dominates,
        (false, true) => Dominance::DominatedBy,
        _ => Dominance::Equal,
    }
}

pub(crate) fn strictly_dominates(a: &[f64], b: &[f64]) -> bool {
    relation(a, b) == Dominance::Dominates
}

/// Number of members dominating each member.
pub fn domination_counts(points: &[Vec<f64>]) -> Vec<usize> {
    let n = points.len();
    let mut counts = vec![0; n];
    for i in 0..n {
        for j in (i + 1)..n {
            match relation(&points[i], &points[j]) {
                Dominance::Dominates => counts[j] += 1,
                Dominance::DominatedBy => counts[i] += 1,
                _ => {}
            }
        }
    }
    counts
}

/// Indices (ascending) of members no other member dominates.
pub fn nondominated_set(points: &[Vec<f64>]) -> Vec<usize> {
    domination_counts(points)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c == 0)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn relations() {
        assert_eq!(dominates(&[1.0, 1.0], &[2.0, 2.0]).unwrap(), Dominance::Dominates);
        assert_eq!(dominates(&[2.0, 2.0], &[1.0, 1.0]).unwrap(), Dominance::DominatedBy);
        assert_eq!(dominates(&[1.0, 3.0], &[3.0, 1.0]).unwrap(), Dominance::Indifferent);
        assert_eq!(dominates(&[8.0, 8.0], &[1.0, 9.0]).unwrap(), Dominance::Indifferent);
        assert_eq!(dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), Dominance::Equal);
        assert_eq!(dominates(&[1.0, 2.0], &[1.0, 3.0]).unwrap(), Dominance::Dominates);
        assert!(dominates(&[1.0], &[1.0, 2.0]).is_err());
        assert!(weakly_dominates(&[1.0, 2.0], &[1.0, 2.0]));
        assert!(!weakly_dominates(&[1.0, 3.0], &[3.0, 1.0]));
    }

    #[test]
    fn chains_and_antichains() {
        let anti = vec![vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0]];
        assert_eq!(nondominated_set(&anti), vec![0, 1, 2]);
        let chain = vec![vec![2.0, 2.0], vec![1.0, 1.0], vec![3.0, 3.0]];
        assert_eq!(nondominated_set(&chain), vec![1]);
        assert_eq!(domination_counts(&chain), vec![1, 0, 2]);
    }

    #[test]
    fn matches_brute_force_scan() {
        let mut rng = Rng::new(17);
        for _ in 0..20 {
            let pts: Vec<Vec<f64>> = (0..50)
                .map(|_| (0..3).map(|_| (rng.uniform() * 5.0).floor()).collect())
                .collect();
            let brute: Vec<usize> = (0..pts.len())
                .filter(|&i| {
                    !pts.iter().any(|q| {
                        q.iter().zip(&pts[i]).all(|(a, b)| a <= b) && q.iter().zip(&pts[i]).any(|(a, b)| a < b)
                    })
                })
                .collect();
            assert_eq!(nondominated_set(&pts), brute);
            let counts: Vec<usize> = pts
                .iter()
                .map(|p| {
                    pts.iter()
                        .filter(|q| q.iter().zip(p).all(|(a, b)| a <= b) && q.iter().zip(p).any(|(a, b)| a < b))
                        .count()
                })
                .collect();
            assert_eq!(domination_counts(&pts), counts);
        }
    }
}
