//! Parent selection schemes. Fitness is minimized throughout; score-based
//! schemes convert fitness into positive scores first.

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Offset added to `worst - f` so the worst individual keeps a non-zero score.
pub const FPS_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankScheme {
    /// Best gets `s`, worst gets `2 - s`, linear in between. `s` in `[1, 2]`.
    Linear(f64),
    /// Scores `1, s, s^2, ...` by rank. `s` in `(0, 1]`.
    Exponential(f64),
}

impl RankScheme {
    pub fn validate(self) -> Result<()> {
        match self {
            RankScheme::Linear(s) if !(1.0..=2.0).contains(&s) => Err(Error::InvalidParameter(
                format!("linear rank pressure {s} outside [1, 2]"),
            )),
            RankScheme::Exponential(s) if !(s > 0.0 && s <= 1.0) => Err(Error::InvalidParameter(
                format!("exponential rank base {s} outside (0, 1]"),
            )),
            _ => Ok(()),
        }
    }

    /// Scores for ranks `1..=n`, best first.
    pub fn scores(self, n: usize) -> Vec<f64> {
        match self {
            RankScheme::Linear(s) => {
                if n == 1 {
                    return vec![s];
                }
                (0..n)
                    .map(|i| s - 2.0 * i as f64 * (s - 1.0) / (n - 1) as f64)
                    .collect()
            }
            RankScheme::Exponential(s) => {
                let mut v = Vec::with_capacity(n);
                let mut p = 1.0;
                for _ in 0..n {
                    v.push(p);
                    p *= s;
                }
                v
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    Tournament,
    /// Fitness-proportionate, optionally with sigma scaling of constant `c`.
    Fps { sigma_scaling: Option<f64> },
    Rank(RankScheme),
}

/// Index of the lowest fitness among `ts` uniform picks with replacement.
/// Ties keep the earliest pick.
pub fn select_tournament(fitness: &[f64], ts: usize, rng: &mut Rng) -> Result<usize> {
    if fitness.is_empty() {
        return Err(Error::Empty("population"));
    }
    if ts == 0 {
        return Err(Error::InvalidParameter("tournament size must be positive".into()));
    }
    let mut best = rng.index(fitness.len());
    for _ in 1..ts {
        let c = rng.index(fitness.len());
        if fitness[c] < fitness[best] {
            best = c;
        }
    }
    Ok(best)
}

/// Roulette-wheel draw proportional to strictly positive `scores`.
pub fn select_fps(scores: &[f64], rng: &mut Rng) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::Empty("population"));
    }
    if let Some(&bad) = scores.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
        return Err(Error::NonPositiveScore(bad));
    }
    Ok(roulette(scores, rng))
}

/// Rank-based draw: individuals are ordered by fitness (best first, ties by
/// index) and picked proportionally to their rank score.
pub fn select_rank(fitness: &[f64], scheme: RankScheme, rng: &mut Rng) -> Result<usize> {
    if fitness.is_empty() {
        return Err(Error::Empty("population"));
    }
    scheme.validate()?;
    let order = rank_order(fitness);
    let scores = scheme.scores(fitness.len());
    Ok(order[roulette(&scores, rng)])
}

/// Indices sorted by ascending fitness, ties by index.
pub fn rank_order(fitness: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));
    order
}

/// Converts minimization fitness into positive maximization scores.
pub fn fps_scores(fitness: &[f64]) -> Vec<f64> {
    let worst = fitness.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    fitness.iter().map(|f| worst - f + FPS_EPSILON).collect()
}

/// Sigma scaling: `max(f - (mean - c * sd), 0)`, floored at a tiny positive
/// value so every individual stays selectable.
pub fn sigma_scale(scores: &[f64], c: f64) -> Vec<f64> {
    let (mean, sd) = crate::stats::mean_std(scores);
    let base = mean - c * sd;
    scores
        .iter()
        .map(|s| (s - base).max(0.0).max(FPS_EPSILON))
        .collect()
}

fn roulette(weights: &[f64], rng: &mut Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let mut target = rng.uniform() * total;
    for (i, w) in weights.iter().enumerate() {
        if target < *w {
            return i;
        }
        target -= w;
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(weights.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(n: usize, draws: usize, mut pick: impl FnMut() -> usize) -> Vec<usize> {
        let mut c = vec![0; n];
        for _ in 0..draws {
            c[pick()] += 1;
        }
        c
    }

    #[test]
    fn full_tournament_finds_best() {
        let f = [3.0, 1.0, 2.0, 5.0];
        let mut rng = Rng::new(3);
        // With replacement, ts = N misses the best with probability (3/4)^4;
        // a large ts makes that negligible.
        assert_eq!(select_tournament(&f, 200, &mut rng).unwrap(), 1);
        assert_eq!(select_tournament(&[7.0], 2, &mut rng).unwrap(), 0);
        assert!(select_tournament(&[], 2, &mut rng).is_err());
    }

    #[test]
    fn tournament_uniform_on_flat_population() {
        let f = [1.0; 5];
        let mut rng = Rng::new(8);
        let c = counts(5, 10_000, || select_tournament(&f, 2, &mut rng).unwrap());
        let chi2: f64 = c.iter().map(|&o| (o as f64 - 2000.0).powi(2) / 2000.0).sum();
        // 4 degrees of freedom, 99.9th percentile 18.47
        assert!(chi2 < 18.47, "chi2 {chi2} counts {c:?}");
    }

    #[test]
    fn fps_ratios() {
        let mut rng = Rng::new(1);
        let c = counts(2, 10_000, || select_fps(&[1.0, 2.0], &mut rng).unwrap());
        let p0 = c[0] as f64 / 10_000.0;
        assert!((p0 - 1.0 / 3.0).abs() < 0.02, "{p0}");
        let c = counts(2, 10_000, || select_fps(&[11.0, 12.0], &mut rng).unwrap());
        let p0 = c[0] as f64 / 10_000.0;
        assert!((p0 - 11.0 / 23.0).abs() < 0.02, "{p0}");
        assert_eq!(select_fps(&[4.0], &mut rng).unwrap(), 0);
        assert_eq!(select_fps(&[1.0, 0.0], &mut rng), Err(Error::NonPositiveScore(0.0)));
    }

    #[test]
    fn fps_scores_favour_low_fitness() {
        let s = fps_scores(&[1.0, 3.0]);
        assert!(s[0] > s[1] && s[1] > 0.0);
        assert!(sigma_scale(&s, 2.0).iter().all(|v| *v > 0.0));
    }

    #[test]
    fn rank_scores() {
        assert_eq!(RankScheme::Linear(2.0).scores(3), vec![2.0, 1.0, 0.0]);
        assert_eq!(RankScheme::Linear(1.0).scores(4), vec![1.0; 4]);
        let e = RankScheme::Exponential(0.99).scores(3);
        assert_eq!(e[0], 1.0);
        assert_eq!(e[1], 0.99);
        assert!((e[2] - 0.9801).abs() < 1e-15);
        assert!(RankScheme::Linear(2.5).validate().is_err());
        assert!(RankScheme::Exponential(0.0).validate().is_err());
    }

    #[test]
    fn linear_rank_never_picks_worst_at_full_pressure() {
        let f = [5.0, 1.0, 3.0];
        let mut rng = Rng::new(2);
        let c = counts(3, 6_000, || select_rank(&f, RankScheme::Linear(2.0), &mut rng).unwrap());
        assert_eq!(c[0], 0);
        let ratio = c[1] as f64 / c[2] as f64;
        assert!((ratio - 2.0).abs() < 0.2, "{c:?}");
    }
}
