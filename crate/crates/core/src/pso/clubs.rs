//! Club membership registry and the per-iteration join/leave/retention
//! dynamics of clubs-based PSO.

use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClubParams {
    pub n_clubs: usize,
    pub default_level: usize,
    pub min_level: usize,
    pub max_level: usize,
    /// Retention period: levels drift back toward the default every `rr`
    /// iterations.
    pub rr: usize,
    /// When false the membership never changes.
    pub dynamic: bool,
}

impl ClubParams {
    /// 100 clubs, levels 5..=33, `rr = 2`.
    pub fn benchmark(default_level: usize) -> Self {
        Self {
            n_clubs: 100,
            default_level,
            min_level: 5,
            max_level: 33,
            rr: 2,
            dynamic: true,
        }
    }

    /// Fixed membership of exactly `level` clubs out of `n_clubs`.
    pub fn fixed(n_clubs: usize, level: usize) -> Self {
        Self {
            n_clubs,
            default_level: level,
            min_level: level,
            max_level: level,
            rr: 1,
            dynamic: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.n_clubs > 0
            && self.min_level >= 1
            && self.min_level <= self.default_level
            && self.default_level <= self.max_level
            && self.max_level <= self.n_clubs
            && self.rr >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "club levels need 1 <= min <= default <= max <= clubs and rr >= 1, got {self:?}"
            )))
        }
    }
}

/// Membership matrix stored as one bitset row per particle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClubRegistry {
    params: ClubParams,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl ClubRegistry {
    /// Every particle joins `default_level` distinct clubs chosen uniformly.
    pub fn random(n_particles: usize, params: ClubParams, rng: &mut Rng) -> Result<Self> {
        params.validate()?;
        let mut reg = Self::empty(n_particles, params);
        for i in 0..n_particles {
            for c in rng.sample_distinct(params.n_clubs, params.default_level) {
                reg.set(i, c, true);
            }
        }
        Ok(reg)
    }

    /// Registry from explicit club lists, one per particle.
    pub fn from_memberships(params: ClubParams, memberships: &[Vec<usize>]) -> Result<Self> {
        params.validate()?;
        let mut reg = Self::empty(memberships.len(), params);
        for (i, clubs) in memberships.iter().enumerate() {
            for &c in clubs {
                if c >= params.n_clubs {
                    return Err(Error::InvalidParameter(format!("club {c} does not exist")));
                }
                reg.set(i, c, true);
            }
        }
        Ok(reg)
    }

    fn empty(n: usize, params: ClubParams) -> Self {
        let words = params.n_clubs.div_ceil(64);
        Self {
            params,
            words,
            rows: vec![vec![0; words]; n],
        }
    }

    fn set(&mut self, i: usize, club: usize, on: bool) {
        let (w, b) = (club / 64, club % 64);
        if on {
            self.rows[i][w] |= 1 << b;
        } else {
            self.rows[i][w] &= !(1 << b);
        }
    }

    pub fn params(&self) -> &ClubParams {
        &self.params
    }

    pub fn n_particles(&self) -> usize {
        self.rows.len()
    }

    pub fn is_member(&self, i: usize, club: usize) -> bool {
        self.rows[i][club / 64] >> (club % 64) & 1 == 1
    }

    pub fn level(&self, i: usize) -> usize {
        self.rows[i].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn levels(&self) -> Vec<usize> {
        (0..self.n_particles()).map(|i| self.level(i)).collect()
    }

    pub fn clubs_of(&self, i: usize) -> Vec<usize> {
        (0..self.params.n_clubs).filter(|&c| self.is_member(i, c)).collect()
    }

    /// Particles sharing at least one club with `i`, plus `i` itself,
    /// ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let row = &self.rows[i];
        (0..self.n_particles())
            .filter(|&j| j == i || self.rows[j].iter().zip(row).any(|(a, b)| a & b != 0))
            .collect()
    }

    fn leave_random(&mut self, i: usize, rng: &mut Rng) {
        let clubs = self.clubs_of(i);
        if !clubs.is_empty() {
            let c = clubs[rng.index(clubs.len())];
            self.set(i, c, false);
        }
    }

    fn join_random(&mut self, i: usize, rng: &mut Rng) {
        let free: Vec<usize> = (0..self.params.n_clubs).filter(|&c| !self.is_member(i, c)).collect();
        if !free.is_empty() {
            let c = free[rng.index(free.len())];
            self.set(i, c, true);
        }
    }

    /// Neighbourhood extremes of particle `j` by personal-best value:
    /// `(strictly best, strictly worst)`. A particle without other
    /// neighbours is neither.
    pub fn extremes(&self, j: usize, pbest: &[f64]) -> (bool, bool) {
        let nb = self.neighbors(j);
        let others = nb.iter().filter(|&&k| k != j);
        let mut any = false;
        let mut best = true;
        let mut worst = true;
        for &k in others {
            any = true;
            best &= pbest[j] < pbest[k];
            worst &= pbest[j] > pbest[k];
        }
        (any && best, any && worst)
    }

    /// One membership update sweep in particle order. The strictly best
    /// particle of its neighbourhood leaves a random club (if above the
    /// minimum level), the strictly worst joins one (if below the maximum);
    /// on iterations divisible by `rr`, particles that were neither step one
    /// club toward the default level.
    pub fn update(&mut self, pbest: &[f64], iter: usize, rng: &mut Rng) {
        if !self.params.dynamic {
            return;
        }
        let p = self.params;
        for j in 0..self.n_particles() {
            let (is_best, _) = self.extremes(j, pbest);
            if is_best && self.level(j) > p.min_level {
                self.leave_random(j, rng);
            }
            let (_, is_worst) = self.extremes(j, pbest);
            if is_worst && self.level(j) < p.max_level {
                self.join_random(j, rng);
            }
            if iter.is_multiple_of(p.rr) && !is_best && !is_worst {
                let level = self.level(j);
                if level > p.default_level {
                    self.leave_random(j, rng);
                } else if level < p.default_level {
                    self.join_random(j, rng);
                }
            }
        }
    }
}
