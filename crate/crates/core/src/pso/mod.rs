//! Particle swarm optimization with global-best, ring and clubs-based
//! neighbourhoods.

pub mod clubs;
pub mod influence;

pub use clubs::{ClubParams, ClubRegistry};
pub use influence::{influence_experiment, InfluenceConfig};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::rng::Rng;
use crate::space::SearchSpace;
use crate::stats::RunStats;

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub pbest_x: Vec<f64>,
    pub pbest_f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Inertia {
    Static(f64),
    /// A fresh uniform draw in `(0, w)` per velocity component.
    Random(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Topology {
    Gbest,
    LbestRing,
    Clubs(ClubParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub inertia: Inertia,
    pub chi: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub topology: Topology,
}

impl PsoConfig {
    pub const PHI: f64 = 1.494;
    pub const STATIC_W: f64 = 0.729;

    pub fn gbest() -> Self {
        Self {
            swarm_size: 20,
            inertia: Inertia::Static(Self::STATIC_W),
            chi: 1.0,
            phi1: Self::PHI,
            phi2: Self::PHI,
            topology: Topology::Gbest,
        }
    }

    pub fn lbest() -> Self {
        Self {
            topology: Topology::LbestRing,
            ..Self::gbest()
        }
    }

    /// Clubs-based PSO with random inertia in `(0, w)`.
    pub fn clubs(w: f64, params: ClubParams) -> Self {
        Self {
            inertia: Inertia::Random(w),
            topology: Topology::Clubs(params),
            ..Self::gbest()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.swarm_size == 0 {
            return Err(Error::InvalidParameter("swarm size must be positive".into()));
        }
        if !(self.phi1 >= 0.0 && self.phi2 >= 0.0) {
            return Err(Error::InvalidParameter("learning rates must be non-negative".into()));
        }
        let w = match self.inertia {
            Inertia::Static(w) | Inertia::Random(w) => w,
        };
        if !w.is_finite() || !self.chi.is_finite() {
            return Err(Error::InvalidParameter("inertia and constriction must be finite".into()));
        }
        if let Topology::Clubs(p) = self.topology {
            p.validate()?;
        }
        Ok(())
    }
}

/// Per-component draws for one velocity update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityDraws {
    pub w: f64,
    pub r1: f64,
    pub r2: f64,
}

/// `chi * (w * v + phi1 * r1 * (p - x) + phi2 * r2 * (g - x))`, clamped to
/// `[-vmax, vmax]` when a limit is given.
#[allow(clippy::too_many_arguments)]
pub fn velocity_component(
    v: f64,
    x: f64,
    p: f64,
    g: f64,
    chi: f64,
    phi1: f64,
    phi2: f64,
    d: VelocityDraws,
    vmax: Option<f64>,
) -> f64 {
    let nv = chi * (d.w * v + phi1 * d.r1 * (p - x) + phi2 * d.r2 * (g - x));
    match vmax {
        Some(m) => nv.clamp(-m, m),
        None => nv,
    }
}

/// New velocity of `p` guided by `g`. Draws per component in the order
/// inertia (random inertia only), r1, r2.
pub fn velocity_update(p: &Particle, g: &[f64], cfg: &PsoConfig, vmax: Option<&[f64]>, rng: &mut Rng) -> Vec<f64> {
    (0..p.x.len())
        .map(|d| {
            let w = match cfg.inertia {
                Inertia::Static(w) => w,
                Inertia::Random(w) => w * rng.uniform(),
            };
            let r1 = rng.uniform();
            let r2 = rng.uniform();
            velocity_component(
                p.v[d],
                p.x[d],
                p.pbest_x[d],
                g[d],
                cfg.chi,
                cfg.phi1,
                cfg.phi2,
                VelocityDraws { w, r1, r2 },
                vmax.map(|m| m[d]),
            )
        })
        .collect()
}

/// Neighbourhood structure used to pick each particle's guide.
#[derive(Debug, Clone)]
pub enum Neighborhood {
    Gbest,
    LbestRing,
    Clubs(ClubRegistry),
}

/// Lowest-pbest member of `candidates`; ties go to the lowest index.
fn argmin_among(candidates: impl IntoIterator<Item = usize>, pbest: &[f64]) -> usize {
    let mut best: Option<usize> = None;
    for c in candidates {
        best = match best {
            Some(b) if pbest[b] < pbest[c] || (pbest[b] == pbest[c] && b < c) => Some(b),
            _ => Some(c),
        };
    }
    best.expect("non-empty neighbourhood")
}

/// Index of the guide for particle `i`.
pub fn neighborhood_best(i: usize, nb: &Neighborhood, pbest: &[f64]) -> usize {
    let n = pbest.len();
    match nb {
        Neighborhood::Gbest => argmin_among(0..n, pbest),
        Neighborhood::LbestRing => argmin_among([(i + n - 1) % n, i, (i + 1) % n], pbest),
        Neighborhood::Clubs(reg) => argmin_among(reg.neighbors(i), pbest),
    }
}

#[derive(Debug, Clone)]
pub struct PsoOutcome {
    pub stats: RunStats,
    pub best_x: Vec<f64>,
    pub best_f: f64,
    pub swarm: Vec<Particle>,
    /// Final club membership levels (clubs topology only).
    pub levels: Option<Vec<usize>>,
}

/// Initial velocity: uniform in `[-vmax, vmax]`, or in a window as wide as
/// the initialization range centred on zero.
fn initial_velocity(space: &SearchSpace, rng: &mut Rng) -> Vec<f64> {
    (0..space.dims())
        .map(|d| {
            let half = match space.vmax() {
                Some(m) => m[d],
                None => space.width(d) / 2.0,
            };
            rng.range(-half, half)
        })
        .collect()
}

/// Builds a swarm (positions then velocities, particle by particle) and the
/// neighbourhood for `cfg`. Personal bests start unevaluated.
pub fn init_swarm(space: &SearchSpace, cfg: &PsoConfig, rng: &mut Rng) -> Result<(Vec<Particle>, Neighborhood)> {
    cfg.validate()?;
    let swarm = (0..cfg.swarm_size)
        .map(|_| {
            let x = space.sample_uniform(rng);
            let v = initial_velocity(space, rng);
            Particle {
                pbest_x: x.clone(),
                x,
                v,
                pbest_f: f64::INFINITY,
            }
        })
        .collect();
    let nb = match cfg.topology {
        Topology::Gbest => Neighborhood::Gbest,
        Topology::LbestRing => Neighborhood::LbestRing,
        Topology::Clubs(p) => Neighborhood::Clubs(ClubRegistry::random(cfg.swarm_size, p, rng)?),
    };
    Ok((swarm, nb))
}

/// One PSO iteration after evaluation: guides, velocity and position
/// updates, then club dynamics.
pub fn step(swarm: &mut [Particle], nb: &mut Neighborhood, cfg: &PsoConfig, space: &SearchSpace, iter: usize, rng: &mut Rng) {
    let pbest: Vec<f64> = swarm.iter().map(|p| p.pbest_f).collect();
    let guides: Vec<usize> = (0..swarm.len()).map(|i| neighborhood_best(i, nb, &pbest)).collect();
    for (i, &g) in guides.iter().enumerate() {
        let gx = swarm[g].pbest_x.clone();
        let p = &mut swarm[i];
        p.v = velocity_update(p, &gx, cfg, space.vmax(), rng);
        for (x, v) in p.x.iter_mut().zip(&p.v) {
            *x += v;
        }
        space.apply_boundary_in_place(&mut p.x);
    }
    if let Neighborhood::Clubs(reg) = nb {
        reg.update(&pbest, iter, rng);
    }
}

fn evaluate_swarm(swarm: &mut [Particle], objective: &dyn Objective) {
    for p in swarm.iter_mut() {
        let f = objective.evaluate(&p.x);
        if f < p.pbest_f {
            p.pbest_f = f;
            p.pbest_x.clone_from(&p.x);
        }
    }
}

/// Runs the swarm for `budget / swarm_size` whole iterations. Iteration 1
/// evaluates the initial swarm.
pub fn pso_run(
    objective: &dyn Objective,
    space: &SearchSpace,
    cfg: &PsoConfig,
    budget: u64,
    rng: &mut Rng,
) -> Result<PsoOutcome> {
    let n = cfg.swarm_size as u64;
    if budget < n {
        return Err(Error::InvalidParameter(format!(
            "budget {budget} is smaller than the swarm size {n}"
        )));
    }
    let (mut swarm, mut nb) = init_swarm(space, cfg, rng)?;
    let iterations = (budget / n) as usize;
    let mut stats = RunStats::new();
    for iter in 1..=iterations {
        evaluate_swarm(&mut swarm, objective);
        let best = swarm.iter().map(|p| p.pbest_f).fold(f64::INFINITY, f64::min);
        stats.record(iter, iter as u64 * n, best);
        if iter < iterations {
            step(&mut swarm, &mut nb, cfg, space, iter, rng);
        }
    }
    let pbest: Vec<f64> = swarm.iter().map(|p| p.pbest_f).collect();
    let g = neighborhood_best(0, &Neighborhood::Gbest, &pbest);
    let levels = match &nb {
        Neighborhood::Clubs(reg) => Some(reg.levels()),
        _ => None,
    };
    Ok(PsoOutcome {
        stats,
        best_x: swarm[g].pbest_x.clone(),
        best_f: swarm[g].pbest_f,
        swarm,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn particle(x: f64, v: f64, p: f64) -> Particle {
        Particle { x: vec![x], v: vec![v], pbest_x: vec![p], pbest_f: 0.0 }
    }

    #[test]
    fn hand_computed_velocity() {
        let d = VelocityDraws { w: 0.729, r1: 1.0, r2: 1.0 };
        let v = velocity_component(1.0, 0.0, 2.0, 3.0, 1.0, 1.494, 1.494, d, None);
        assert!((v - 8.199).abs() < 1e-12);
        assert_eq!(velocity_component(1.0, 0.0, 2.0, 3.0, 1.0, 1.494, 1.494, d, Some(4.0)), 4.0);
    }

    #[test]
    fn fixed_point_and_zero_coefficients() {
        let mut rng = Rng::new(0);
        let cfg = PsoConfig::gbest();
        assert_eq!(velocity_update(&particle(2.0, 0.0, 2.0), &[2.0], &cfg, None, &mut rng), vec![0.0]);
        let still = PsoConfig { inertia: Inertia::Static(0.0), phi1: 0.0, phi2: 0.0, ..cfg };
        assert_eq!(velocity_update(&particle(1.0, 5.0, 3.0), &[4.0], &still, None, &mut rng), vec![0.0]);
    }

    #[test]
    fn guides() {
        assert_eq!(neighborhood_best(0, &Neighborhood::Gbest, &[4.0]), 0);
        assert_eq!(neighborhood_best(0, &Neighborhood::LbestRing, &[3.0, 1.0, 2.0]), 1);
        assert_eq!(neighborhood_best(1, &Neighborhood::LbestRing, &[3.0, 1.0, 2.0, 0.0]), 1);
        assert_eq!(neighborhood_best(2, &Neighborhood::Gbest, &[3.0, 1.0, 1.0]), 1);
        let reg = ClubRegistry::from_memberships(ClubParams::fixed(3, 1), &[vec![0], vec![1], vec![1]]).unwrap();
        let clubs = Neighborhood::Clubs(reg);
        assert_eq!(neighborhood_best(0, &clubs, &[5.0, 1.0, 2.0]), 0);
        assert_eq!(neighborhood_best(2, &clubs, &[5.0, 1.0, 2.0]), 1);
    }

    #[test]
    fn budget_of_one_swarm_returns_initial_best() {
        let space = SearchSpace::cube(3, -1.0, 1.0).unwrap();
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let cfg = PsoConfig::gbest();
        let out = pso_run(&f, &space, &cfg, 20, &mut Rng::new(2)).unwrap();
        let mut rng = Rng::new(2);
        let (swarm, _) = init_swarm(&space, &cfg, &mut rng).unwrap();
        let init_best = swarm.iter().map(|p| f(&p.x)).fold(f64::INFINITY, f64::min);
        assert_eq!(out.best_f, init_best);
        assert_eq!(out.stats.evaluations(), 20);
    }

    proptest! {
        #[test]
        fn single_club_guides_like_gbest(pbest in prop::collection::vec(-10i32..10, 1..25)) {
            let pbest: Vec<f64> = pbest.into_iter().map(f64::from).collect();
            let memb = vec![vec![0]; pbest.len()];
            let clubs = Neighborhood::Clubs(ClubRegistry::from_memberships(ClubParams::fixed(1, 1), &memb).unwrap());
            for i in 0..pbest.len() {
                prop_assert_eq!(neighborhood_best(i, &clubs, &pbest), neighborhood_best(i, &Neighborhood::Gbest, &pbest));
            }
        }

        #[test]
        fn velocity_respects_vmax(
            v in -50.0f64..50.0, x in -50.0f64..50.0, p in -50.0f64..50.0, g in -50.0f64..50.0,
            vmax in 0.1f64..10.0, seed in any::<u64>(),
        ) {
            let mut rng = Rng::new(seed);
            let cfg = PsoConfig::clubs(1.4, ClubParams::benchmark(10));
            let nv = velocity_update(&particle(x, v, p), &[g], &cfg, Some(&[vmax]), &mut rng);
            prop_assert!(nv[0].abs() <= vmax);
        }

        #[test]
        fn clubs_levels_stay_in_bounds(seed in any::<u64>()) {
            let space = SearchSpace::cube(5, -5.0, 5.0).unwrap().with_vmax(vec![5.0; 5]).unwrap();
            let params = ClubParams { n_clubs: 30, default_level: 6, min_level: 3, max_level: 9, rr: 2, dynamic: true };
            let cfg = PsoConfig::clubs(1.2, params);
            let f = |x: &[f64]| x.iter().map(|v| v * v - 10.0 * (std::f64::consts::TAU * v).cos()).sum::<f64>();
            let mut rng = Rng::new(seed);
            let (mut swarm, mut nb) = init_swarm(&space, &cfg, &mut rng).unwrap();
            let mut prev = match &nb { Neighborhood::Clubs(r) => r.levels(), _ => unreachable!() };
            for iter in 1..40 {
                evaluate_swarm(&mut swarm, &f);
                step(&mut swarm, &mut nb, &cfg, &space, iter, &mut rng);
                let Neighborhood::Clubs(reg) = &nb else { unreachable!() };
                let levels = reg.levels();
                for (a, b) in prev.iter().zip(&levels) {
                    prop_assert!((3..=9).contains(b));
                    prop_assert!(a.abs_diff(*b) <= 1);
                }
                prev = levels;
            }
        }
    }
}
