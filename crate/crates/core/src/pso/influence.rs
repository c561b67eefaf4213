//! Flow-of-influence experiment: how quickly a single good particle pulls
//! the rest of a fixed-membership club swarm toward it.

use super::{step, ClubParams, Inertia, Neighborhood, Particle, PsoConfig, Topology};
use crate::error::{Error, Result};
use crate::pso::ClubRegistry;
use crate::rng::Rng;
use crate::space::SearchSpace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfluenceConfig {
    pub swarm_size: usize,
    pub n_clubs: usize,
    pub level: usize,
    pub dims: usize,
    pub iterations: usize,
    pub inertia: Inertia,
    pub phi: f64,
    pub init_lo: f64,
    pub init_hi: f64,
}

impl InfluenceConfig {
    /// 20 particles, 100 clubs, fixed level `m`, positions in
    /// `[1000, 2000]^n` except one particle at the origin.
    pub fn new(level: usize, dims: usize, iterations: usize) -> Self {
        Self {
            swarm_size: 20,
            n_clubs: 100,
            level,
            dims,
            iterations,
            inertia: Inertia::Random(1.458),
            phi: PsoConfig::PHI,
            init_lo: 1000.0,
            init_hi: 2000.0,
        }
    }
}

fn value(x: &[f64]) -> f64 {
    x.iter().sum()
}

/// Average swarm value (sum of coordinates) at iterations `0..=iterations`;
/// entry 0 is the initial swarm. Particle 0 starts at the origin.
pub fn influence_experiment(cfg: &InfluenceConfig, rng: &mut Rng) -> Result<Vec<f64>> {
    if cfg.swarm_size < 2 || cfg.dims == 0 {
        return Err(Error::InvalidParameter("need at least 2 particles and 1 dimension".into()));
    }
    let params = ClubParams::fixed(cfg.n_clubs, cfg.level);
    let pso = PsoConfig {
        swarm_size: cfg.swarm_size,
        inertia: cfg.inertia,
        chi: 1.0,
        phi1: cfg.phi,
        phi2: cfg.phi,
        topology: Topology::Clubs(params),
    };
    pso.validate()?;
    let space = SearchSpace::cube(cfg.dims, cfg.init_lo, cfg.init_hi)?;
    let mut swarm: Vec<Particle> = (0..cfg.swarm_size)
        .map(|i| {
            let x = if i == 0 { vec![0.0; cfg.dims] } else { space.sample_uniform(rng) };
            Particle { pbest_x: x.clone(), v: vec![0.0; cfg.dims], x, pbest_f: f64::INFINITY }
        })
        .collect();
    let mut nb = Neighborhood::Clubs(ClubRegistry::random(cfg.swarm_size, params, rng)?);
    let mut series = Vec::with_capacity(cfg.iterations + 1);
    for iter in 0..=cfg.iterations {
        let mut total = 0.0;
        for p in swarm.iter_mut() {
            let f = value(&p.x);
            total += f;
            if f < p.pbest_f {
                p.pbest_f = f;
                p.pbest_x.clone_from(&p.x);
            }
        }
        series.push(total / cfg.swarm_size as f64);
        if iter < cfg.iterations {
            step(&mut swarm, &mut nb, &pso, &space, iter + 1, rng);
        }
    }
    Ok(series)
}
